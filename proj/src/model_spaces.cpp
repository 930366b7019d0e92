#include "projgeo/model_spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace projgeo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kClampTol = 1e-12;

double radius_of(double kappa) { return 1.0 / std::sqrt(std::abs(kappa)); }

double lorentz_dot(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] - a[2] * b[2];
}

Vec3 lorentz_cross(const Vec3& a, const Vec3& b) {
    return Vec3(a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
                -(a[0] * b[1] - a[1] * b[0]));
}

void require_same_space(const ModelPoint& p, const ModelPoint& q) {
    if (p.kappa != q.kappa) throw DimensionError("model points live in different curvatures");
}

double clamped(double v, double lo, double hi, const char* what) {
    if (v < lo - kClampTol || v > hi + kClampTol) throw RegimeError(what);
    return std::clamp(v, lo, hi);
}

ModelPoint renormalized(double kappa, Vec3 x) {
    if (kappa == 0.0) {
        x[2] = 0.0;
        return {kappa, x};
    }
    const double r = radius_of(kappa);
    if (kappa > 0) {
        const double n = x.norm();
        if (std::abs(n - r) > 1e-10 * r + 1e-10)
            throw DimensionError("point violates the sphere embedding constraint");
        return {kappa, Vec3(x * (r / n))};
    }
    const double q = -lorentz_dot(x, x);
    if (q <= 0 || x[2] <= 0)
        throw DimensionError("point is not on the upper hyperboloid sheet");
    const double n = std::sqrt(q);
    if (std::abs(n - r) > 1e-10 * r + 1e-10)
        throw DimensionError("point violates the hyperboloid embedding constraint");
    return {kappa, Vec3(x * (r / n))};
}

}  // namespace

ModelPoint make_model_point(double kappa, const Eigen::VectorXd& coords) {
    if (kappa == 0.0) {
        if (coords.size() != 2 && !(coords.size() == 3 && coords[2] == 0.0))
            throw DimensionError("flat model points take 2 coordinates");
        Vec3 x(coords[0], coords[1], 0.0);
        return {kappa, x};
    }
    if (coords.size() != 3)
        throw DimensionError("curved model points take 3 embedded coordinates");
    return renormalized(kappa, Vec3(coords[0], coords[1], coords[2]));
}

double model_diameter(double kappa) {
    return kappa > 0 ? M_PI / std::sqrt(kappa) : kInf;
}

double distance(const ModelPoint& p, const ModelPoint& q) {
    require_same_space(p, q);
    if (p.kappa == 0.0) return (p.x - q.x).head<2>().norm();
    const double r = radius_of(p.kappa);
    if (p.kappa > 0) {
        const double c = clamped(p.x.dot(q.x) / (r * r), -1.0, 1.0,
                                 "sphere distance argument outside [-1,1]");
        return r * std::acos(c);
    }
    const double c = clamped(-lorentz_dot(p.x, q.x) / (r * r), 1.0, kInf,
                             "hyperboloid distance argument below 1");
    return r * std::acosh(c);
}

Vec3 tangent_projection(const ModelPoint& p, const Vec3& v) {
    if (p.kappa == 0.0) return Vec3(v[0], v[1], 0.0);
    const double r2 = 1.0 / std::abs(p.kappa);
    if (p.kappa > 0) return v - (p.x.dot(v) / r2) * p.x;
    return v + (lorentz_dot(p.x, v) / r2) * p.x;
}

double tangent_dot(const ModelPoint& p, const Vec3& u, const Vec3& v) {
    return p.kappa < 0 ? lorentz_dot(u, v) : u.dot(v);
}

Vec3 log_map(const ModelPoint& p, const ModelPoint& q) {
    require_same_space(p, q);
    const double d = distance(p, q);
    if (p.kappa == 0.0) return q.x - p.x;
    Vec3 w = tangent_projection(p, q.x);
    const double wn = std::sqrt(std::max(0.0, tangent_dot(p, w, w)));
    const double r = radius_of(p.kappa);
    if (wn < 1e-14 * r) {
        if (d < 1e-12 * r) return Vec3::Zero();
        throw RegimeError("log map undefined for antipodal sphere points");
    }
    return (d / wn) * w;
}

ModelPoint exp_map(const ModelPoint& p, const Vec3& v) {
    const Vec3 tv = tangent_projection(p, v);
    if ((tv - v).norm() > 1e-8 * (1.0 + v.norm()))
        throw DimensionError("vector is not tangent at the base point");
    if (p.kappa == 0.0) return {p.kappa, Vec3(p.x + tv)};
    const double s = std::sqrt(std::max(0.0, tangent_dot(p, tv, tv)));
    if (s == 0.0) return p;
    const double r = radius_of(p.kappa);
    Vec3 x;
    if (p.kappa > 0)
        x = std::cos(s / r) * p.x + (r * std::sin(s / r) / s) * tv;
    else
        x = std::cosh(s / r) * p.x + (r * std::sinh(s / r) / s) * tv;
    return renormalized(p.kappa, x);
}

GeodesicSegment make_segment(const ModelPoint& start, const ModelPoint& end) {
    require_same_space(start, end);
    const double len = distance(start, end);
    if (start.kappa > 0 && len >= M_PI * radius_of(start.kappa) * (1.0 - 1e-12))
        throw RegimeError("sphere segment must be shorter than pi*r");
    return {start.kappa, start, end, len};
}

ModelPoint geodesic_point(const GeodesicSegment& seg, double t) {
    if (t < -1e-12 || t > 1.0 + 1e-12) throw DimensionError("geodesic parameter outside [0,1]");
    if (t <= 0.0) return seg.start;
    if (t >= 1.0) return seg.end;
    if (seg.length == 0.0) return seg.start;
    return exp_map(seg.start, t * log_map(seg.start, seg.end));
}

TangentVector parallel_transport(const GeodesicSegment& seg, const TangentVector& w0,
                                 double t) {
    if ((w0.base.x - seg.start.x).norm() > 1e-9 * (1.0 + seg.start.x.norm()))
        throw DimensionError("tangent vector is not based at the segment start");
    const ModelPoint dst = geodesic_point(seg, t);
    if (seg.kappa == 0.0 || seg.length == 0.0) return {dst, w0.v};
    const double r = radius_of(seg.kappa);
    const Vec3 u0 = log_map(seg.start, seg.end) / seg.length;  // unit tangent
    const double s = t * seg.length;
    Vec3 tangent_s, normal;
    double a, b;
    if (seg.kappa > 0) {
        tangent_s = -std::sin(s / r) / r * seg.start.x + std::cos(s / r) * u0;
        normal = (seg.start.x / r).cross(u0);
        a = w0.v.dot(u0);
        b = w0.v.dot(normal);
    } else {
        tangent_s = std::sinh(s / r) / r * seg.start.x + std::cosh(s / r) * u0;
        normal = lorentz_cross(seg.start.x / r, u0);
        normal /= std::sqrt(lorentz_dot(normal, normal));
        a = lorentz_dot(w0.v, u0);
        b = lorentz_dot(w0.v, normal);
    }
    return {dst, Vec3(a * tangent_s + b * normal)};
}

std::array<ModelPoint, 3> comparison_triangle(double d12, double d13, double d23,
                                              double kappa_bar) {
    if (d12 < 0 || d13 < 0 || d23 < 0) throw DimensionError("side lengths must be nonnegative");
    const double slack = 1e-12 * (1.0 + d12 + d13 + d23);
    if (d23 > d12 + d13 + slack || d13 > d12 + d23 + slack || d12 > d13 + d23 + slack)
        throw RegimeError("side lengths violate the triangle inequality");
    if (d12 + d13 + d23 >= 2.0 * model_diameter(kappa_bar))
        throw RegimeError("perimeter must be below twice the model diameter");

    double cos_a = 1.0;
    if (d12 > 0 && d13 > 0) {
        if (kappa_bar == 0.0) {
            cos_a = (d12 * d12 + d13 * d13 - d23 * d23) / (2.0 * d12 * d13);
        } else if (kappa_bar > 0) {
            const double r = radius_of(kappa_bar);
            cos_a = (std::cos(d23 / r) - std::cos(d12 / r) * std::cos(d13 / r)) /
                    (std::sin(d12 / r) * std::sin(d13 / r));
        } else {
            const double r = radius_of(kappa_bar);
            cos_a = (std::cosh(d12 / r) * std::cosh(d13 / r) - std::cosh(d23 / r)) /
                    (std::sinh(d12 / r) * std::sinh(d13 / r));
        }
        cos_a = clamped(cos_a, -1.0, 1.0, "law-of-cosines angle outside [-1,1]");
    }
    const double sin_a = std::sqrt(std::max(0.0, 1.0 - cos_a * cos_a));

    ModelPoint v1;
    Vec3 e1, e2;
    if (kappa_bar == 0.0) {
        v1 = {0.0, Vec3::Zero()};
        e1 = Vec3(1, 0, 0);
        e2 = Vec3(0, 1, 0);
    } else {
        v1 = {kappa_bar, Vec3(0, 0, radius_of(kappa_bar))};
        e1 = Vec3(1, 0, 0);
        e2 = Vec3(0, 1, 0);
    }
    const ModelPoint v2 = exp_map(v1, d12 * e1);
    const ModelPoint v3 = exp_map(v1, d13 * (cos_a * e1 + sin_a * e2));
    return {v1, v2, v3};
}

TriangleReport cat_check(const std::array<ModelPoint, 3>& tri, double kappa_bar,
                         int grid_per_side) {
    if (grid_per_side < 2) throw DimensionError("grid per side must be >= 2");
    const double d12 = distance(tri[0], tri[1]);
    const double d13 = distance(tri[0], tri[2]);
    const double d23 = distance(tri[1], tri[2]);
    if (d12 + d13 + d23 >= 2.0 * model_diameter(kappa_bar))
        throw RegimeError("perimeter must be below twice the model diameter");
    const auto comp = comparison_triangle(d12, d13, d23, kappa_bar);

    // sides in a fixed order with matched comparison sides
    const std::array<std::pair<int, int>, 3> side_ids = {{{0, 1}, {0, 2}, {1, 2}}};
    std::array<GeodesicSegment, 3> sides, comp_sides;
    for (int i = 0; i < 3; ++i) {
        sides[i] = make_segment(tri[side_ids[i].first], tri[side_ids[i].second]);
        comp_sides[i] = make_segment(comp[side_ids[i].first], comp[side_ids[i].second]);
    }

    TriangleReport rep;
    rep.vertices = tri;
    rep.side_lengths = {d12, d13, d23};
    rep.comparison_vertices = comp;
    rep.max_cat_violation = -kInf;
    for (int si = 0; si < 3; ++si)
        for (int sj = si; sj < 3; ++sj)
            for (int i = 0; i < grid_per_side; ++i)
                for (int j = 0; j < grid_per_side; ++j) {
                    const double f1 = static_cast<double>(i) / (grid_per_side - 1);
                    const double f2 = static_cast<double>(j) / (grid_per_side - 1);
                    const ModelPoint x = geodesic_point(sides[si], f1);
                    const ModelPoint y = geodesic_point(sides[sj], f2);
                    const ModelPoint cx = geodesic_point(comp_sides[si], f1);
                    const ModelPoint cy = geodesic_point(comp_sides[sj], f2);
                    rep.max_cat_violation =
                        std::max(rep.max_cat_violation, distance(x, y) - distance(cx, cy));
                    ++rep.sample_count;
                }
    return rep;
}

double ptolemy_residual(const ModelPoint& p1, const ModelPoint& p2, const ModelPoint& p3,
                        const ModelPoint& p4) {
    return distance(p1, p2) * distance(p3, p4) + distance(p1, p4) * distance(p2, p3) -
           distance(p1, p3) * distance(p2, p4);
}

FootResult project_to_geodesic(const GeodesicSegment& seg, const ModelPoint& q) {
    require_same_space(seg.start, q);
    const auto f = [&](double t) { return distance(q, geodesic_point(seg, t)); };
    double a = 0.0, b = 1.0;
    constexpr double golden = 0.6180339887498949;
    double x1 = b - golden * (b - a), x2 = a + golden * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 140; ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - golden * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + golden * (b - a);
            f2 = f(x2);
        }
    }
    double t = 0.5 * (a + b);
    double ft = f(t);
    if (f(0.0) <= ft) {
        t = 0.0;
        ft = f(0.0);
    }
    if (f(1.0) <= ft) {
        t = 1.0;
        ft = f(1.0);
    }
    if (seg.kappa > 0 && ft >= 0.5 * M_PI * radius_of(seg.kappa) * (1.0 - 1e-12))
        throw RegimeError("query point is outside the unimodal sphere projection regime");
    FootResult res;
    res.t = t;
    res.foot = geodesic_point(seg, t);
    res.dist = ft;
    // flat stretches mean the foot is not unique (e.g. pole over an equator
    // segment)
    const double probe = 5e-4;
    const double pl = f(std::max(0.0, t - probe));
    const double pr = f(std::min(1.0, t + probe));
    if (std::min(1.0, t + probe) - std::max(0.0, t - probe) > 1e-6 &&
        std::abs(pl - ft) < 1e-13 * (1.0 + ft) && std::abs(pr - ft) < 1e-13 * (1.0 + ft))
        res.unique = false;
    return res;
}

double nonexpansiveness_residual(const GeodesicSegment& seg, const ModelPoint& q1,
                                 const ModelPoint& q2) {
    const FootResult a = project_to_geodesic(seg, q1);
    const FootResult b = project_to_geodesic(seg, q2);
    return distance(q1, q2) - distance(a.foot, b.foot);
}

AngleResult alexandrov_angle(const ModelPoint& p, const ModelPoint& direction_point,
                             const ModelPoint& z, const std::vector<double>& s_values) {
    const double dz = distance(p, z);
    if (dz <= 0) throw DimensionError("angle target must differ from the base point");
    const double dd = distance(p, direction_point);
    if (dd <= 0) throw DimensionError("direction point must differ from the base point");
    if (s_values.empty()) throw DimensionError("need at least one arc length");
    for (std::size_t i = 0; i < s_values.size(); ++i) {
        if (!(s_values[i] > 0) || s_values[i] > dd)
            throw DimensionError("arc lengths must lie in (0, d(p, direction_point)]");
        if (i > 0 && s_values[i] >= s_values[i - 1])
            throw DimensionError("arc lengths must be strictly decreasing");
    }
    const Vec3 u = log_map(p, direction_point) / dd;
    AngleResult res;
    for (const double s : s_values) {
        const ModelPoint gs = exp_map(p, s * u);
        res.quotients.push_back((dz - distance(gs, z)) / s);
    }
    // s decreasing, quotient non-increasing in s => entries non-decreasing
    for (std::size_t i = 1; i < res.quotients.size(); ++i)
        if (res.quotients[i] < res.quotients[i - 1] - 1e-12) res.monotone = false;

    double limit;
    const std::size_t n = res.quotients.size();
    if (n >= 3) {
        // quadratic extrapolation to s = 0 through the three smallest s
        const double s0 = s_values[n - 3], s1 = s_values[n - 2], s2 = s_values[n - 1];
        const double q0 = res.quotients[n - 3], q1 = res.quotients[n - 2],
                     q2 = res.quotients[n - 1];
        const double l0 = (s1 * s2) / ((s0 - s1) * (s0 - s2));
        const double l1 = (s0 * s2) / ((s1 - s0) * (s1 - s2));
        const double l2 = (s0 * s1) / ((s2 - s0) * (s2 - s1));
        limit = q0 * l0 + q1 * l1 + q2 * l2;
    } else if (n == 2) {
        limit = res.quotients[1] +
                (res.quotients[1] - res.quotients[0]) * s_values[1] / (s_values[0] - s_values[1]);
    } else {
        limit = res.quotients[0];
    }
    res.angle = std::acos(std::clamp(limit, -1.0, 1.0));
    return res;
}

double pythagorean_residual(const ModelPoint& p, const GeodesicSegment& seg) {
    if (seg.kappa > 0)
        throw RegimeError("comparison inequality applies to kappa <= 0 models");
    const FootResult foot = project_to_geodesic(seg, p);
    if (distance(foot.foot, seg.start) > 1e-8 * (1.0 + seg.length))
        throw RegimeError("segment start is not the projection foot of the apex");
    const double a = distance(p, seg.start);
    const double c = distance(p, seg.end);
    return c * c - a * a - seg.length * seg.length;
}

}  // namespace projgeo
