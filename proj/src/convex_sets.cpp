#include "projgeo/convex_sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace projgeo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vec lerp(const Vec& a, const Vec& b, double t) { return (1.0 - t) * a + t * b; }

double point_segment_distance(const Vec& a, const Vec& b, const Vec& x) {
    const Vec d = b - a;
    const double len2 = d.squaredNorm();
    if (len2 == 0.0) return (x - a).norm();
    const double t = std::clamp((x - a).dot(d) / len2, 0.0, 1.0);
    return (x - lerp(a, b, t)).norm();
}

// Andrew monotone chain, counterclockwise hull. Collinear inputs give a
// 2-point hull.
std::vector<Vec> hull2d(std::vector<Vec> pts) {
    std::sort(pts.begin(), pts.end(), [](const Vec& p, const Vec& q) {
        return p[0] < q[0] || (p[0] == q[0] && p[1] < q[1]);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Vec& p, const Vec& q) { return p == q; }),
              pts.end());
    const auto cross = [](const Vec& o, const Vec& a, const Vec& b) {
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    if (pts.size() <= 2) return pts;
    std::vector<Vec> h(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0) --k;
        h[k++] = p;
    }
    const std::size_t lower = k + 1;
    for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
        while (k >= lower && cross(h[k - 2], h[k - 1], *it) <= 0) --k;
        h[k++] = *it;
    }
    h.resize(k - 1);
    return h;
}

bool inside_hull2d(const std::vector<Vec>& hull, const Vec& x, double tol) {
    if (hull.size() == 1) return (x - hull[0]).norm() <= tol;
    if (hull.size() == 2) return point_segment_distance(hull[0], hull[1], x) <= tol;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const Vec& a = hull[i];
        const Vec& b = hull[(i + 1) % hull.size()];
        const double c = (b[0] - a[0]) * (x[1] - a[1]) - (b[1] - a[1]) * (x[0] - a[0]);
        if (c < -tol * std::max(1.0, (b - a).norm())) return false;
    }
    return true;
}

// Nearest affine combination sum(w_i v_i) = x with w >= 0, sum w = 1,
// by enumerating faces (subsets of at most dim+1 vertices). Exact for
// the small vertex counts this library works with.
double simplex_least_squares_distance(const std::vector<Vec>& verts, const Vec& x) {
    const int m = static_cast<int>(verts.size());
    const int n = static_cast<int>(x.size());
    if (m > 16) throw UnsupportedVariantError("polytope has too many vertices (max 16)");
    double best = kInf;
    const int max_size = std::min(m, n + 1);
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
        const int cnt = __builtin_popcount(mask);
        if (cnt > max_size) continue;
        std::vector<int> idx;
        for (int i = 0; i < m; ++i)
            if (mask & (1u << i)) idx.push_back(i);
        // minimize |V w - x| with sum w = 1: substitute w_k, solve LS in the rest
        const Vec& v0 = verts[idx.back()];
        Mat d(n, cnt - 1);
        for (int j = 0; j + 1 < cnt; ++j) d.col(j) = verts[idx[j]] - v0;
        Vec w_red;
        if (cnt == 1) {
            w_red = Vec(0);
        } else {
            w_red = d.colPivHouseholderQr().solve(x - v0);
        }
        double w_last = 1.0;
        bool feasible = true;
        for (int j = 0; j + 1 < cnt; ++j) {
            if (w_red[j] < -1e-12) feasible = false;
            w_last -= w_red[j];
        }
        if (w_last < -1e-12) feasible = false;
        if (!feasible) continue;
        Vec p = w_last * v0;
        for (int j = 0; j + 1 < cnt; ++j) p += w_red[j] * verts[idx[j]];
        best = std::min(best, (x - p).norm());
    }
    return best;
}

struct ThetaRegion {
    // feasible region of slab parameters: a_i . theta <= b_i
    std::vector<Vec> normals;
    std::vector<double> offsets;

    bool feasible(const Vec& theta, double tol) const {
        for (std::size_t i = 0; i < normals.size(); ++i)
            if (normals[i].dot(theta) > offsets[i] + tol) return false;
        return true;
    }
};

ThetaRegion theta_region(const AffineSlab& s, const Mat& basis) {
    ThetaRegion r;
    for (const auto& hs : s.constraints) {
        r.normals.push_back(basis.transpose() * hs.normal);
        r.offsets.push_back(hs.offset - hs.normal.dot(s.base));
    }
    return r;
}

Mat orthonormal_basis(const AffineSlab& s) {
    const int n = static_cast<int>(s.base.size());
    const int k = static_cast<int>(s.span.size());
    Mat b(n, k);
    for (int j = 0; j < k; ++j) b.col(j) = s.span[j];
    Eigen::HouseholderQR<Mat> qr(b);
    Mat q = qr.householderQ() * Mat::Identity(n, k);
    Mat r = q.transpose() * b;
    for (int j = 0; j < k; ++j)
        if (std::abs(r(j, j)) < 1e-12 * std::max(1.0, b.col(j).norm()))
            throw UnsupportedVariantError("slab span directions are linearly dependent");
    return q;
}

// Sutherland-Hodgman clip of a convex polygon by a . theta <= b.
std::vector<Eigen::Vector2d> clip_halfplane(const std::vector<Eigen::Vector2d>& poly,
                                            const Eigen::Vector2d& a, double b) {
    std::vector<Eigen::Vector2d> out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Eigen::Vector2d& p = poly[i];
        const Eigen::Vector2d& q = poly[(i + 1) % n];
        const double dp = a.dot(p) - b;
        const double dq = a.dot(q) - b;
        if (dp <= 0) out.push_back(p);
        if ((dp < 0 && dq > 0) || (dp > 0 && dq < 0)) {
            const double t = dp / (dp - dq);
            out.push_back(p + t * (q - p));
        }
    }
    return out;
}

std::vector<Eigen::Vector2d> feasible_polygon(const ThetaRegion& region, double radius) {
    std::vector<Eigen::Vector2d> poly = {{-radius, -radius},
                                         {radius, -radius},
                                         {radius, radius},
                                         {-radius, radius}};
    for (std::size_t i = 0; i < region.normals.size() && !poly.empty(); ++i)
        poly = clip_halfplane(poly, Eigen::Vector2d(region.normals[i]), region.offsets[i]);
    return poly;
}

void append_linspace(std::vector<Vec>& out, const Vec& a, const Vec& b, int res) {
    for (int i = 0; i < res; ++i)
        out.push_back(res == 1 ? a : lerp(a, b, static_cast<double>(i) / (res - 1)));
}

void dedupe(std::vector<Vec>& pts) {
    std::sort(pts.begin(), pts.end(), [](const Vec& p, const Vec& q) {
        for (int i = 0; i < p.size(); ++i) {
            if (p[i] < q[i]) return true;
            if (p[i] > q[i]) return false;
        }
        return false;
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Vec& p, const Vec& q) { return p == q; }),
              pts.end());
}

}  // namespace

int dimension(const ConvexSet& set) {
    return std::visit(
        [](const auto& s) -> int {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Segment>) return static_cast<int>(s.a.size());
            else if constexpr (std::is_same_v<T, HalfLine>) return static_cast<int>(s.origin.size());
            else if constexpr (std::is_same_v<T, Line>) return static_cast<int>(s.point.size());
            else if constexpr (std::is_same_v<T, Polytope>) {
                if (s.vertices.empty()) throw DimensionError("polytope needs at least one vertex");
                return static_cast<int>(s.vertices.front().size());
            } else {
                return static_cast<int>(s.base.size());
            }
        },
        set);
}

ConvexSet normalized(ConvexSet set) {
    std::visit(
        [&](auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, HalfLine>) {
                const double n = s.direction.norm();
                if (n < 1e-14) throw DimensionError("half-line direction must be nonzero");
                s.direction /= n;
            } else if constexpr (std::is_same_v<T, Line>) {
                const double n = s.direction.norm();
                if (n < 1e-14) throw DimensionError("line direction must be nonzero");
                s.direction /= n;
            } else if constexpr (std::is_same_v<T, AffineSlab>) {
                const Mat basis = orthonormal_basis(s);
                const int k = static_cast<int>(basis.cols());
                if (k > 2)
                    throw UnsupportedVariantError("slabs support at most two span directions");
                std::vector<Vec> span;
                for (int j = 0; j < k; ++j) span.push_back(basis.col(j));
                s.span = std::move(span);
                // feasibility sampling over a coarse parameter box
                const ThetaRegion region = theta_region(s, basis);
                double scale = 1.0;
                for (std::size_t i = 0; i < region.offsets.size(); ++i)
                    scale = std::max(scale, std::abs(region.offsets[i]));
                const double r = 10.0 * scale;
                bool ok = false;
                const int g = 41;
                if (k == 1) {
                    for (int i = 0; i < g && !ok; ++i) {
                        Vec th(1);
                        th[0] = -r + 2.0 * r * i / (g - 1);
                        ok = region.feasible(th, 1e-9);
                    }
                } else {
                    for (int i = 0; i < g && !ok; ++i)
                        for (int j = 0; j < g && !ok; ++j) {
                            Vec th(2);
                            th[0] = -r + 2.0 * r * i / (g - 1);
                            th[1] = -r + 2.0 * r * j / (g - 1);
                            ok = region.feasible(th, 1e-9);
                        }
                }
                if (!ok)
                    throw UnsupportedVariantError(
                        "slab constraints have empty intersection with the affine span");
            }
        },
        set);
    return set;
}

double euclidean_distance(const ConvexSet& set, const Vec& x) {
    if (x.size() != dimension(set)) throw DimensionError("point/set dimension mismatch");
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Segment>) {
                return point_segment_distance(s.a, s.b, x);
            } else if constexpr (std::is_same_v<T, HalfLine>) {
                const double t = std::max(0.0, (x - s.origin).dot(s.direction));
                return (x - s.origin - t * s.direction).norm();
            } else if constexpr (std::is_same_v<T, Line>) {
                const double t = (x - s.point).dot(s.direction);
                return (x - s.point - t * s.direction).norm();
            } else if constexpr (std::is_same_v<T, Polytope>) {
                if (s.vertices.size() == 1) return (x - s.vertices[0]).norm();
                if (x.size() == 2) {
                    const auto hull = hull2d(s.vertices);
                    if (inside_hull2d(hull, x, 0.0)) return 0.0;
                    double best = kInf;
                    for (std::size_t i = 0; i < hull.size(); ++i)
                        best = std::min(best, point_segment_distance(
                                                  hull[i], hull[(i + 1) % hull.size()], x));
                    return best;
                }
                return simplex_least_squares_distance(s.vertices, x);
            } else {
                const int k = static_cast<int>(s.span.size());
                Mat basis(x.size(), k);
                for (int j = 0; j < k; ++j) basis.col(j) = s.span[j];
                const Vec theta_free = basis.transpose() * (x - s.base);
                const double off2 = (x - s.base - basis * theta_free).squaredNorm();
                const ThetaRegion region = theta_region(s, basis);
                if (region.feasible(theta_free, 0.0)) return std::sqrt(off2);
                double best = kInf;
                if (k == 1) {
                    double lo = -kInf, hi = kInf;
                    for (std::size_t i = 0; i < region.normals.size(); ++i) {
                        const double a = region.normals[i][0], b = region.offsets[i];
                        if (std::abs(a) < 1e-15) {
                            if (b < 0) return kInf;  // infeasible
                        } else if (a > 0) {
                            hi = std::min(hi, b / a);
                        } else {
                            lo = std::max(lo, b / a);
                        }
                    }
                    const double t = std::clamp(theta_free[0], lo, hi);
                    best = std::abs(t - theta_free[0]);
                } else {
                    // project onto each active boundary line and each vertex pair
                    const Eigen::Vector2d th(theta_free);
                    for (std::size_t i = 0; i < region.normals.size(); ++i) {
                        const Eigen::Vector2d a(region.normals[i]);
                        const double na = a.squaredNorm();
                        if (na < 1e-30) continue;
                        Eigen::Vector2d cand = th - ((a.dot(th) - region.offsets[i]) / na) * a;
                        Vec candv(2);
                        candv << cand[0], cand[1];
                        if (region.feasible(candv, 1e-10))
                            best = std::min(best, (cand - th).norm());
                        for (std::size_t j = i + 1; j < region.normals.size(); ++j) {
                            Mat m(2, 2);
                            m.row(0) = region.normals[i].transpose();
                            m.row(1) = region.normals[j].transpose();
                            if (std::abs(m.determinant()) < 1e-14) continue;
                            Eigen::Vector2d rhs(region.offsets[i], region.offsets[j]);
                            Eigen::Vector2d v = m.inverse() * rhs;
                            Vec vv(2);
                            vv << v[0], v[1];
                            if (region.feasible(vv, 1e-10)) best = std::min(best, (v - th).norm());
                        }
                    }
                }
                return std::sqrt(off2 + best * best);
            }
        },
        set);
}

bool contains(const ConvexSet& set, const Vec& x, double tol) {
    if (!(tol > 0)) throw DimensionError("membership tolerance must be positive");
    return euclidean_distance(set, x) <= tol;
}

std::vector<Vec> sample_grid(const ConvexSet& set, int resolution, double radius) {
    if (resolution < 2) throw DimensionError("sample resolution must be >= 2");
    if (!(radius > 0)) throw DimensionError("clip radius must be positive");
    std::vector<Vec> pts;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Segment>) {
                append_linspace(pts, s.a, s.b, resolution);
            } else if constexpr (std::is_same_v<T, HalfLine>) {
                append_linspace(pts, s.origin, Vec(s.origin + radius * s.direction), resolution);
            } else if constexpr (std::is_same_v<T, Line>) {
                append_linspace(pts, Vec(s.point - radius * s.direction),
                                Vec(s.point + radius * s.direction), resolution);
            } else if constexpr (std::is_same_v<T, Polytope>) {
                if (s.vertices.size() <= 2 || dimension(set) != 2) {
                    for (std::size_t i = 0; i < s.vertices.size(); ++i)
                        for (std::size_t j = i + 1; j < s.vertices.size(); ++j)
                            append_linspace(pts, s.vertices[i], s.vertices[j], resolution);
                    for (const auto& v : s.vertices) pts.push_back(v);
                } else {
                    const auto hull = hull2d(s.vertices);
                    for (std::size_t i = 0; i < hull.size(); ++i)
                        append_linspace(pts, hull[i], hull[(i + 1) % hull.size()], resolution);
                    // interior lattice; capped, the boundary carries the accuracy
                    const int lat = std::min(resolution, 1001);
                    Vec lo = hull[0], hi = hull[0];
                    for (const auto& v : hull) {
                        lo = lo.cwiseMin(v);
                        hi = hi.cwiseMax(v);
                    }
                    for (int i = 0; i < lat; ++i)
                        for (int j = 0; j < lat; ++j) {
                            Vec p(2);
                            p[0] = lo[0] + (hi[0] - lo[0]) * i / (lat - 1);
                            p[1] = lo[1] + (hi[1] - lo[1]) * j / (lat - 1);
                            if (inside_hull2d(hull, p, -1e-12)) pts.push_back(p);
                        }
                }
            } else {
                const int k = static_cast<int>(s.span.size());
                Mat basis(s.base.size(), k);
                for (int j = 0; j < k; ++j) basis.col(j) = s.span[j];
                const ThetaRegion region = theta_region(s, basis);
                const double r = radius / std::sqrt(static_cast<double>(k));
                if (k == 1) {
                    double lo = -r, hi = r;
                    for (std::size_t i = 0; i < region.normals.size(); ++i) {
                        const double a = region.normals[i][0], b = region.offsets[i];
                        if (std::abs(a) < 1e-15) continue;
                        if (a > 0)
                            hi = std::min(hi, b / a);
                        else
                            lo = std::max(lo, b / a);
                    }
                    if (lo > hi) throw ClipMissError("clip region misses the slab");
                    for (int i = 0; i < resolution; ++i) {
                        const double t = lo + (hi - lo) * i / (resolution - 1);
                        pts.push_back(s.base + t * basis.col(0));
                    }
                } else {
                    const auto poly = feasible_polygon(region, r);
                    if (poly.empty()) throw ClipMissError("clip region misses the slab");
                    std::vector<Vec> theta_pts;
                    for (std::size_t i = 0; i < poly.size(); ++i) {
                        Vec a(2), b(2);
                        a << poly[i][0], poly[i][1];
                        const auto& nxt = poly[(i + 1) % poly.size()];
                        b << nxt[0], nxt[1];
                        append_linspace(theta_pts, a, b, resolution);
                    }
                    const int lat = std::min(resolution, 301);
                    Eigen::Vector2d lo = poly[0], hi = poly[0];
                    for (const auto& v : poly) {
                        lo = lo.cwiseMin(v);
                        hi = hi.cwiseMax(v);
                    }
                    for (int i = 0; i < lat; ++i)
                        for (int j = 0; j < lat; ++j) {
                            Vec th(2);
                            th[0] = lo[0] + (hi[0] - lo[0]) * i / (lat - 1);
                            th[1] = lo[1] + (hi[1] - lo[1]) * j / (lat - 1);
                            if (region.feasible(th, -1e-12) && th.lpNorm<Eigen::Infinity>() <= r)
                                theta_pts.push_back(th);
                        }
                    for (const auto& th : theta_pts) pts.push_back(s.base + basis * th);
                }
            }
        },
        set);
    dedupe(pts);
    if (pts.empty()) throw ClipMissError("clip region misses the set");
    return pts;
}

ConvexSet translated(const ConvexSet& set, const Vec& c) {
    ConvexSet out = set;
    std::visit(
        [&](auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Segment>) {
                s.a += c;
                s.b += c;
            } else if constexpr (std::is_same_v<T, HalfLine>) {
                s.origin += c;
            } else if constexpr (std::is_same_v<T, Line>) {
                s.point += c;
            } else if constexpr (std::is_same_v<T, Polytope>) {
                for (auto& v : s.vertices) v += c;
            } else {
                for (auto& hs : s.constraints) hs.offset += hs.normal.dot(c);
                s.base += c;
            }
        },
        out);
    return out;
}

std::pair<ConvexSet, ConvexSet> matsumoto_demo_sets() {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    Vec p0(2), dir(2), origin(2);
    p0 << 0.0, 0.0;
    dir << inv_sqrt2, -inv_sqrt2;
    origin << 0.5, 0.5;
    return {Line{p0, dir}, HalfLine{origin, dir}};
}

}  // namespace projgeo
