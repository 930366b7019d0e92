#include "projgeo/projection.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace projgeo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGolden = 0.6180339887498949;

Vec displacement(const Vec& s, const Vec& q, ProjMode mode) {
    return mode == ProjMode::Forward ? Vec(s - q) : Vec(q - s);
}

// phi(t) = F(gamma(t) - q) or F(q - gamma(t)) along gamma(t) = o + t*d.
struct LineObjective {
    const NormSpec* spec;
    Vec origin, dir;
    Vec q;
    ProjMode mode;

    Vec point(double t) const { return origin + t * dir; }

    double value(double t) const {
        return detail::eval_norm_unchecked(*spec, displacement(point(t), q, mode));
    }

    // derivative of phi; smooth specs only, returns 0 at a zero of F
    double slope(double t) const {
        const Vec arg = displacement(point(t), q, mode);
        if (detail::eval_norm_unchecked(*spec, arg) == 0.0) return 0.0;
        const double sgn = mode == ProjMode::Forward ? 1.0 : -1.0;
        return sgn * norm_gradient(*spec, arg).dot(dir);
    }
};

// Bisection on the nondecreasing slope of a convex objective. lo/hi may
// be +-inf; finite brackets are found by doubling.
double minimize_smooth(const LineObjective& f, double lo, double hi, double scale) {
    double a = lo, b = hi;
    if (!std::isfinite(a)) {
        double step = std::max(1.0, scale);
        a = std::isfinite(b) ? b - step : -step;
        int k = 0;
        while (f.slope(a) > 0.0) {
            step *= 2.0;
            a -= step;
            if (++k > 200) throw ClipMissError("bracket expansion failed (left flank)");
        }
    } else if (f.slope(a) >= 0.0) {
        return a;
    }
    if (!std::isfinite(b)) {
        double step = std::max(1.0, scale);
        b = a + step;
        int k = 0;
        while (f.slope(b) < 0.0) {
            step *= 2.0;
            b += step;
            if (++k > 200) throw ClipMissError("bracket expansion failed (right flank)");
        }
    } else if (f.slope(b) <= 0.0) {
        return b;
    }
    for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        if (m == a || m == b) break;
        const double dm = f.slope(m);
        if (dm == 0.0) return m;
        (dm < 0.0 ? a : b) = m;
    }
    return 0.5 * (a + b);
}

// Golden section on a bounded interval; used for the non-smooth norm.
double minimize_golden(const std::function<double(double)>& f, double a, double b) {
    double x1 = b - kGolden * (b - a);
    double x2 = a + kGolden * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 200 && (b - a) > 1e-13 * std::max(1.0, std::abs(a) + std::abs(b));
         ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kGolden * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kGolden * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

// Flat objective over a parameter stretch longer than 1e-6 means the
// minimizer may not be unique.
bool flat_at(const std::function<double(double)>& f, double t, double lo, double hi,
             double fstar) {
    const double probe = 5e-7 * std::max(1.0, std::abs(t));
    const double left = std::max(lo, t - probe);
    const double right = std::min(hi, t + probe);
    if (right - left < 1e-6 * std::max(1.0, std::abs(t))) return false;
    return std::abs(f(left) - fstar) < 1e-13 * (1.0 + fstar) &&
           std::abs(f(right) - fstar) < 1e-13 * (1.0 + fstar);
}

struct SolveOutcome {
    Vec minimizer;
    double distance;
    std::vector<double> parameters;
    bool flat = false;
};

double param_scale(const Vec& q, const Vec& base) {
    return 1.0 + q.norm() + base.norm();
}

SolveOutcome solve_on_affine(const NormSpec& spec, const Vec& origin, const Vec& dir,
                             double lo, double hi, const Vec& q, ProjMode mode,
                             double seed_t = 0.0) {
    LineObjective f{&spec, origin, dir, q, mode};
    double t;
    if (is_smooth(spec)) {
        (void)seed_t;
        t = minimize_smooth(f, lo, hi, param_scale(q, origin));
    } else {
        if (!std::isfinite(lo) || !std::isfinite(hi))
            throw UnsupportedVariantError(
                "non-smooth norm projection supports bounded segments only");
        t = minimize_golden([&](double tt) { return f.value(tt); }, lo, hi);
    }
    // snap to a domain endpoint when it is at least as good; endpoint
    // parameters are exact
    double fv = f.value(t);
    if (std::isfinite(lo) && f.value(lo) <= fv) {
        t = lo;
        fv = f.value(lo);
    }
    if (std::isfinite(hi) && f.value(hi) <= fv) {
        t = hi;
        fv = f.value(hi);
    }
    SolveOutcome out;
    out.parameters = {t};
    out.minimizer = f.point(t);
    out.distance = fv;
    out.flat = flat_at([&](double tt) { return f.value(tt); }, t, lo, hi, fv);
    return out;
}

// Segment endpoints must be produced exactly, so the segment is solved in
// the lerp parametrization.
SolveOutcome solve_segment(const NormSpec& spec, const Segment& s, const Vec& q,
                           ProjMode mode) {
    SolveOutcome out = solve_on_affine(spec, s.a, Vec(s.b - s.a), 0.0, 1.0, q, mode);
    const double t = out.parameters[0];
    out.minimizer = (1.0 - t) * s.a + t * s.b;
    return out;
}

double objective_at(const NormSpec& spec, const Vec& x, const Vec& q, ProjMode mode) {
    return detail::eval_norm_unchecked(spec, displacement(x, q, mode));
}

// Cyclic line searches toward the vertices; stalls only at points where
// every vertex direction is ascending, which is the optimality condition.
SolveOutcome solve_polytope(const NormSpec& spec, const Polytope& poly, const Vec& q,
                            ProjMode mode, std::size_t start_vertex = 0) {
    const std::size_t m = poly.vertices.size();
    if (m == 0) throw DimensionError("polytope needs at least one vertex");
    std::size_t best0 = start_vertex % m;
    Vec x = poly.vertices[best0];
    std::vector<double> w(m, 0.0);
    w[best0] = 1.0;
    const double scale = param_scale(q, x);
    for (int cycle = 0; cycle < 500; ++cycle) {
        double moved = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const Vec d = poly.vertices[i] - x;
            if (d.norm() < 1e-15 * scale) continue;
            SolveOutcome step = solve_on_affine(spec, x, d, 0.0, 1.0, q, mode);
            const double t = step.parameters[0];
            if (t > 0.0) {
                for (auto& wi : w) wi *= (1.0 - t);
                w[i] += t;
                moved += t * d.norm();
                x = step.minimizer;
            }
        }
        if (moved < 1e-11 * scale) break;
    }
    SolveOutcome out;
    out.minimizer = x;
    out.distance = objective_at(spec, x, q, mode);
    out.parameters.assign(w.begin(), w.end());
    return out;
}

SolveOutcome solve_slab(const NormSpec& spec, const AffineSlab& slab, const Vec& q,
                        ProjMode mode) {
    const int k = static_cast<int>(slab.span.size());
    Mat basis(slab.base.size(), k);
    for (int j = 0; j < k; ++j) basis.col(j) = slab.span[j];
    // constraints in parameter space
    std::vector<Vec> cn;
    std::vector<double> co;
    for (const auto& hs : slab.constraints) {
        cn.push_back(basis.transpose() * hs.normal);
        co.push_back(hs.offset - hs.normal.dot(slab.base));
    }
    const auto theta_point = [&](const Vec& th) { return Vec(slab.base + basis * th); };
    const auto feasible = [&](const Vec& th) {
        for (std::size_t i = 0; i < cn.size(); ++i)
            if (cn[i].dot(th) > co[i] + 1e-12) return false;
        return true;
    };

    if (k == 1) {
        double lo = -kInf, hi = kInf;
        for (std::size_t i = 0; i < cn.size(); ++i) {
            const double a = cn[i][0];
            if (std::abs(a) < 1e-15) continue;
            if (a > 0)
                hi = std::min(hi, co[i] / a);
            else
                lo = std::max(lo, co[i] / a);
        }
        if (lo > hi) throw ClipMissError("slab parameter range is empty");
        SolveOutcome out = solve_on_affine(spec, slab.base, basis.col(0), lo, hi, q, mode);
        return out;
    }

    // k == 2: clip to a box, minimize over interior (coordinate descent)
    // and over every boundary edge of the feasible polygon, take the best.
    double radius = 4.0 * param_scale(q, slab.base);
    for (int attempt = 0;; ++attempt) {
        std::vector<Eigen::Vector2d> poly = {{-radius, -radius},
                                             {radius, -radius},
                                             {radius, radius},
                                             {-radius, radius}};
        const auto clip = [](std::vector<Eigen::Vector2d> p, const Eigen::Vector2d& a,
                             double b) {
            std::vector<Eigen::Vector2d> out;
            for (std::size_t i = 0; i < p.size(); ++i) {
                const auto& u = p[i];
                const auto& v = p[(i + 1) % p.size()];
                const double du = a.dot(u) - b, dv = a.dot(v) - b;
                if (du <= 0) out.push_back(u);
                if ((du < 0 && dv > 0) || (du > 0 && dv < 0))
                    out.push_back(u + (du / (du - dv)) * (v - u));
            }
            return out;
        };
        for (std::size_t i = 0; i < cn.size() && !poly.empty(); ++i)
            poly = clip(poly, Eigen::Vector2d(cn[i]), co[i]);
        if (poly.empty()) throw ClipMissError("slab constraints are infeasible");

        // interior pass: cyclic coordinate descent from the polygon mean
        Eigen::Vector2d th = Eigen::Vector2d::Zero();
        for (const auto& v : poly) th += v;
        th /= static_cast<double>(poly.size());
        for (int cycle = 0; cycle < 200; ++cycle) {
            double moved = 0.0;
            for (int j = 0; j < 2; ++j) {
                double lo = -kInf, hi = kInf;
                for (std::size_t i = 0; i < cn.size(); ++i) {
                    const double a = cn[i][j];
                    const double rest = cn[i][1 - j] * th[1 - j];
                    if (std::abs(a) < 1e-15) continue;
                    if (a > 0)
                        hi = std::min(hi, (co[i] - rest) / a);
                    else
                        lo = std::max(lo, (co[i] - rest) / a);
                }
                lo = std::max(lo, -radius);
                hi = std::min(hi, radius);
                if (lo > hi) continue;
                Vec th0(2);
                th0 << (j == 0 ? 0.0 : th[0]), (j == 1 ? 0.0 : th[1]);
                SolveOutcome step =
                    solve_on_affine(spec, theta_point(th0), basis.col(j), lo, hi, q, mode);
                moved += std::abs(step.parameters[0] - th[j]);
                th[j] = step.parameters[0];
            }
            if (moved < 1e-11 * radius) break;
        }
        Vec best_th(2);
        best_th << th[0], th[1];
        if (!feasible(best_th)) best_th << poly[0][0], poly[0][1];
        double best_val = objective_at(spec, theta_point(best_th), q, mode);

        // boundary pass
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const Eigen::Vector2d a = poly[i];
            const Eigen::Vector2d b = poly[(i + 1) % poly.size()];
            Vec av(2), dv(2);
            av << a[0], a[1];
            dv << b[0] - a[0], b[1] - a[1];
            if (dv.norm() < 1e-15) continue;
            SolveOutcome step =
                solve_on_affine(spec, theta_point(av), basis * dv, 0.0, 1.0, q, mode);
            if (step.distance < best_val) {
                best_val = step.distance;
                best_th = av + step.parameters[0] * dv;
            }
        }

        const bool unbounded_hit =
            best_th.lpNorm<Eigen::Infinity>() > 0.98 * radius;
        if (unbounded_hit && attempt < 4) {
            radius *= 2.0;
            continue;
        }
        if (unbounded_hit) throw ClipMissError("slab minimizer escaped the clip box");
        SolveOutcome out;
        out.minimizer = theta_point(best_th);
        out.distance = best_val;
        out.parameters = {best_th[0], best_th[1]};
        return out;
    }
}

SolveOutcome solve(const NormSpec& spec, const ConvexSet& set, const Vec& q, ProjMode mode,
                   std::size_t restart_index = 0) {
    if (dimension(set) != dimension(spec) || q.size() != dimension(spec))
        throw DimensionError("norm/set/query dimensions disagree");
    if (!q.allFinite()) throw DimensionError("non-finite query point");
    if (!is_smooth(spec) && !std::holds_alternative<Segment>(set))
        throw UnsupportedVariantError(
            "non-smooth norm projection supports Segment targets only");
    return std::visit(
        [&](const auto& s) -> SolveOutcome {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Segment>) {
                return solve_segment(spec, s, q, mode);
            } else if constexpr (std::is_same_v<T, HalfLine>) {
                return solve_on_affine(spec, s.origin, s.direction, 0.0, kInf, q, mode,
                                       static_cast<double>(restart_index));
            } else if constexpr (std::is_same_v<T, Line>) {
                return solve_on_affine(spec, s.point, s.direction, -kInf, kInf, q, mode,
                                       static_cast<double>(restart_index));
            } else if constexpr (std::is_same_v<T, Polytope>) {
                return solve_polytope(spec, s, q, mode, restart_index);
            } else {
                return solve_slab(spec, s, q, mode);
            }
        },
        set);
}

std::vector<Vec> probe_points(const ConvexSet& set, const Vec& q, const Vec& s,
                              int probe_resolution) {
    const double radius = 2.0 * (1.0 + q.norm() + s.norm());
    return sample_grid(set, probe_resolution, radius);
}

// One-sided difference-quotient certificate for the non-smooth norm:
// convexity makes the quotient an upper bound on the true directional
// derivative, so a nonnegative value at the optimum is guaranteed.
double nonsmooth_certificate(const NormSpec& spec, const ConvexSet& set, const Vec& s,
                             const Vec& q, ProjMode mode) {
    const Vec y = displacement(s, q, mode);
    const double fy = detail::eval_norm_unchecked(spec, y);
    if (fy == 0.0) return kInf;
    const double h = 1e-8 * std::max(1.0, s.norm() + q.norm());
    double worst = kInf;
    for (const auto& z : probe_points(set, q, s, 64)) {
        const Vec dir = z - s;
        if (dir.norm() < 1e-14) continue;
        const Vec stepped = displacement(Vec(s + h * dir), q, mode);
        const double quot = (detail::eval_norm_unchecked(spec, stepped) - fy) / h;
        worst = std::min(worst, fy * quot);
    }
    return worst;
}

}  // namespace

double variational_residual(const NormSpec& spec, const ConvexSet& set, const Vec& s,
                            const Vec& q, ProjMode mode, int probe_resolution) {
    if (!is_smooth(spec))
        throw UnsupportedVariantError("variational residual needs a smooth norm");
    if (s.size() != q.size()) throw DimensionError("point dimensions differ");
    const Vec y = displacement(s, q, mode);
    if (eval_norm(spec, y) == 0.0) return kInf;  // member point projects to itself
    double worst = kInf;
    for (const auto& z : probe_points(set, q, s, probe_resolution)) {
        const Vec dir = z - s;
        if (dir.norm() < 1e-14) continue;
        worst = std::min(worst, metric_form(spec, y, dir));
    }
    return worst;
}

ProjectionResult project(const NormSpec& spec, const ConvexSet& set, const Vec& q,
                         ProjMode mode) {
    validate_spec(spec);
    SolveOutcome sol = solve(spec, set, q, mode);
    ProjectionResult res;
    res.minimizer = sol.minimizer;
    res.distance = sol.distance;
    res.parameters = sol.parameters;
    if (is_smooth(spec)) {
        res.variational_residual = variational_residual(spec, set, sol.minimizer, q, mode);
    } else {
        res.variational_residual = nonsmooth_certificate(spec, set, sol.minimizer, q, mode);
    }
    res.unique_certified = !sol.flat && res.variational_residual >= -1e-8;
    return res;
}

ProjectionResult project_forward(const NormSpec& spec, const ConvexSet& set, const Vec& q) {
    return project(spec, set, q, ProjMode::Forward);
}

ProjectionResult project_backward(const NormSpec& spec, const ConvexSet& set, const Vec& q) {
    return project(spec, set, q, ProjMode::Backward);
}

bool uniqueness_probe(const NormSpec& spec, const ConvexSet& set, const Vec& q,
                      ProjMode mode, int restarts) {
    if (restarts < 2) throw DimensionError("uniqueness probe needs at least 2 restarts");
    Vec first;
    for (int r = 0; r < restarts; ++r) {
        SolveOutcome sol = solve(spec, set, q, mode, static_cast<std::size_t>(r));
        if (r == 0) {
            first = sol.minimizer;
        } else if ((sol.minimizer - first).norm() > 1e-7) {
            return false;
        }
    }
    return true;
}

}  // namespace projgeo
