#include "projgeo/curvature.hpp"

#include <cmath>

#include "projgeo/kernels.hpp"
#include "projgeo/random.hpp"

namespace projgeo {

namespace {

double tangent_norm(const ModelPoint& p, const Vec3& v) {
    return std::sqrt(std::max(0.0, tangent_dot(p, v, v)));
}

std::pair<Vec3, Vec3> orthonormal_tangent_frame(const ModelPoint& p, std::mt19937_64& rng) {
    Vec3 e1 = Vec3::Zero(), e2 = Vec3::Zero();
    for (int attempt = 0; attempt < 64; ++attempt) {
        const Eigen::VectorXd g = random_unit_vector(rng, 3);
        Vec3 cand = tangent_projection(p, Vec3(g[0], g[1], g[2]));
        const double n = tangent_norm(p, cand);
        if (n < 1e-6) continue;
        if (e1.isZero()) {
            e1 = cand / n;
            continue;
        }
        cand -= tangent_dot(p, cand, e1) * e1;
        const double n2 = tangent_norm(p, cand);
        if (n2 < 1e-6) continue;
        e2 = cand / n2;
        break;
    }
    return {e1, e2};
}

}  // namespace

Parallelogramoid build_parallelogramoid(double kappa, const ModelPoint& p, const Vec3& v0,
                                        const Vec3& w0, double t, double u) {
    if (p.kappa != kappa) throw DimensionError("base point curvature mismatch");
    if (!(t > 0) || !(u > 0)) throw DimensionError("side scales must be positive");
    const double nv = tangent_norm(p, v0);
    const double nw = tangent_norm(p, w0);
    if (nv < 1e-14 || nw < 1e-14)
        throw DimensionError("direction vectors must be nonzero tangents");
    if (std::abs(tangent_dot(p, v0, w0)) > 1e-10 * nv * nw)
        throw DimensionError("direction vectors must be g-perpendicular");
    const double bound = 0.5 * M_PI / std::sqrt(std::max(1.0, kappa));
    if (t * nv + u * nw >= bound)
        throw RegimeError("side scales exceed the comparison scale bound");

    Parallelogramoid pg;
    pg.kappa = kappa;
    pg.p = p;
    pg.v0 = v0;
    pg.w0 = w0;
    pg.t = t;
    pg.u = u;
    pg.sigma_t = exp_map(p, t * v0);
    pg.gamma0_u = exp_map(p, u * w0);
    if (kappa == 0.0) {
        pg.gamma_t_u = exp_map(pg.sigma_t, u * w0);
    } else {
        const GeodesicSegment sigma = make_segment(p, pg.sigma_t);
        const TangentVector wt = parallel_transport(sigma, TangentVector{p, w0}, 1.0);
        pg.gamma_t_u = exp_map(pg.sigma_t, u * wt.v);
    }
    return pg;
}

std::pair<double, double> projection_identity_check(const Parallelogramoid& pg) {
    const GeodesicSegment gamma_t = make_segment(pg.sigma_t, pg.gamma_t_u);
    const GeodesicSegment gamma_0 = make_segment(pg.p, pg.gamma0_u);
    const FootResult f1 = project_to_geodesic(gamma_t, pg.p);
    const FootResult f2 = project_to_geodesic(gamma_0, pg.sigma_t);
    return {distance(f1.foot, pg.sigma_t), distance(f2.foot, pg.p)};
}

CurvatureReport curvature_estimate(double kappa, const ModelPoint& p, const Vec3& v0,
                                   const Vec3& w0, const std::vector<double>& h_list) {
    if (h_list.size() < 2) throw DimensionError("need at least two step sizes");
    CurvatureReport rep;
    rep.true_kappa = kappa;
    for (const double h : h_list) {
        const Parallelogramoid pg = build_parallelogramoid(kappa, p, v0, w0, h, h);
        const double base = distance(pg.p, pg.sigma_t);
        const double far = distance(pg.gamma0_u, pg.gamma_t_u);
        const double across = distance(pg.p, pg.gamma0_u);
        const double den = (across * base) * (across * base);
        const double est = (base * base - far * far) / den;
        rep.h_values.push_back(h);
        rep.estimates.push_back(est);
        const double diff = base - far;
        const double tolerance = 1e-12 * (1.0 + base);
        if (kappa > 0 && diff < -tolerance) ++rep.inequality_violations;
        if (kappa < 0 && diff > tolerance) ++rep.inequality_violations;
        if (kappa == 0 && std::abs(diff) > 1e-9 * (1.0 + base)) ++rep.inequality_violations;
    }
    const std::size_t n = rep.estimates.size();
    const double h1 = rep.h_values[n - 2], h2 = rep.h_values[n - 1];
    const double e1 = rep.estimates[n - 2], e2 = rep.estimates[n - 1];
    rep.extrapolated = (h1 * h1 * e2 - h2 * h2 * e1) / (h1 * h1 - h2 * h2);
    return rep;
}

NpcSummary npc_projection_test(double kappa, int trials, std::uint64_t seed) {
    if (trials < 1) throw DimensionError("need at least one trial");
    NpcSummary sum;
    sum.trials = trials;

    const kernels::ModelSweep sweep = kernels::nonexpansiveness_sweep(kappa, trials, seed, 1e-9);
    sum.nonexpansive_violations = sweep.violations;
    sum.worst_nonexpansive_residual = sweep.worst_residual;

    // best-approximation inequality d(p, sigma(t)) <= d(gamma_0(u), gamma_t(u))
    const double r = kappa == 0.0 ? 1.0 : 1.0 / std::sqrt(std::abs(kappa));
    double worst_gap = 0.0;
    int gap_violations = 0;
    for (int k = 0; k < trials; ++k) {
        auto rng = make_rng(seed ^ 0x9e37ull, static_cast<std::uint64_t>(k));
        ModelPoint p;
        if (kappa == 0.0) {
            p = make_model_point(0.0, random_vector(rng, 2, 2.0));
        } else {
            p = ModelPoint{kappa, Vec3(0, 0, r)};
            const Eigen::VectorXd g = random_unit_vector(rng, 2);
            p = exp_map(p, uniform(rng, 0.0, 0.5 * r) * Vec3(g[0], g[1], 0.0));
        }
        const auto [e1, e2] = orthonormal_tangent_frame(p, rng);
        const double h = uniform(rng, 0.02, 0.2) * std::min(1.0, r);
        const Parallelogramoid pg = build_parallelogramoid(kappa, p, e1, e2, h, h);
        const double gap = distance(pg.p, pg.sigma_t) - distance(pg.gamma0_u, pg.gamma_t_u);
        // gap > 0 violates the inequality that characterizes kappa <= 0
        if (kappa <= 0 && gap > 1e-9 * (1.0 + h)) ++gap_violations;
        worst_gap = std::max(worst_gap, gap);
    }
    sum.best_approx_violations = gap_violations;
    sum.worst_best_approx_gap = worst_gap;

    if (kappa > 0) {
        // directed search near the expanding configuration: queries at a
        // fixed latitude over an equatorial segment
        double best = 0.0;
        const ModelPoint pole{kappa, Vec3(0, 0, r)};
        for (double lat = 0.3; lat <= 0.9; lat += 0.1) {
            for (double gap = 0.2; gap <= 0.8; gap += 0.1) {
                const auto at = [&](double lon, double la) {
                    return ModelPoint{kappa, Vec3(r * std::cos(la) * std::cos(lon),
                                                  r * std::cos(la) * std::sin(lon),
                                                  r * std::sin(la))};
                };
                const GeodesicSegment seg = make_segment(at(-0.5, 0.0), at(0.5, 0.0));
                const ModelPoint q1 = at(-gap / 2, lat);
                const ModelPoint q2 = at(gap / 2, lat);
                try {
                    best = std::min(best, nonexpansiveness_residual(seg, q1, q2));
                } catch (const RegimeError&) {
                    continue;
                }
            }
        }
        sum.directed_residual = best;
        sum.directed_violation_found = best < -1e-3;
    }
    return sum;
}

}  // namespace projgeo
