#include "projgeo/double_projection.hpp"

#include <cmath>

#include "projgeo/kernels.hpp"

namespace projgeo {

namespace {

// Largest F value over sampled unit directions; Lipschitz bound of the
// quasi-distance in either argument.
double lipschitz_bound(const NormSpec& spec) {
    const int n = dimension(spec);
    double lip = 0.0;
    if (n == 2) {
        for (int k = 0; k < 128; ++k) {
            const double a = 2.0 * M_PI * k / 128;
            Vec u(2);
            u << std::cos(a), std::sin(a);
            lip = std::max(lip, detail::eval_norm_unchecked(spec, u));
        }
    } else {
        auto rng = make_rng(0xd1a5ull);
        for (int k = 0; k < 256; ++k) {
            const Vec u = random_unit_vector(rng, n);
            lip = std::max(lip, detail::eval_norm_unchecked(spec, u));
            lip = std::max(lip, detail::eval_norm_unchecked(spec, -u));
        }
    }
    return lip;
}

bool is_unbounded(const ConvexSet& set) {
    return std::holds_alternative<Line>(set) || std::holds_alternative<HalfLine>(set) ||
           std::holds_alternative<AffineSlab>(set);
}

Vec base_point(const ConvexSet& set) {
    return std::visit(
        [](const auto& s) -> Vec {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Segment>) return s.a;
            else if constexpr (std::is_same_v<T, HalfLine>) return s.origin;
            else if constexpr (std::is_same_v<T, Line>) return s.point;
            else if constexpr (std::is_same_v<T, Polytope>) return s.vertices.front();
            else return s.base;
        },
        set);
}

double grid_spacing(const ConvexSet& set, const std::vector<Vec>& grid, double radius,
                    int resolution) {
    // parameter-space spacing of the deterministic grids
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Segment>) {
                return (s.b - s.a).norm() / (resolution - 1);
            } else if constexpr (std::is_same_v<T, HalfLine>) {
                return radius / (resolution - 1);
            } else if constexpr (std::is_same_v<T, Line>) {
                return 2.0 * radius / (resolution - 1);
            } else {
                // conservative bound from the sampled extent
                double lo = 0.0;
                for (const auto& p : grid) lo = std::max(lo, (p - grid.front()).norm());
                return 2.0 * lo / (resolution - 1);
            }
        },
        set);
}

}  // namespace

Vec compose(const NormSpec& spec, const ConvexSet& s1, const ConvexSet& s2, const Vec& q,
            CompositionMode mode) {
    const ProjectionResult inner = project(spec, s2, q, mode.inner);
    return project(spec, s1, inner.minimizer, mode.outer).minimizer;
}

DPReport dp_report(const NormSpec& spec, const ConvexSet& s1, const ConvexSet& s2,
                   const Vec& q, DPCase dp_case, int grid_resolution,
                   double tol_fixed_point, double membership_tol) {
    if (!contains(s1, q, membership_tol))
        throw DimensionError("query point must belong to the first set");

    DPReport rep;
    rep.query = q;
    rep.mode = dp_case == DPCase::Forward
                   ? CompositionMode{ProjMode::Backward, ProjMode::Forward}
                   : CompositionMode{ProjMode::Forward, ProjMode::Backward};

    const ProjectionResult inner = project(spec, s2, q, rep.mode.inner);
    rep.proj_distance = inner.distance;
    rep.composed_point = project(spec, s1, inner.minimizer, rep.mode.outer).minimizer;
    rep.fixed_point_residual = (rep.composed_point - q).norm();
    rep.tol_fixed_point = tol_fixed_point;
    rep.dp1_holds = rep.fixed_point_residual <= tol_fixed_point;

    const double lip = lipschitz_bound(spec);
    const double unit_scale = lip > 0 ? 1.0 / lip : 1.0;
    double radius = 10.0 * (1.0 + q.norm() + rep.proj_distance * unit_scale);
    for (int attempt = 0;; ++attempt) {
        const std::vector<Vec> g1 = sample_grid(s1, grid_resolution, radius);
        const std::vector<Vec> g2 = sample_grid(s2, grid_resolution, radius);
        // forward compares d(z1, z2), backward d(z2, z1)
        const kernels::PairMin best = dp_case == DPCase::Forward
                                          ? kernels::min_pair_distance(spec, g1, g2)
                                          : kernels::min_pair_distance(spec, g2, g1);
        const Vec z1 = dp_case == DPCase::Forward ? g1[best.from_index] : g1[best.to_index];
        const Vec z2 = dp_case == DPCase::Forward ? g2[best.to_index] : g2[best.from_index];
        const bool near_clip =
            (is_unbounded(s1) && (z1 - base_point(s1)).norm() > 0.95 * radius) ||
            (is_unbounded(s2) && (z2 - base_point(s2)).norm() > 0.95 * radius);
        if (near_clip && attempt < 4) {
            radius *= 2.0;
            continue;
        }
        if (near_clip)
            throw ClipMissError("pair oracle minimizer stayed on the clip boundary");
        rep.oracle_best = best.value;
        const double h1 = grid_spacing(s1, g1, radius, grid_resolution);
        const double h2 = grid_spacing(s2, g2, radius, grid_resolution);
        // quasi-metric diameter of one oracle grid cell
        rep.tol_oracle = lip * 0.5 * (h1 + h2) * 1.0001 + 1e-12;
        break;
    }
    rep.dp2_holds = rep.proj_distance <= rep.oracle_best + rep.tol_oracle;
    rep.equivalence_verdict = rep.dp1_holds == rep.dp2_holds;
    return rep;
}

std::vector<Vec> alternate(const NormSpec& spec, const ConvexSet& s1, const ConvexSet& s2,
                           const Vec& q0, int max_iter) {
    if (!contains(s1, q0, 1e-9))
        throw DimensionError("alternation start must belong to the first set");
    std::vector<Vec> traj{q0};
    const CompositionMode mode{ProjMode::Backward, ProjMode::Forward};
    Vec q = q0;
    for (int k = 0; k < max_iter; ++k) {
        const Vec next = compose(spec, s1, s2, q, mode);
        traj.push_back(next);
        if ((next - q).norm() < 1e-10) return traj;
        q = next;
    }
    return traj;  // length max_iter + 1 flags non-convergence
}

DPReport nonsmooth_counterexample() {
    const NormSpec spec = NonSmoothSumNorm{3, 1.0};
    // F is non-differentiable at p = (0, 1, 0) on the unit level set; the
    // one-sided supporting planes {y1 + y2 = 1} at p and {y1 - y2 = 1} at
    // -p meet the plane {y3 = 0} construction at z = (1/2, 1/2, 0).
    Vec p(3), z(3), zero(3);
    p << 0.0, 1.0, 0.0;
    z << 0.5, 0.5, 0.0;
    zero << 0.0, 0.0, 0.0;
    const ConvexSet home = Segment{zero, z};    // contains the query q = 0
    const ConvexSet target = Segment{p, z};     // projection target
    DPReport rep = dp_report(spec, home, target, zero, DPCase::Forward, 2001);
    return rep;
}

}  // namespace projgeo
