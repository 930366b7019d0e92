#include "projgeo/suites.hpp"

#include <cmath>
#include <sstream>

#include "projgeo/kernels.hpp"
#include "projgeo/random.hpp"

namespace projgeo::suites {

namespace {

ConvexSet random_line_like_set(std::mt19937_64& rng) {
    const int kind = static_cast<int>(uniform(rng, 0.0, 3.0));
    Vec a = random_vector(rng, 2, 3.0);
    Vec d(2);
    const double phi = uniform(rng, 0.0, 2.0 * M_PI);
    d << std::cos(phi), std::sin(phi);
    switch (kind) {
        case 0: {
            Vec b = a + uniform(rng, 0.5, 4.0) * d;
            return Segment{a, b};
        }
        case 1:
            return HalfLine{a, d};
        default:
            return Line{a, d};
    }
}

Vec random_point_on(const ConvexSet& set, std::mt19937_64& rng) {
    return std::visit(
        [&](const auto& s) -> Vec {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Segment>) {
                const double t = uniform(rng, 0.0, 1.0);
                return (1.0 - t) * s.a + t * s.b;
            } else if constexpr (std::is_same_v<T, HalfLine>) {
                return s.origin + uniform(rng, 0.0, 3.0) * s.direction;
            } else if constexpr (std::is_same_v<T, Line>) {
                return s.point + uniform(rng, -3.0, 3.0) * s.direction;
            } else {
                throw UnsupportedVariantError("unexpected set kind in suite");
            }
        },
        set);
}

// Iterate the case composition until it stalls; the limit, when reached,
// is a fixed-point instance.
bool drive_to_fixed_point(const NormSpec& spec, const ConvexSet& s1, const ConvexSet& s2,
                          Vec& q, DPCase dp_case) {
    const CompositionMode mode = dp_case == DPCase::Forward
                                     ? CompositionMode{ProjMode::Backward, ProjMode::Forward}
                                     : CompositionMode{ProjMode::Forward, ProjMode::Backward};
    for (int k = 0; k < 80; ++k) {
        const Vec next = compose(spec, s1, s2, q, mode);
        const double moved = (next - q).norm();
        q = next;
        if (moved < 1e-11) return true;
    }
    return false;
}

ModelPoint random_model_point_near(double kappa, std::mt19937_64& rng, double spread) {
    if (kappa == 0.0) return make_model_point(0.0, random_vector(rng, 2, spread));
    const double r = 1.0 / std::sqrt(std::abs(kappa));
    ModelPoint base{kappa, Vec3(0, 0, r)};
    const Eigen::VectorXd g = random_unit_vector(rng, 2);
    const double s = uniform(rng, 0.0, spread * std::min(1.0, r));
    return exp_map(base, s * Vec3(g[0], g[1], 0.0));
}

std::pair<Vec3, Vec3> tangent_frame(const ModelPoint& p, std::mt19937_64& rng) {
    Vec3 e1 = Vec3::Zero(), e2 = Vec3::Zero();
    while (true) {
        const Eigen::VectorXd g = random_unit_vector(rng, 3);
        Vec3 cand = tangent_projection(p, Vec3(g[0], g[1], p.kappa == 0.0 ? 0.0 : g[2]));
        double n = std::sqrt(std::max(0.0, tangent_dot(p, cand, cand)));
        if (n < 1e-6) continue;
        if (e1.isZero()) {
            e1 = cand / n;
            continue;
        }
        cand -= tangent_dot(p, cand, e1) * e1;
        n = std::sqrt(std::max(0.0, tangent_dot(p, cand, cand)));
        if (n < 1e-6) continue;
        e2 = cand / n;
        return {e1, e2};
    }
}

}  // namespace

NormSpec canonical_pnorm() { return PNorm{2, 4.0}; }

NormSpec canonical_randers() {
    Mat a(2, 2);
    a << 1.2, 0.2, 0.2, 0.9;
    Vec b(2);
    b << 0.35, -0.2;
    return RandersNorm{a, b};
}

NormSpec canonical_matsumoto() { return MatsumotoNorm{10.0, M_PI / 3.0, 9.81}; }

DPSuiteResult dp_equivalence_suite(const NormSpec& spec, DPCase dp_case, int instances,
                                   std::uint64_t seed, int grid_resolution) {
    DPSuiteResult res;
    res.instances = instances;
    for (int k = 0; k < instances; ++k) {
        DPReport rep;
        bool have = false;
        for (int attempt = 0; attempt < 40 && !have; ++attempt) {
            auto rng = make_rng(seed, static_cast<std::uint64_t>(k) * 64 + attempt);
            const ConvexSet s1 = random_line_like_set(rng);
            const ConvexSet s2 = random_line_like_set(rng);
            Vec q = random_point_on(s1, rng);
            const bool want_fixed = (k % 2 == 0);
            if (want_fixed && !drive_to_fixed_point(spec, s1, s2, q, dp_case)) continue;
            DPReport cand;
            try {
                cand = dp_report(spec, s1, s2, q, dp_case, grid_resolution);
            } catch (const ClipMissError&) {
                continue;
            }
            // redraw instances inside the numeric ambiguity band of either
            // tolerance; the remaining reports are decisive either way
            const bool fp_decisive = cand.fixed_point_residual <= 0.2 * cand.tol_fixed_point ||
                                     cand.fixed_point_residual >= 20.0 * cand.tol_fixed_point;
            const double margin = cand.proj_distance - cand.oracle_best;
            const bool oracle_decisive =
                margin <= 0.2 * cand.tol_oracle || margin >= 5.0 * cand.tol_oracle;
            if (!fp_decisive || !oracle_decisive) continue;
            rep = cand;
            have = true;
        }
        if (!have) continue;  // counted as inconsistent via res.consistent
        if (rep.equivalence_verdict) ++res.consistent;
        if (rep.dp1_holds && rep.dp2_holds) ++res.fixed_point_instances;
        if (!rep.dp1_holds && !rep.dp2_holds) ++res.moving_instances;
    }
    return res;
}

EuclideanAgreement euclidean_projection_agreement(int instances, std::uint64_t seed) {
    const NormSpec spec = EuclideanNorm{2};
    EuclideanAgreement agree;
    agree.instances = instances;
    for (int k = 0; k < instances; ++k) {
        auto rng = make_rng(seed, static_cast<std::uint64_t>(k));
        const ConvexSet set = random_line_like_set(rng);
        const Vec q = random_vector(rng, 2, 4.0);
        // closed-form orthogonal projection
        Vec foot;
        std::visit(
            [&](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, Segment>) {
                    const Vec d = s.b - s.a;
                    const double t =
                        std::clamp((q - s.a).dot(d) / d.squaredNorm(), 0.0, 1.0);
                    foot = (1.0 - t) * s.a + t * s.b;
                } else if constexpr (std::is_same_v<T, HalfLine>) {
                    const double t = std::max(0.0, (q - s.origin).dot(s.direction));
                    foot = s.origin + t * s.direction;
                } else if constexpr (std::is_same_v<T, Line>) {
                    foot = s.point + (q - s.point).dot(s.direction) * s.direction;
                }
            },
            set);
        for (const ProjMode mode : {ProjMode::Forward, ProjMode::Backward}) {
            const ProjectionResult pr = project(spec, set, q, mode);
            agree.max_point_error =
                std::max(agree.max_point_error, (pr.minimizer - foot).norm());
            agree.max_distance_error =
                std::max(agree.max_distance_error, std::abs(pr.distance - (q - foot).norm()));
        }
    }
    return agree;
}

ModelSuiteResult cat_suite(double kappa, double kappa_bar, int triangles, std::uint64_t seed,
                           int grid_per_side) {
    ModelSuiteResult res;
    res.trials = triangles;
    res.worst = -1e300;
    for (int k = 0; k < triangles; ++k) {
        auto rng = make_rng(seed, static_cast<std::uint64_t>(k));
        std::array<ModelPoint, 3> tri;
        bool ok = false;
        while (!ok) {
            for (auto& v : tri) v = random_model_point_near(kappa, rng, 1.2);
            const double d01 = distance(tri[0], tri[1]);
            const double d02 = distance(tri[0], tri[2]);
            const double d12 = distance(tri[1], tri[2]);
            ok = d01 > 1e-2 && d02 > 1e-2 && d12 > 1e-2 &&
                 d01 + d02 + d12 < 2.0 * model_diameter(kappa_bar) - 1e-6;
        }
        const TriangleReport rep = cat_check(tri, kappa_bar, grid_per_side);
        res.values.push_back(rep.max_cat_violation);
        res.worst = std::max(res.worst, rep.max_cat_violation);
    }
    return res;
}

ModelSuiteResult ptolemy_suite(double kappa, int quadruples, std::uint64_t seed) {
    ModelSuiteResult res;
    res.trials = quadruples;
    res.worst = 1e300;
    for (int k = 0; k < quadruples; ++k) {
        auto rng = make_rng(seed, static_cast<std::uint64_t>(k));
        const ModelPoint p1 = random_model_point_near(kappa, rng, 1.5);
        const ModelPoint p2 = random_model_point_near(kappa, rng, 1.5);
        const ModelPoint p3 = random_model_point_near(kappa, rng, 1.5);
        const ModelPoint p4 = random_model_point_near(kappa, rng, 1.5);
        const double r = ptolemy_residual(p1, p2, p3, p4);
        res.values.push_back(r);
        res.worst = std::min(res.worst, r);
    }
    return res;
}

ModelSuiteResult pythagorean_suite(double kappa, int configs, std::uint64_t seed) {
    ModelSuiteResult res;
    res.trials = configs;
    res.worst = 1e300;
    for (int k = 0; k < configs; ++k) {
        auto rng = make_rng(seed, static_cast<std::uint64_t>(k));
        const ModelPoint corner = random_model_point_near(kappa, rng, 1.0);
        const auto [u, n] = tangent_frame(corner, rng);
        const GeodesicSegment seg =
            make_segment(corner, exp_map(corner, uniform(rng, 0.3, 1.2) * u));
        const ModelPoint apex = exp_map(corner, uniform(rng, 0.2, 1.0) * n);
        const double r = pythagorean_residual(apex, seg);
        res.values.push_back(r);
        res.worst = std::min(res.worst, r);
    }
    return res;
}

std::vector<LabeledPoint> matsumoto_demo_compositions() {
    const NormSpec spec = canonical_matsumoto();
    const auto [s1, s2] = matsumoto_demo_sets();
    Vec q(2);
    q << 0.0, 0.0;
    const auto with = [&](ProjMode outer, ProjMode inner) {
        return compose(spec, s1, s2, q, CompositionMode{outer, inner});
    };
    std::vector<LabeledPoint> pts;
    pts.push_back({"q", q});
    pts.push_back({"forward_forward", with(ProjMode::Forward, ProjMode::Forward)});
    pts.push_back({"forward_backward", with(ProjMode::Forward, ProjMode::Backward)});
    pts.push_back({"backward_backward", with(ProjMode::Backward, ProjMode::Backward)});
    pts.push_back({"backward_forward", with(ProjMode::Backward, ProjMode::Forward)});
    return pts;
}

std::vector<CheckResult> selftest(std::uint64_t seed, bool quick) {
    std::vector<CheckResult> out;
    const auto add = [&](const std::string& name, bool pass, const std::string& detail) {
        out.push_back({name, pass, detail});
    };
    const auto fmt = [](double v) {
        std::ostringstream os;
        os << v;
        return os.str();
    };

    const int pairs = quick ? 2000 : 10000;
    for (const auto& [name, spec] :
         std::vector<std::pair<std::string, NormSpec>>{{"euclidean", EuclideanNorm{2}},
                                                       {"pnorm", canonical_pnorm()},
                                                       {"randers", canonical_randers()},
                                                       {"matsumoto", canonical_matsumoto()}}) {
        const auto st = kernels::fundamental_sweep(spec, pairs, seed, 1e-8);
        add("fundamental_inequality_" + name, st.violations == 0 && st.max_tensor_gap <= 1e-9,
            "min residual " + fmt(st.min_residual) + ", tensor gap " + fmt(st.max_tensor_gap));
        const auto serial = kernels::fundamental_sweep_serial(spec, quick ? 200 : 2000, seed, 1e-8);
        const auto parallel = kernels::fundamental_sweep(spec, quick ? 200 : 2000, seed, 1e-8);
        add("kernel_agreement_" + name,
            serial.min_residual == parallel.min_residual &&
                serial.max_tensor_gap == parallel.max_tensor_gap,
            "serial/parallel sweeps agree");
    }

    {
        const auto agree = euclidean_projection_agreement(quick ? 60 : 500, seed);
        add("euclidean_projection_oracle", agree.max_point_error <= 1e-10,
            "max point error " + fmt(agree.max_point_error));
    }

    {
        const int n = quick ? 12 : 200;
        for (const auto& [name, spec] :
             std::vector<std::pair<std::string, NormSpec>>{{"matsumoto", canonical_matsumoto()},
                                                           {"pnorm", canonical_pnorm()}}) {
            const auto fw = dp_equivalence_suite(spec, DPCase::Forward, n, seed, 801);
            const auto bw = dp_equivalence_suite(spec, DPCase::Backward, n, seed + 1, 801);
            add("dp_equivalence_" + name, fw.all_consistent() && bw.all_consistent(),
                fmt(fw.consistent + bw.consistent) + "/" + fmt(fw.instances + bw.instances) +
                    " consistent");
        }
    }

    {
        const DPReport rep = nonsmooth_counterexample();
        add("nonsmooth_counterexample",
            rep.dp1_holds && !rep.dp2_holds && rep.oracle_best <= 1e-9 &&
                rep.proj_distance >= 0.99,
            "proj distance " + fmt(rep.proj_distance));
    }

    {
        const int n = quick ? 40 : 500;
        const auto cat = cat_suite(-1.0, 0.0, n, seed, 8);
        add("cat_comparison_hyperbolic", cat.worst <= 1e-9, "max violation " + fmt(cat.worst));
        const auto pt = ptolemy_suite(-1.0, n, seed);
        add("ptolemy_hyperbolic", pt.worst >= -1e-9, "min residual " + fmt(pt.worst));
        const auto py = pythagorean_suite(-1.0, quick ? 30 : 200, seed);
        add("pythagorean_hyperbolic", py.worst >= -1e-9, "min residual " + fmt(py.worst));
    }

    for (const double kappa : {0.0, -1.0}) {
        const auto sweep = kernels::nonexpansiveness_sweep(kappa, quick ? 80 : 500, seed, 1e-9);
        add("nonexpansiveness_kappa_" + fmt(kappa), sweep.violations == 0,
            "worst residual " + fmt(sweep.worst_residual));
    }

    {
        const NpcSummary pos = npc_projection_test(1.0, quick ? 40 : 200, seed);
        add("expansion_found_on_sphere", pos.directed_violation_found,
            "directed residual " + fmt(pos.directed_residual));
    }

    {
        const std::vector<double> hs{0.2, 0.1, 0.05};
        bool pass = true;
        std::string detail;
        for (const double kappa : {0.0, 1.0, -1.0}) {
            const ModelPoint p = kappa == 0.0
                                     ? make_model_point(0.0, Vec::Zero(2))
                                     : ModelPoint{kappa, Vec3(0, 0, 1.0 / std::sqrt(std::abs(kappa)))};
            const Vec3 v0(1, 0, 0);
            const Vec3 w0(0, 1, 0);
            const CurvatureReport rep = curvature_estimate(kappa, p, v0, w0, hs);
            const double tol = kappa == 0.0 ? 1e-9 : 0.05;
            pass = pass && std::abs(rep.extrapolated - kappa) <= tol &&
                   rep.inequality_violations == 0;
            detail += fmt(rep.extrapolated) + " ";
        }
        add("curvature_estimates", pass, "extrapolated " + detail);
    }

    {
        const ModelPoint p{-1.0, Vec3(0, 0, 1)};
        const Parallelogramoid pg =
            build_parallelogramoid(-1.0, p, Vec3(1, 0, 0), Vec3(0, 1, 0), 0.3, 0.3);
        const auto [r1, r2] = projection_identity_check(pg);
        add("projection_identities", r1 <= 1e-7 && r2 <= 1e-7,
            "residuals " + fmt(r1) + ", " + fmt(r2));
    }

    {
        const auto pts = matsumoto_demo_compositions();
        const double moved = (pts[4].point - pts[0].point).norm();
        bool scattered = true;
        for (int i = 1; i <= 3; ++i)
            scattered = scattered && (pts[i].point - pts[0].point).norm() > 0.1;
        add("demo_composition_modes", moved <= 1e-7 && scattered,
            "backward_forward moved " + fmt(moved));
    }

    return out;
}

}  // namespace projgeo::suites
