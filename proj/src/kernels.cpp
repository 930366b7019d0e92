#include "projgeo/kernels.hpp"

#include <omp.h>

#include <cstdlib>
#include <limits>

#include "projgeo/model_spaces.hpp"
#include "projgeo/random.hpp"

namespace projgeo::kernels {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool better(double v, std::size_t i, std::size_t j, const PairMin& cur) {
    if (v < cur.value) return true;
    if (v > cur.value) return false;
    return i < cur.from_index || (i == cur.from_index && j < cur.to_index);
}

struct TrialConfig {
    GeodesicSegment seg;
    ModelPoint q1, q2;
};

// Segment and query pair drawn inside the projection regime of the model.
TrialConfig random_trial(double kappa, std::mt19937_64& rng) {
    TrialConfig tc;
    if (kappa == 0.0) {
        Eigen::VectorXd c = random_vector(rng, 2, 2.0);
        const ModelPoint center = make_model_point(0.0, c);
        const Vec3 dir(std::cos(uniform(rng, 0, 2 * M_PI)), std::sin(uniform(rng, 0, 2 * M_PI)),
                       0.0);
        const double half = uniform(rng, 0.3, 1.5);
        tc.seg = make_segment(exp_map(center, -half * dir), exp_map(center, half * dir));
        for (ModelPoint* q : {&tc.q1, &tc.q2}) {
            const Vec3 v(uniform(rng, -1.5, 1.5), uniform(rng, -1.5, 1.5), 0.0);
            *q = exp_map(center, v);
        }
        return tc;
    }
    const double r = 1.0 / std::sqrt(std::abs(kappa));
    ModelPoint center{kappa, Vec3(0, 0, r)};
    {
        Eigen::VectorXd g = random_unit_vector(rng, 2);
        const Vec3 t(g[0], g[1], 0.0);
        const double off = uniform(rng, 0.0, 0.8 * r);
        center = exp_map(center, off * t);
    }
    // orthonormal tangent frame at center
    Vec3 e1 = tangent_projection(center, Vec3(1, 0, 0));
    if (std::abs(tangent_dot(center, e1, e1)) < 1e-8)
        e1 = tangent_projection(center, Vec3(0, 1, 0));
    e1 /= std::sqrt(tangent_dot(center, e1, e1));
    Vec3 e2 = tangent_projection(center, Vec3(0, 1, 0));
    e2 -= tangent_dot(center, e2, e1) * e1;
    if (std::sqrt(std::abs(tangent_dot(center, e2, e2))) < 1e-8) {
        e2 = tangent_projection(center, Vec3(0, 0, 1));
        e2 -= tangent_dot(center, e2, e1) * e1;
    }
    e2 /= std::sqrt(tangent_dot(center, e2, e2));

    const double phi = uniform(rng, 0, 2 * M_PI);
    const Vec3 dir = std::cos(phi) * e1 + std::sin(phi) * e2;
    const double half = uniform(rng, 0.1, 0.3) * r;
    tc.seg = make_segment(exp_map(center, -half * dir), exp_map(center, half * dir));
    for (ModelPoint* q : {&tc.q1, &tc.q2}) {
        const double psi = uniform(rng, 0, 2 * M_PI);
        const double rad = uniform(rng, 0.0, 0.45 * r);
        *q = exp_map(center, rad * (std::cos(psi) * e1 + std::sin(psi) * e2));
    }
    return tc;
}

double trial_residual(double kappa, std::uint64_t seed, int index) {
    auto rng = make_rng(seed, static_cast<std::uint64_t>(index));
    const TrialConfig tc = random_trial(kappa, rng);
    return nonexpansiveness_residual(tc.seg, tc.q1, tc.q2);
}

struct PairSample {
    Vec y, w;
};

PairSample random_pair(const NormSpec& spec, std::uint64_t seed, int index) {
    auto rng = make_rng(seed, static_cast<std::uint64_t>(index));
    const int n = dimension(spec);
    PairSample s;
    do {
        s.y = random_vector(rng, n, 2.0);
    } while (s.y.norm() < 1e-6);
    do {
        s.w = random_vector(rng, n, 2.0);
    } while (s.w.norm() < 1e-6);
    return s;
}

}  // namespace

int thread_count() {
    static const int count = [] {
        int n = omp_get_max_threads();
        if (const char* env = std::getenv("FINSLER_PROJECT_THREADS")) {
            const int cap = std::atoi(env);
            if (cap >= 1) n = std::min(n, cap);
        }
        return n;
    }();
    return count;
}

PairMin min_pair_distance_serial(const NormSpec& spec, const std::vector<Vec>& from,
                                 const std::vector<Vec>& to) {
    PairMin best{kInf, 0, 0};
    Vec diff(dimension(spec));
    for (std::size_t i = 0; i < from.size(); ++i) {
        for (std::size_t j = 0; j < to.size(); ++j) {
            diff = to[j] - from[i];
            const double v = detail::eval_norm_unchecked(spec, diff);
            if (better(v, i, j, best)) best = {v, i, j};
        }
    }
    return best;
}

PairMin min_pair_distance(const NormSpec& spec, const std::vector<Vec>& from,
                          const std::vector<Vec>& to) {
    PairMin best{kInf, 0, 0};
    const auto n = static_cast<std::ptrdiff_t>(from.size());
#pragma omp parallel num_threads(thread_count())
    {
        PairMin local{kInf, 0, 0};
        Vec diff(dimension(spec));
#pragma omp for schedule(static) nowait
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < to.size(); ++j) {
                diff = to[j] - from[static_cast<std::size_t>(i)];
                const double v = detail::eval_norm_unchecked(spec, diff);
                if (better(v, static_cast<std::size_t>(i), j, local))
                    local = {v, static_cast<std::size_t>(i), j};
            }
        }
#pragma omp critical
        {
            if (better(local.value, local.from_index, local.to_index, best)) best = local;
        }
    }
    return best;
}

SweepStats fundamental_sweep_serial(const NormSpec& spec, int pairs, std::uint64_t seed,
                                    double tol) {
    SweepStats st{kInf, 0.0, 0};
    for (int k = 0; k < pairs; ++k) {
        const PairSample s = random_pair(spec, seed, k);
        const double fy = eval_norm(spec, s.y);
        const double fw = eval_norm(spec, s.w);
        const double res = fy * fw - metric_form(spec, s.y, s.w);
        st.min_residual = std::min(st.min_residual, res);
        if (res < -tol * (1.0 + fy * fw)) ++st.violations;
        const double gap = std::abs(metric_form(spec, s.y, s.y) - fy * fy) / (1.0 + fy * fy);
        st.max_tensor_gap = std::max(st.max_tensor_gap, gap);
    }
    return st;
}

SweepStats fundamental_sweep(const NormSpec& spec, int pairs, std::uint64_t seed, double tol) {
    double min_residual = kInf, max_gap = 0.0;
    int violations = 0;
#pragma omp parallel for schedule(static) num_threads(thread_count()) \
    reduction(min : min_residual) reduction(max : max_gap) reduction(+ : violations)
    for (int k = 0; k < pairs; ++k) {
        const PairSample s = random_pair(spec, seed, k);
        const double fy = eval_norm(spec, s.y);
        const double fw = eval_norm(spec, s.w);
        const double res = fy * fw - metric_form(spec, s.y, s.w);
        min_residual = std::min(min_residual, res);
        if (res < -tol * (1.0 + fy * fw)) ++violations;
        const double gap = std::abs(metric_form(spec, s.y, s.y) - fy * fy) / (1.0 + fy * fy);
        max_gap = std::max(max_gap, gap);
    }
    return {min_residual, max_gap, violations};
}

double nonexpansiveness_trial(double kappa, std::uint64_t seed, int index) {
    return trial_residual(kappa, seed, index);
}

ModelSweep nonexpansiveness_sweep_serial(double kappa, int trials, std::uint64_t seed,
                                         double tol) {
    ModelSweep sw{kInf, 0};
    for (int k = 0; k < trials; ++k) {
        const double res = trial_residual(kappa, seed, k);
        sw.worst_residual = std::min(sw.worst_residual, res);
        if (res < -tol) ++sw.violations;
    }
    return sw;
}

ModelSweep nonexpansiveness_sweep(double kappa, int trials, std::uint64_t seed, double tol) {
    ModelSweep sw{kInf, 0};
#pragma omp parallel for schedule(static) num_threads(thread_count()) \
    reduction(min : sw.worst_residual) reduction(+ : sw.violations)
    for (int k = 0; k < trials; ++k) {
        const double res = trial_residual(kappa, seed, k);
        sw.worst_residual = std::min(sw.worst_residual, res);
        if (res < -tol) ++sw.violations;
    }
    return sw;
}

}  // namespace projgeo::kernels
