#pragma once
#include <cstddef>
#include <cstdint>
#include <vector>

#include "projgeo/norms.hpp"

namespace projgeo::kernels {

// Worker count for the OpenMP kernels; honours FINSLER_PROJECT_THREADS.
int thread_count();

struct PairMin {
    double value = 0.0;
    std::size_t from_index = 0;
    std::size_t to_index = 0;
};

// Minimum of d(from_i, to_j) = F(to_j - from_i) over the full pair grid.
// Ties resolve to the lexicographically smallest (i, j), so the serial
// and parallel variants return identical results.
PairMin min_pair_distance_serial(const NormSpec& spec, const std::vector<Vec>& from,
                                 const std::vector<Vec>& to);
PairMin min_pair_distance(const NormSpec& spec, const std::vector<Vec>& from,
                          const std::vector<Vec>& to);

struct SweepStats {
    double min_residual = 0.0;
    double max_tensor_gap = 0.0;  // relative |g_y(y,y) - F(y)^2|
    int violations = 0;
};

// Random (y, w) pairs on [-2,2]^n \ {0}; residual F(y)F(w) - g_y(y,w)
// checked against -tol*(1 + F(y)F(w)), plus the Euler identity gap.
SweepStats fundamental_sweep_serial(const NormSpec& spec, int pairs, std::uint64_t seed,
                                    double tol);
SweepStats fundamental_sweep(const NormSpec& spec, int pairs, std::uint64_t seed,
                             double tol);

struct ModelSweep {
    double worst_residual = 0.0;
    int violations = 0;
};

// Random geodesic segments and query pairs within the projection regime;
// residual d(q1,q2) - d(foot1,foot2) checked against -tol.
ModelSweep nonexpansiveness_sweep_serial(double kappa, int trials, std::uint64_t seed,
                                         double tol);
ModelSweep nonexpansiveness_sweep(double kappa, int trials, std::uint64_t seed, double tol);

// Residual of the single trial `index` of the sweep's deterministic
// stream; per-trial view for CSV output.
double nonexpansiveness_trial(double kappa, std::uint64_t seed, int index);

}  // namespace projgeo::kernels
