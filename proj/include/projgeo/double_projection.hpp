#pragma once
#include <vector>

#include "projgeo/projection.hpp"

namespace projgeo {

// Composition P^{outer}_{S1} o P^{inner}_{S2}; written (outer, inner)
// with + for forward and - for backward.
struct CompositionMode {
    ProjMode outer = ProjMode::Forward;
    ProjMode inner = ProjMode::Forward;
};

Vec compose(const NormSpec& spec, const ConvexSet& s1, const ConvexSet& s2, const Vec& q,
            CompositionMode mode);

// Forward case tests q = (P-_{S1} o P+_{S2})(q) against the
// best-approximation inequality d(q, P+_{S2}(q)) <= d(z1, z2); the
// backward case mirrors it with the roles of the arguments swapped.
enum class DPCase { Forward, Backward };

struct DPReport {
    CompositionMode mode;
    Vec query;
    Vec composed_point;
    double fixed_point_residual = 0.0;  // Euclidean |composed - q|
    double proj_distance = 0.0;
    double oracle_best = 0.0;  // pair-grid minimum of the quasi-distance
    double tol_fixed_point = 0.0;
    double tol_oracle = 0.0;
    bool dp1_holds = false;
    bool dp2_holds = false;
    bool equivalence_verdict = false;  // dp1_holds == dp2_holds
};

DPReport dp_report(const NormSpec& spec, const ConvexSet& s1, const ConvexSet& s2,
                   const Vec& q, DPCase dp_case, int grid_resolution = 2001,
                   double tol_fixed_point = 1e-7, double membership_tol = 1e-9);

// Iterates the forward-case composition from q0 in S1. The trajectory
// includes q0; convergence means successive iterates moved < 1e-10, and a
// trajectory of length max_iter + 1 signals non-convergence.
std::vector<Vec> alternate(const NormSpec& spec, const ConvexSet& s1, const ConvexSet& s2,
                           const Vec& q0, int max_iter);

// Non-differentiable strictly convex ball in R^3 (|y| + |y_1|): the fixed
// point certificate holds at q = 0 while the best-approximation bound
// fails because the two segments share an endpoint. Demonstrates why
// smoothness is required for the equivalence.
DPReport nonsmooth_counterexample();

}  // namespace projgeo
