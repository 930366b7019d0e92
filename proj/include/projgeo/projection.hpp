#pragma once
#include <vector>

#include "projgeo/convex_sets.hpp"
#include "projgeo/norms.hpp"

namespace projgeo {

// Forward minimizes s -> F(s - q); backward minimizes s -> F(q - s).
// The two coincide exactly when the norm is reversible.
enum class ProjMode { Forward, Backward };

struct ProjectionResult {
    Vec minimizer;
    double distance = 0.0;
    std::vector<double> parameters;
    // g-based first-order certificate for smooth norms; a one-sided
    // convex difference-quotient certificate for the non-smooth norm.
    double variational_residual = 0.0;
    bool unique_certified = false;
};

// Convex 1-d objectives are solved by derivative-sign bisection when the
// norm is smooth (analytic gradients), golden section otherwise. The
// non-smooth norm supports Segment targets only. Unbounded parameter
// ranges are bracketed by doubling; failure after 200 doublings raises
// ClipMissError.
ProjectionResult project(const NormSpec& spec, const ConvexSet& set, const Vec& q,
                         ProjMode mode);
ProjectionResult project_forward(const NormSpec& spec, const ConvexSet& set, const Vec& q);
ProjectionResult project_backward(const NormSpec& spec, const ConvexSet& set, const Vec& q);

// First-order optimality residual of the candidate s over probe points z
// from the set (vertices plus a 64-point grid): forward returns
// min_z g_{s-q}(s-q, z-s), backward returns -max_z g_{q-s}(q-s, z-s).
// Nonnegative (up to tolerance) certifies optimality in both modes.
// Smooth norms only; s == q returns +infinity.
double variational_residual(const NormSpec& spec, const ConvexSet& set, const Vec& s,
                            const Vec& q, ProjMode mode, int probe_resolution = 64);

// Re-solves from `restarts` distinct initializations; true iff all
// minimizers agree within 1e-7 Euclidean distance.
bool uniqueness_probe(const NormSpec& spec, const ConvexSet& set, const Vec& q,
                      ProjMode mode, int restarts);

}  // namespace projgeo
