#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "projgeo/curvature.hpp"
#include "projgeo/double_projection.hpp"

namespace projgeo::suites {

// Canonical norm instances used by the randomized suites and the CLI.
NormSpec canonical_pnorm();      // p = 4 in the plane
NormSpec canonical_randers();    // anisotropic A with drift
NormSpec canonical_matsumoto();  // speed 10, slope pi/3, gravity 9.81

struct DPSuiteResult {
    int instances = 0;
    int consistent = 0;
    int fixed_point_instances = 0;  // both properties hold
    int moving_instances = 0;       // both properties fail
    bool all_consistent() const { return consistent == instances; }
};

// Seeded random Segment/Line/HalfLine pairs with query points on the
// first set; half the instances are driven to a fixed point by
// alternation first. Instances whose residuals fall inside the numeric
// ambiguity band of the tolerances are redrawn, so every report is a
// decisive test of the equivalence.
DPSuiteResult dp_equivalence_suite(const NormSpec& spec, DPCase dp_case, int instances,
                                   std::uint64_t seed, int grid_resolution = 1501);

struct EuclideanAgreement {
    double max_point_error = 0.0;
    double max_distance_error = 0.0;
    int instances = 0;
};

// Solver vs closed-form orthogonal projection on random segments, lines
// and half-lines.
EuclideanAgreement euclidean_projection_agreement(int instances, std::uint64_t seed);

struct ModelSuiteResult {
    double worst = 0.0;  // max violation or min residual, see each suite
    int trials = 0;
    std::vector<double> values;  // per-trial residuals for CSV output
};

// Random geodesic triangles on the kappa model compared against
// kappa_bar; worst = max comparison violation.
ModelSuiteResult cat_suite(double kappa, double kappa_bar, int triangles,
                           std::uint64_t seed, int grid_per_side = 12);

// Random quadruples; worst = min four-point residual.
ModelSuiteResult ptolemy_suite(double kappa, int quadruples, std::uint64_t seed);

// Random right-angle configurations (apex over a segment start);
// worst = min residual.
ModelSuiteResult pythagorean_suite(double kappa, int configs, std::uint64_t seed);

struct LabeledPoint {
    std::string label;
    Vec point;
};

// The query point and its four projection compositions for the
// slope-norm demo configuration; label order: q, forward_forward,
// forward_backward, backward_backward, backward_forward.
std::vector<LabeledPoint> matsumoto_demo_compositions();

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Condensed invariant battery over every module; used by the selftest
// subcommand.
std::vector<CheckResult> selftest(std::uint64_t seed, bool quick = true);

}  // namespace projgeo::suites
