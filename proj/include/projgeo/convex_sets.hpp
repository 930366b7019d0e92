#pragma once
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "projgeo/errors.hpp"
#include "projgeo/norms.hpp"

namespace projgeo {

// Closed convex subsets of R^n with finite-dimensional parametrizations.
// Directions are expected unit length; call normalized() after aggregate
// construction (the scene loader does this for file input).

struct Segment {
    Vec a, b;  // a == b is a legal single-point set
};

struct HalfLine {
    Vec origin;
    Vec direction;
};

struct Line {
    Vec point;
    Vec direction;
};

// Convex hull of the vertex list.
struct Polytope {
    std::vector<Vec> vertices;
};

struct HalfSpace {
    Vec normal;
    double offset;  // normal . x <= offset
};

// base + span(theta) intersected with ambient half-space constraints.
// The span is orthonormalized by normalized().
struct AffineSlab {
    Vec base;
    std::vector<Vec> span;
    std::vector<HalfSpace> constraints;
};

using ConvexSet = std::variant<Segment, HalfLine, Line, Polytope, AffineSlab>;

int dimension(const ConvexSet& set);

// Unit directions, orthonormal slab span, feasibility sampling for slabs.
// Throws on zero directions, dependent spans, or infeasible constraints.
ConvexSet normalized(ConvexSet set);

double euclidean_distance(const ConvexSet& set, const Vec& x);

bool contains(const ConvexSet& set, const Vec& x, double tol);

// Deterministic grid of member points. Unbounded sets are clipped to the
// Euclidean ball of `radius` around their base point (spans use the
// inscribed box so samples stay inside the ball). Vertices and endpoints
// within the clip region are always included exactly.
std::vector<Vec> sample_grid(const ConvexSet& set, int resolution, double radius = 10.0);

ConvexSet translated(const ConvexSet& set, const Vec& c);

// The line {y1+y2=0} and the half-line {y1+y2=1, y1 >= 1/2} used by the
// slope-norm demo and the reproduce-figure1 command.
std::pair<ConvexSet, ConvexSet> matsumoto_demo_sets();

}  // namespace projgeo
