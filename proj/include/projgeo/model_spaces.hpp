#pragma once
#include <array>
#include <vector>

#include <Eigen/Dense>

#include "projgeo/errors.hpp"

namespace projgeo {

using Vec3 = Eigen::Vector3d;

// Constant-curvature model surfaces: the Euclidean plane (kappa = 0), the
// sphere of radius 1/sqrt(kappa) embedded in R^3 (kappa > 0), and the
// hyperboloid sheet of radius 1/sqrt(-kappa) with the Lorentz form
// x^2 + y^2 - z^2 (kappa < 0). Flat points store (x, y, 0).

struct ModelPoint {
    double kappa = 0.0;
    Vec3 x = Vec3::Zero();
};

// Accepts 2 coordinates for kappa = 0 and 3 otherwise; renormalizes onto
// the embedding within a 1e-10 relative drift budget, errors beyond it.
ModelPoint make_model_point(double kappa, const Eigen::VectorXd& coords);

double model_diameter(double kappa);  // pi/sqrt(kappa) for kappa > 0, inf otherwise

double distance(const ModelPoint& p, const ModelPoint& q);

// Tangent of the minimizing geodesic from p to q, |log| = d(p, q).
// Errors on antipodal sphere points.
Vec3 log_map(const ModelPoint& p, const ModelPoint& q);

ModelPoint exp_map(const ModelPoint& p, const Vec3& v);

// Component of v tangent to the surface at p.
Vec3 tangent_projection(const ModelPoint& p, const Vec3& v);

double tangent_dot(const ModelPoint& p, const Vec3& u, const Vec3& v);

struct GeodesicSegment {
    double kappa = 0.0;
    ModelPoint start, end;
    double length = 0.0;
};

// length = d(start, end); kappa > 0 requires length < pi*r so the
// minimizing geodesic is unique.
GeodesicSegment make_segment(const ModelPoint& start, const ModelPoint& end);

// Arc-length-proportional parametrization, t in [0, 1].
ModelPoint geodesic_point(const GeodesicSegment& seg, double t);

struct TangentVector {
    ModelPoint base;
    Vec3 v = Vec3::Zero();
};

// Closed-form parallel transport along the segment to the point at
// fraction t; preserves inner products with the geodesic velocity.
TangentVector parallel_transport(const GeodesicSegment& seg, const TangentVector& w0,
                                 double t);

// Canonical placement: vertex 1 at the model base point, vertex 2 along
// the first tangent direction, vertex 3 in the upper tangent half-plane.
std::array<ModelPoint, 3> comparison_triangle(double d12, double d13, double d23,
                                              double kappa_bar);

struct TriangleReport {
    std::array<ModelPoint, 3> vertices;
    std::array<double, 3> side_lengths;  // d12, d13, d23
    std::array<ModelPoint, 3> comparison_vertices;
    double max_cat_violation = 0.0;
    int sample_count = 0;
};

// Samples matched arc fractions on all side pairs; max of
// d(x, y) - d(xbar, ybar) <= 0 certifies the comparison inequality on
// the sampled pairs.
TriangleReport cat_check(const std::array<ModelPoint, 3>& tri, double kappa_bar,
                         int grid_per_side);

double ptolemy_residual(const ModelPoint& p1, const ModelPoint& p2, const ModelPoint& p3,
                        const ModelPoint& p4);

struct FootResult {
    ModelPoint foot;
    double t = 0.0;
    double dist = 0.0;
    bool unique = true;
};

// Golden-section on the unimodal regime; spheres additionally require
// dist(q, seg) < pi*r/2, refused otherwise.
FootResult project_to_geodesic(const GeodesicSegment& seg, const ModelPoint& q);

// d(q1, q2) - d(foot1, foot2); nonnegative certifies non-expansiveness
// of the projection for this pair.
double nonexpansiveness_residual(const GeodesicSegment& seg, const ModelPoint& q1,
                                 const ModelPoint& q2);

struct AngleResult {
    double angle = 0.0;
    std::vector<double> quotients;
    bool monotone = true;  // quotient non-increasing in s; may fail for kappa > 0
};

// Difference quotients (d(p,z) - d(gamma(s),z))/s along the geodesic from
// p toward direction_point, extrapolated to s -> 0+; angle = acos(limit).
AngleResult alexandrov_angle(const ModelPoint& p, const ModelPoint& direction_point,
                             const ModelPoint& z, const std::vector<double>& s_values);

// d^2(p, end) - d^2(p, start) - d^2(start, end), with seg.start asserted
// to be the projection foot of p; kappa <= 0 only.
double pythagorean_residual(const ModelPoint& p, const GeodesicSegment& seg);

}  // namespace projgeo
