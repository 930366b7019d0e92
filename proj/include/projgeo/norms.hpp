#pragma once
#include <variant>

#include <Eigen/Dense>

#include "projgeo/errors.hpp"

namespace projgeo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Positively homogeneous Minkowski norms on R^n. All variants except
// NonSmoothSumNorm are C^2 away from the origin with positive definite
// Hessian of F^2/2.

struct EuclideanNorm {
    int dim = 2;
};

// F(y) = (sum |y_i|^p)^(1/p), p >= 2 so F is C^2 away from 0.
struct PNorm {
    int dim = 2;
    double exponent = 4.0;
};

// F(y) = sqrt(y'Ay) + b'y with A SPD and |b|_{A^-1} < 1.
// The canonical smooth non-reversible test norm.
struct RandersNorm {
    Mat a;
    Vec drift;
};

// Walking speed on a slope of inclination `slope` under gravity, R^2 only:
// F(y) = |y|^2 / (speed*|y| + (gravity/2)*y_1*sin(slope)).
// Admissible when gravity*sin(slope) <= speed; non-reversible unless slope = 0.
struct MatsumotoNorm {
    double speed = 10.0;
    double slope = 0.0;     // radians, in [0, pi/2)
    double gravity = 9.81;  // m/s^2
};

// F(y) = |y|_2 + lambda*|y_1|. Strictly convex unit ball but not
// differentiable on the hyperplane y_1 = 0; exists to exercise the
// failure of variational certificates for non-smooth balls.
struct NonSmoothSumNorm {
    int dim = 3;
    double lambda = 1.0;
};

using NormSpec =
    std::variant<EuclideanNorm, PNorm, RandersNorm, MatsumotoNorm, NonSmoothSumNorm>;

int dimension(const NormSpec& spec);
bool is_smooth(const NormSpec& spec);

// Throws DimensionError / UnsupportedVariantError on invalid parameters
// (p < 2, non-SPD A, |b|_{A^-1} >= 1, slope admissibility, lambda <= 0).
void validate_spec(const NormSpec& spec);

double eval_norm(const NormSpec& spec, const Vec& y);

// Quasi-distance d(p, q) = F(q - p); asymmetric for non-reversible norms.
double quasi_distance(const NormSpec& spec, const Vec& p, const Vec& q);

// Euclidean gradient of F at y != 0; smooth variants only.
Vec norm_gradient(const NormSpec& spec, const Vec& y);

struct MetricTensor {
    Vec base;
    Mat matrix;

    double operator()(const Vec& u, const Vec& w) const { return u.dot(matrix * w); }
};

// Hessian of F^2/2 at y != 0. Analytic for Euclidean/PNorm/Randers,
// central finite differences for Matsumoto. Throws on y = 0 and on the
// non-smooth variant.
MetricTensor metric_tensor(const NormSpec& spec, const Vec& y);

// g_y(y, w) evaluated through the Euler identity g_y(y, .) = F(y)*grad F(y).
// Exact up to rounding for every smooth variant; avoids the Hessian.
double metric_form(const NormSpec& spec, const Vec& y, const Vec& w);

// F(y)*F(w) - g_y(y, w), nonnegative for every Minkowski norm. The
// absolute-value variant |g_y(y, w)| <= F(y)F(w) holds only for
// reversible norms, so the one-sided form is the invariant checked here.
double fundamental_inequality_residual(const NormSpec& spec, const Vec& y, const Vec& w);

// Samples antipodal pairs on the unit sphere; true iff F(-y) = F(y)
// within tol for all samples.
bool is_reversible(const NormSpec& spec, int samples = 10000, double tol = 1e-9);

// Central-difference Hessian of F^2/2 with step eps^(1/4)*max(1, |y|);
// validation reference for the analytic tensors.
Mat finite_difference_tensor(const NormSpec& spec, const Vec& y);

namespace detail {
// Unchecked fast path used by grid kernels; assumes validated spec and
// matching finite input.
double eval_norm_unchecked(const NormSpec& spec, const Vec& y);
}  // namespace detail

}  // namespace projgeo
