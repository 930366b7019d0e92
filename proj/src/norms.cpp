#include "projgeo/norms.hpp"

#include <cmath>
#include <limits>

#include "projgeo/random.hpp"

namespace projgeo {

namespace {

void require_dim(const NormSpec& spec, const Vec& y) {
    if (y.size() != dimension(spec))
        throw DimensionError("vector dimension does not match norm dimension");
    if (!y.allFinite()) throw DimensionError("non-finite vector component");
}

double matsumoto_eval(const MatsumotoNorm& m, double y1, double y2) {
    const double r2 = y1 * y1 + y2 * y2;
    if (r2 == 0.0) return 0.0;
    const double r = std::sqrt(r2);
    return r2 / (m.speed * r + 0.5 * m.gravity * std::sin(m.slope) * y1);
}

}  // namespace

int dimension(const NormSpec& spec) {
    return std::visit(
        [](const auto& s) -> int {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, EuclideanNorm>) return s.dim;
            else if constexpr (std::is_same_v<T, PNorm>) return s.dim;
            else if constexpr (std::is_same_v<T, RandersNorm>) return static_cast<int>(s.a.rows());
            else if constexpr (std::is_same_v<T, MatsumotoNorm>) return 2;
            else return s.dim;
        },
        spec);
}

bool is_smooth(const NormSpec& spec) {
    return !std::holds_alternative<NonSmoothSumNorm>(spec);
}

void validate_spec(const NormSpec& spec) {
    if (dimension(spec) < 1) throw DimensionError("norm dimension must be >= 1");
    if (const auto* p = std::get_if<PNorm>(&spec)) {
        if (!(p->exponent >= 2.0))
            throw UnsupportedVariantError("p-norm exponent must be >= 2 for C^2 smoothness");
    } else if (const auto* r = std::get_if<RandersNorm>(&spec)) {
        if (r->a.rows() != r->a.cols() || r->a.rows() != r->drift.size())
            throw DimensionError("Randers matrix/drift dimensions inconsistent");
        if (!r->a.isApprox(r->a.transpose(), 1e-12))
            throw UnsupportedVariantError("Randers matrix must be symmetric");
        Eigen::LLT<Mat> llt(r->a);
        if (llt.info() != Eigen::Success)
            throw UnsupportedVariantError("Randers matrix must be positive definite");
        const double bnorm = std::sqrt(r->drift.dot(llt.solve(r->drift)));
        if (!(bnorm < 1.0))
            throw UnsupportedVariantError("Randers drift must satisfy |b|_{A^-1} < 1");
    } else if (const auto* m = std::get_if<MatsumotoNorm>(&spec)) {
        if (!(m->slope >= 0.0 && m->slope < M_PI / 2))
            throw UnsupportedVariantError("slope angle must lie in [0, pi/2)");
        if (!(m->speed > 0.0) || !(m->gravity >= 0.0))
            throw UnsupportedVariantError("speed must be positive, gravity nonnegative");
        if (m->gravity * std::sin(m->slope) > m->speed)
            throw UnsupportedVariantError("inadmissible slope norm: gravity*sin(slope) > speed");
    } else if (const auto* n = std::get_if<NonSmoothSumNorm>(&spec)) {
        if (!(n->lambda > 0.0))
            throw UnsupportedVariantError("non-smooth sum weight must be positive");
    }
}

double detail::eval_norm_unchecked(const NormSpec& spec, const Vec& y) {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, EuclideanNorm>) {
                return y.norm();
            } else if constexpr (std::is_same_v<T, PNorm>) {
                double acc = 0.0;
                for (int i = 0; i < y.size(); ++i) acc += std::pow(std::abs(y[i]), s.exponent);
                return std::pow(acc, 1.0 / s.exponent);
            } else if constexpr (std::is_same_v<T, RandersNorm>) {
                return std::sqrt(y.dot(s.a * y)) + s.drift.dot(y);
            } else if constexpr (std::is_same_v<T, MatsumotoNorm>) {
                return matsumoto_eval(s, y[0], y[1]);
            } else {
                return y.norm() + s.lambda * std::abs(y[0]);
            }
        },
        spec);
}

double eval_norm(const NormSpec& spec, const Vec& y) {
    require_dim(spec, y);
    return detail::eval_norm_unchecked(spec, y);
}

double quasi_distance(const NormSpec& spec, const Vec& p, const Vec& q) {
    if (p.size() != q.size()) throw DimensionError("point dimensions differ");
    return eval_norm(spec, q - p);
}

Vec norm_gradient(const NormSpec& spec, const Vec& y) {
    require_dim(spec, y);
    if (y.isZero(0.0)) throw UnsupportedVariantError("norm gradient undefined at the origin");
    return std::visit(
        [&](const auto& s) -> Vec {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, EuclideanNorm>) {
                return y / y.norm();
            } else if constexpr (std::is_same_v<T, PNorm>) {
                double acc = 0.0;
                for (int i = 0; i < y.size(); ++i) acc += std::pow(std::abs(y[i]), s.exponent);
                const double scale = std::pow(acc, 1.0 / s.exponent - 1.0);
                Vec g(y.size());
                for (int i = 0; i < y.size(); ++i) {
                    const double a = std::abs(y[i]);
                    g[i] = a == 0.0 ? 0.0
                                    : scale * std::pow(a, s.exponent - 1.0) * (y[i] > 0 ? 1.0 : -1.0);
                }
                return g;
            } else if constexpr (std::is_same_v<T, RandersNorm>) {
                const Vec ay = s.a * y;
                return ay / std::sqrt(y.dot(ay)) + s.drift;
            } else if constexpr (std::is_same_v<T, MatsumotoNorm>) {
                const double r2 = y[0] * y[0] + y[1] * y[1];
                const double r = std::sqrt(r2);
                const double c = 0.5 * s.gravity * std::sin(s.slope);
                const double den = s.speed * r + c * y[0];
                Vec g(2);
                g[0] = (2.0 * y[0] * den - r2 * (s.speed * y[0] / r + c)) / (den * den);
                g[1] = (2.0 * y[1] * den - r2 * (s.speed * y[1] / r)) / (den * den);
                return g;
            } else {
                throw UnsupportedVariantError("non-smooth norm has no gradient");
            }
        },
        spec);
}

Mat finite_difference_tensor(const NormSpec& spec, const Vec& y) {
    // eps^(1/4) balances truncation against cancellation in the second
    // difference of F^2/2.
    const double h = std::pow(std::numeric_limits<double>::epsilon(), 0.25) *
                     std::max(1.0, y.norm());
    const int n = static_cast<int>(y.size());
    const auto f = [&](const Vec& v) {
        const double fv = detail::eval_norm_unchecked(spec, v);
        return 0.5 * fv * fv;
    };
    Mat hess(n, n);
    const double f0 = f(y);
    for (int i = 0; i < n; ++i) {
        Vec e = Vec::Zero(n);
        e[i] = h;
        hess(i, i) = (f(y + e) - 2.0 * f0 + f(y - e)) / (h * h);
        for (int j = i + 1; j < n; ++j) {
            Vec ej = Vec::Zero(n);
            ej[j] = h;
            const double v = (f(y + e + ej) - f(y + e - ej) - f(y - e + ej) + f(y - e - ej)) /
                             (4.0 * h * h);
            hess(i, j) = hess(j, i) = v;
        }
    }
    return hess;
}

MetricTensor metric_tensor(const NormSpec& spec, const Vec& y) {
    require_dim(spec, y);
    if (y.isZero(0.0))
        throw UnsupportedVariantError("metric tensor undefined at the origin");
    Mat g = std::visit(
        [&](const auto& s) -> Mat {
            using T = std::decay_t<decltype(s)>;
            const int n = static_cast<int>(y.size());
            if constexpr (std::is_same_v<T, EuclideanNorm>) {
                return Mat::Identity(n, n);
            } else if constexpr (std::is_same_v<T, PNorm>) {
                const double p = s.exponent;
                double acc = 0.0;
                for (int i = 0; i < n; ++i) acc += std::pow(std::abs(y[i]), p);
                Vec v(n);
                for (int i = 0; i < n; ++i) {
                    const double a = std::abs(y[i]);
                    v[i] = a == 0.0 ? 0.0 : std::pow(a, p - 1.0) * (y[i] > 0 ? 1.0 : -1.0);
                }
                Mat g2 = (2.0 - p) * std::pow(acc, 2.0 / p - 2.0) * (v * v.transpose());
                const double diag = (p - 1.0) * std::pow(acc, 2.0 / p - 1.0);
                for (int i = 0; i < n; ++i) {
                    const double a = std::abs(y[i]);
                    g2(i, i) += diag * (a == 0.0 && p > 2.0 ? 0.0 : std::pow(a, p - 2.0));
                }
                return g2;
            } else if constexpr (std::is_same_v<T, RandersNorm>) {
                const Vec ay = s.a * y;
                const double alpha = std::sqrt(y.dot(ay));
                const double beta = s.drift.dot(y);
                const Vec l = ay / alpha;
                Mat g2 = s.a + (beta / alpha) * s.a - (beta / alpha) * (l * l.transpose()) +
                         l * s.drift.transpose() + s.drift * l.transpose() +
                         s.drift * s.drift.transpose();
                return g2;
            } else if constexpr (std::is_same_v<T, MatsumotoNorm>) {
                return finite_difference_tensor(spec, y);
            } else {
                throw UnsupportedVariantError("metric tensor unsupported for non-smooth norm");
            }
        },
        spec);
    return MetricTensor{y, std::move(g)};
}

double metric_form(const NormSpec& spec, const Vec& y, const Vec& w) {
    if (y.size() != w.size()) throw DimensionError("vector dimensions differ");
    return eval_norm(spec, y) * norm_gradient(spec, y).dot(w);
}

double fundamental_inequality_residual(const NormSpec& spec, const Vec& y, const Vec& w) {
    if (y.isZero(0.0) || w.isZero(0.0))
        throw UnsupportedVariantError("fundamental inequality requires nonzero vectors");
    return eval_norm(spec, y) * eval_norm(spec, w) - metric_form(spec, y, w);
}

bool is_reversible(const NormSpec& spec, int samples, double tol) {
    if (samples < 1) throw DimensionError("sample count must be >= 1");
    auto rng = make_rng(0x5eed5eedull);
    const int n = dimension(spec);
    for (int i = 0; i < samples; ++i) {
        const Vec y = random_unit_vector(rng, n);
        const double f = detail::eval_norm_unchecked(spec, y);
        const double fm = detail::eval_norm_unchecked(spec, -y);
        if (std::abs(f - fm) > tol * (1.0 + f)) return false;
    }
    return true;
}

}  // namespace projgeo
