#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "backlog/distributions.hpp"
#include "backlog/errors.hpp"

namespace backlog {

/// 50 significant digits; used where Stehfest weights of high order would
/// otherwise cancel catastrophically in double.
using ExtendedReal = boost::multiprecision::cpp_bin_float_50;

/// An s-domain function on the positive real axis. `extended` is optional and
/// only needed for extended-precision inversion.
struct ImageFunction {
    std::function<double(double)> evaluator;
    std::string description;
    std::function<ExtendedReal(const ExtendedReal&)> extended;

    double operator()(double s) const { return evaluator(s); }
};

enum class InversionMethod { GaverStehfest };

enum class InversionPrecision {
    Double,    ///< weights and image in double; order even in [4, 20]
    Extended,  ///< weights and image in ExtendedReal; order even in [4, 40]
};

struct InversionConfig {
    InversionMethod method = InversionMethod::GaverStehfest;
    /// Number of Stehfest weights.
    int order = 14;
    /// Smallest time the engine will invert at.
    double t_min = 1e-3;
    InversionPrecision precision = InversionPrecision::Double;

    /// Throws ConfigError on an unsupported order or non-positive t_min.
    void validate() const;
};

inline constexpr int kMaxDoubleOrder = 20;
inline constexpr int kMaxExtendedOrder = 40;

namespace detail {

template <class Scalar>
Scalar integer_power(Scalar base, std::int64_t exponent) {
    Scalar result = 1;
    while (exponent > 0) {
        if (exponent & 1) result *= base;
        base *= base;
        exponent >>= 1;
    }
    return result;
}

template <class Scalar>
void check_transform_variable(const Scalar& s) {
    if (!(s > 0)) throw DomainError("transform variable s must be positive");
}

}  // namespace detail

/// (lambda/(lambda+s))^{j+P} / (lambda+s): transform of Pr[demand = P + j].
template <class Scalar = double>
Scalar image_backlog_prob(const ModelParams& params, std::int64_t j, const Scalar& s) {
    detail::check_transform_variable(s);
    if (j < 0) throw DomainError("backlog magnitude must be non-negative");
    const Scalar lambda = params.lambda();
    const Scalar denom = lambda + s;
    return detail::integer_power<Scalar>(lambda / denom, j + params.production()) / denom;
}

/// (lambda/(lambda+s))^P lambda / s^2: transform of the expected backlog.
template <class Scalar = double>
Scalar image_expected_backlog(const ModelParams& params, const Scalar& s) {
    detail::check_transform_variable(s);
    const Scalar lambda = params.lambda();
    return detail::integer_power<Scalar>(lambda / (lambda + s), params.production()) * lambda / (s * s);
}

/// image_expected_backlog / s: transform of the cumulative expected backlog.
template <class Scalar = double>
Scalar image_cumulative_backlog(const ModelParams& params, const Scalar& s) {
    return image_expected_backlog<Scalar>(params, s) / s;
}

/// f^{P+1} / (s (1 - f)) with f = lambda/(lambda+s). Algebraically equal to
/// image_expected_backlog; the complement 1 - f is formed literally.
template <class Scalar = double>
Scalar image_corollary_form(const ModelParams& params, const Scalar& s) {
    detail::check_transform_variable(s);
    const Scalar lambda = params.lambda();
    const Scalar f = lambda / (lambda + s);
    return detail::integer_power<Scalar>(f, params.production() + 1) / (s * (Scalar(1) - f));
}

ImageFunction expected_backlog_image(const ModelParams& params);
ImageFunction cumulative_backlog_image(const ModelParams& params);
ImageFunction backlog_prob_image(const ModelParams& params, std::int64_t j);
/// (lambda/(lambda+s))^n, the transform of the Erlang(n) density.
ImageFunction erlang_image(double lambda, std::int64_t n);

/// |f(t)| <= scale * (1 + t)^degree, used to truncate the transform integral.
struct GrowthHint {
    int degree = 0;
    double scale = 1.0;
};

struct TransformEstimate {
    double value = 0.0;
    /// Quadrature error estimate plus the certified truncation bound.
    double error_bound = 0.0;
    /// Upper integration limit actually used.
    double horizon = 0.0;
    std::size_t evaluations = 0;
};

/// int_0^inf e^{-st} f(t) dt by adaptive Simpson on [0, T]. T is the first
/// doubling with tail bound below abs_tol/2; quadrature gets the other half.
/// Throws AccuracyError (with best estimate) if the quadrature does not converge.
TransformEstimate forward_transform(const std::function<double(double)>& f, double s, double abs_tol,
                                    GrowthHint hint = {});

/// Stehfest weights V_1..V_N rounded to double, computed once from exact rationals.
std::span<const double> stehfest_weights(int order);
std::span<const ExtendedReal> stehfest_weights_extended(int order);

/// (ln2/t) sum_k V_k F(k ln2 / t).
double invert_gaver_stehfest(const ImageFunction& image, double t, const InversionConfig& config = {});

}  // namespace backlog
