#include "backlog/laplace.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "backlog/errors.hpp"
#include "backlog/quadrature.hpp"

namespace backlog {

namespace {

constexpr int kMinOrder = 4;
constexpr double kMaxHorizon = 1e8;

void check_s(double s) {
    if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("transform variable s must be positive and finite");
}

std::vector<boost::multiprecision::cpp_rational> compute_stehfest(int order) {
    using boost::multiprecision::cpp_int;
    using boost::multiprecision::cpp_rational;

    auto factorial = [](int n) {
        cpp_int r = 1;
        for (int i = 2; i <= n; ++i) r *= i;
        return r;
    };

    const int half = order / 2;
    std::vector<cpp_rational> weights(static_cast<std::size_t>(order));
    for (int k = 1; k <= order; ++k) {
        cpp_rational sum = 0;
        for (int j = (k + 1) / 2; j <= std::min(k, half); ++j) {
            cpp_int num = boost::multiprecision::pow(cpp_int(j), static_cast<unsigned>(half)) * factorial(2 * j);
            cpp_int den = factorial(half - j) * factorial(j) * factorial(j - 1) * factorial(k - j) *
                          factorial(2 * j - k);
            sum += cpp_rational(num, den);
        }
        if ((k + half) % 2 != 0) sum = -sum;
        weights[static_cast<std::size_t>(k - 1)] = sum;
    }
    return weights;
}

template <class Scalar, int MaxOrder>
const std::array<std::vector<Scalar>, MaxOrder + 1>& stehfest_table() {
    static const auto table = [] {
        std::array<std::vector<Scalar>, MaxOrder + 1> t;
        for (int n = kMinOrder; n <= MaxOrder; n += 2) {
            for (const auto& w : compute_stehfest(n)) {
                t[static_cast<std::size_t>(n)].push_back(Scalar(numerator(w)) / Scalar(denominator(w)));
            }
        }
        return t;
    }();
    return table;
}

// int_T^inf (1+t)^d e^{-st} dt, closed form by repeated integration by parts.
double polynomial_tail(int degree, double s, double T) {
    double sum = 0.0;
    double falling = 1.0;  // d!/(d-k)!
    for (int k = 0; k <= degree; ++k) {
        sum += falling * std::pow(1.0 + T, degree - k) / std::pow(s, k + 1);
        falling *= degree - k;
    }
    return std::exp(-s * T) * sum;
}

void check_order(int order, int max_order) {
    if (order < kMinOrder || order > max_order || order % 2 != 0) {
        throw ConfigError("Gaver-Stehfest order must be even and within [4, " + std::to_string(max_order) +
                          "], got " + std::to_string(order));
    }
}

}  // namespace

void InversionConfig::validate() const {
    check_order(order, precision == InversionPrecision::Double ? kMaxDoubleOrder : kMaxExtendedOrder);
    if (!(t_min > 0.0)) throw ConfigError("t_min must be positive");
}

ImageFunction expected_backlog_image(const ModelParams& params) {
    return {[params](double s) {
                check_s(s);
                return image_expected_backlog(params, s);
            },
            "expected backlog",
            [params](const ExtendedReal& s) { return image_expected_backlog<ExtendedReal>(params, s); }};
}

ImageFunction cumulative_backlog_image(const ModelParams& params) {
    return {[params](double s) {
                check_s(s);
                return image_cumulative_backlog(params, s);
            },
            "cumulative expected backlog",
            [params](const ExtendedReal& s) { return image_cumulative_backlog<ExtendedReal>(params, s); }};
}

ImageFunction backlog_prob_image(const ModelParams& params, std::int64_t j) {
    if (j < 0) throw DomainError("backlog magnitude must be non-negative");
    return {[params, j](double s) {
                check_s(s);
                return image_backlog_prob(params, j, s);
            },
            "backlog probability j=" + std::to_string(j),
            [params, j](const ExtendedReal& s) { return image_backlog_prob<ExtendedReal>(params, j, s); }};
}

ImageFunction erlang_image(double lambda, std::int64_t n) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("rate must be positive");
    if (n < 1) throw DomainError("Erlang shape must be at least 1");
    return {[lambda, n](double s) {
                check_s(s);
                return detail::integer_power(lambda / (lambda + s), n);
            },
            "Erlang(" + std::to_string(n) + ") density",
            [lambda, n](const ExtendedReal& s) {
                detail::check_transform_variable(s);
                const ExtendedReal l = lambda;
                return detail::integer_power<ExtendedReal>(l / (l + s), n);
            }};
}

TransformEstimate forward_transform(const std::function<double(double)>& f, double s, double abs_tol,
                                    GrowthHint hint) {
    check_s(s);
    if (!(abs_tol > 0.0)) throw DomainError("abs_tol must be positive");
    if (hint.degree < 0 || !(hint.scale > 0.0)) throw DomainError("growth hint must have degree >= 0 and scale > 0");

    double horizon = 1.0;
    while (hint.scale * polynomial_tail(hint.degree, s, horizon) >= 0.5 * abs_tol) {
        horizon *= 2.0;
        if (horizon > kMaxHorizon) {
            throw AccuracyError("forward transform: truncation horizon exceeds limit", 0.0,
                                std::numeric_limits<double>::infinity());
        }
    }
    const double tail = hint.scale * polynomial_tail(hint.degree, s, horizon);

    SimpsonOptions opts;
    opts.abs_tol = 0.5 * abs_tol;
    const auto quad = adaptive_simpson([&](double t) { return std::exp(-s * t) * f(t); }, 0.0, horizon, opts);

    TransformEstimate est{quad.value, quad.error + tail, horizon, quad.evaluations};
    if (!quad.converged) {
        throw AccuracyError("forward transform: quadrature did not converge", est.value, est.error_bound);
    }
    return est;
}

std::span<const double> stehfest_weights(int order) {
    check_order(order, kMaxDoubleOrder);
    return stehfest_table<double, kMaxDoubleOrder>()[static_cast<std::size_t>(order)];
}

std::span<const ExtendedReal> stehfest_weights_extended(int order) {
    check_order(order, kMaxExtendedOrder);
    return stehfest_table<ExtendedReal, kMaxExtendedOrder>()[static_cast<std::size_t>(order)];
}

double invert_gaver_stehfest(const ImageFunction& image, double t, const InversionConfig& config) {
    config.validate();
    if (!(t >= config.t_min) || !std::isfinite(t)) {
        throw DomainError("Gaver-Stehfest inversion requires t >= t_min (" + std::to_string(config.t_min) + ")");
    }
    if (config.precision == InversionPrecision::Extended) {
        if (!image.extended) throw ConfigError("image '" + image.description + "' has no extended-precision form");
        const auto weights = stehfest_weights_extended(config.order);
        const ExtendedReal a = boost::multiprecision::log(ExtendedReal(2)) / ExtendedReal(t);
        ExtendedReal sum = 0;
        for (std::size_t k = 0; k < weights.size(); ++k) {
            sum += weights[k] * image.extended(ExtendedReal(static_cast<int>(k + 1)) * a);
        }
        return static_cast<double>(a * sum);
    }
    const auto weights = stehfest_weights(config.order);
    const double a = std::numbers::ln2 / t;
    double sum = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        sum += weights[k] * image(static_cast<double>(k + 1) * a);
    }
    return a * sum;
}

}  // namespace backlog
