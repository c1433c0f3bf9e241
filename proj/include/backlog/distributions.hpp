#pragma once

#include <cstdint>
#include <vector>

namespace backlog {

/// Demand rate and fixed production quantity.
class ModelParams {
public:
    /// Throws DomainError unless lambda is positive and finite and production >= 0.
    ModelParams(double lambda, std::int64_t production);

    double lambda() const noexcept { return lambda_; }
    std::int64_t production() const noexcept { return production_; }

private:
    double lambda_;
    std::int64_t production_;
};

/// Terms below this are flushed to zero.
inline constexpr double kPoissonUnderflow = 1e-320;

/// log(n!) via std::lgamma.
double log_factorial(std::int64_t n);

/// e^{-x} x^n / n!, overflow-free for x up to 1e4 and n up to 1e5 (and beyond).
double poisson_term(double lambda_t, std::int64_t n);

/// The first `count` Poisson terms p_0 .. p_{count-1} for mean lambda_t.
/// Forward recurrence from e^{-x} for moderate means; for large means, recurrence
/// outward from one log-space term at the mode.
std::vector<double> poisson_terms(double lambda_t, std::int64_t count);

/// Regularized Poisson term sequence with its mean.
struct PoissonTermSeries {
    double lambda_t;
    std::vector<double> terms;

    static PoissonTermSeries make(double lambda_t, std::int64_t count);
};

double exp_density(double lambda, double t);

/// lambda^n t^{n-1} e^{-lambda t} / (n-1)!; n >= 1.
double erlang_density(double lambda, std::int64_t n, double t);

/// 1 - sum_{j<n} poisson_term(lambda t, j). Sums the upper tail instead when
/// lambda t < n so that small probabilities keep their relative precision.
double erlang_cdf(double lambda, std::int64_t n, double t);

}  // namespace backlog
