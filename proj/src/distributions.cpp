#include "backlog/distributions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "backlog/errors.hpp"

namespace backlog {

namespace {

// Above either bound the direct recurrence from e^{-x} is abandoned.
constexpr double kDirectMaxMean = 700.0;
constexpr std::int64_t kDirectMaxCount = 170;

// log(n!) - [(n + 1/2) log n - n + log sqrt(2 pi)] for n = 0..15.
constexpr std::array<double, 16> kStirlingErrorTable = {
    0.0,
    0.08106146679532725821967026,
    0.04134069595540929409382208,
    0.02767792568499833914878929,
    0.02079067210376509311152277,
    0.01664469118982119216319487,
    0.01387612882307074799874573,
    0.01189670994589177009505572,
    0.01041126526197209649747857,
    0.009255462182712732917728637,
    0.008330563433362871256469319,
    0.007573675487951840794972024,
    0.006942840107209529865664153,
    0.006408994188004207068439631,
    0.005951370112758847735624416,
    0.00555473355196280137103869,
};

double stirling_error(std::int64_t n) {
    if (n < static_cast<std::int64_t>(kStirlingErrorTable.size())) {
        return kStirlingErrorTable[static_cast<std::size_t>(n)];
    }
    constexpr double s0 = 1.0 / 12.0;
    constexpr double s1 = 1.0 / 360.0;
    constexpr double s2 = 1.0 / 1260.0;
    constexpr double s3 = 1.0 / 1680.0;
    constexpr double s4 = 1.0 / 1188.0;
    const double nn = static_cast<double>(n);
    const double n2 = nn * nn;
    if (n > 500) return (s0 - s1 / n2) / nn;
    if (n > 80) return (s0 - (s1 - s2 / n2) / n2) / nn;
    if (n > 35) return (s0 - (s1 - (s2 - s3 / n2) / n2) / n2) / nn;
    return (s0 - (s1 - (s2 - (s3 - s4 / n2) / n2) / n2) / n2) / nn;
}

// Deviance term x log(x/mu) + mu - x, evaluated without cancellation near x == mu.
double deviance(double x, double mu) {
    if (std::abs(x - mu) < 0.1 * (x + mu)) {
        double v = (x - mu) / (x + mu);
        double sum = (x - mu) * v;
        double ej = 2.0 * x * v;
        const double v2 = v * v;
        for (int j = 1; j < 1000; ++j) {
            ej *= v2;
            const double next = sum + ej / (2 * j + 1);
            if (next == sum) return next;
            sum = next;
        }
        return sum;
    }
    return x * std::log(x / mu) + mu - x;
}

double flush(double p) { return p < kPoissonUnderflow ? 0.0 : p; }

void check_mean(double lambda_t) {
    if (!(lambda_t >= 0.0) || !std::isfinite(lambda_t)) {
        throw DomainError("Poisson mean must be finite and non-negative, got " + std::to_string(lambda_t));
    }
}

void check_rate(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw DomainError("rate must be positive and finite, got " + std::to_string(lambda));
    }
}

void check_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw DomainError("time must be finite and non-negative, got " + std::to_string(t));
    }
}

}  // namespace

ModelParams::ModelParams(double lambda, std::int64_t production) : lambda_(lambda), production_(production) {
    check_rate(lambda);
    if (production < 0) {
        throw DomainError("production must be non-negative, got " + std::to_string(production));
    }
}

double log_factorial(std::int64_t n) {
    if (n < 0) throw DomainError("log_factorial of negative integer");
    if (n < 2) return 0.0;
    return std::lgamma(static_cast<double>(n) + 1.0);
}

double poisson_term(double lambda_t, std::int64_t n) {
    check_mean(lambda_t);
    if (n < 0) throw DomainError("Poisson term index must be non-negative");
    if (lambda_t == 0.0) return n == 0 ? 1.0 : 0.0;

    if (lambda_t <= kDirectMaxMean && n <= kDirectMaxCount) {
        double p = std::exp(-lambda_t);
        for (std::int64_t i = 1; i <= n; ++i) p *= lambda_t / static_cast<double>(i);
        return flush(p);
    }
    if (n == 0) return flush(std::exp(-lambda_t));

    const double nn = static_cast<double>(n);
    const double log_p = -stirling_error(n) - deviance(nn, lambda_t);
    return flush(std::exp(log_p) / std::sqrt(2.0 * std::numbers::pi * nn));
}

std::vector<double> poisson_terms(double lambda_t, std::int64_t count) {
    check_mean(lambda_t);
    if (count < 0) throw DomainError("term count must be non-negative");
    std::vector<double> out(static_cast<std::size_t>(count), 0.0);
    if (count == 0) return out;

    if (lambda_t > kDirectMaxMean) {
        // Anchor one term near the mode, then recur outward; terms decrease both ways.
        const auto mode = std::min(static_cast<std::int64_t>(lambda_t), count - 1);
        const double anchor = poisson_term(lambda_t, mode);
        out[static_cast<std::size_t>(mode)] = anchor;
        double p = anchor;
        for (std::int64_t i = mode + 1; i < count; ++i) {
            p = flush(p * (lambda_t / static_cast<double>(i)));
            out[static_cast<std::size_t>(i)] = p;
        }
        p = anchor;
        for (std::int64_t i = mode; i > 0; --i) {
            p = flush(p * (static_cast<double>(i) / lambda_t));
            out[static_cast<std::size_t>(i - 1)] = p;
        }
        return out;
    }
    double p = std::exp(-lambda_t);
    out[0] = flush(p);
    for (std::int64_t i = 1; i < count; ++i) {
        p *= lambda_t / static_cast<double>(i);
        p = flush(p);
        out[static_cast<std::size_t>(i)] = p;
    }
    return out;
}

PoissonTermSeries PoissonTermSeries::make(double lambda_t, std::int64_t count) {
    return {lambda_t, poisson_terms(lambda_t, count)};
}

double exp_density(double lambda, double t) {
    check_rate(lambda);
    check_time(t);
    return lambda * std::exp(-lambda * t);
}

double erlang_density(double lambda, std::int64_t n, double t) {
    check_rate(lambda);
    check_time(t);
    if (n < 1) throw DomainError("Erlang shape must be at least 1");
    return lambda * poisson_term(lambda * t, n - 1);
}

double erlang_cdf(double lambda, std::int64_t n, double t) {
    check_rate(lambda);
    check_time(t);
    if (n < 1) throw DomainError("Erlang shape must be at least 1");
    const double x = lambda * t;
    if (x == 0.0) return 0.0;

    if (x < static_cast<double>(n)) {
        // Upper Poisson tail; terms decrease monotonically from j = n.
        double term = poisson_term(x, n);
        double sum = 0.0;
        for (std::int64_t j = n; term > 0.0; ++j) {
            sum += term;
            if (term < 1e-17 * sum) break;
            term *= x / static_cast<double>(j + 1);
        }
        return std::min(sum, 1.0);
    }
    double head = 0.0;
    for (double p : poisson_terms(x, n)) head += p;
    return std::clamp(1.0 - head, 0.0, 1.0);
}

}  // namespace backlog
