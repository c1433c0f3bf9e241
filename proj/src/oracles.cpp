#include "backlog/oracles.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "backlog/errors.hpp"
#include "backlog/quadrature.hpp"

namespace backlog {

namespace {

constexpr std::int64_t kMaxSeriesTerms = 10'000'000;
constexpr std::int64_t kMaxConvolutionPoints = 100'000'000;
constexpr std::int64_t kMinReliablePaths = 100;
constexpr std::int64_t kPathsPerChunk = 1024;
// Two-sided 99% standard normal quantile.
constexpr double kZ99 = 2.5758293035489004;

std::uint64_t splitmix_finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t state) : state_(state) {}

    std::uint64_t next() { return splitmix_finalize(state_ += 0x9E3779B97F4A7C15ULL); }

    /// Uniform on (0, 1]; never returns 0.
    double uniform_open_zero() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct Moments {
    std::int64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void push(double x) {
        ++n;
        const double delta = x - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (x - mean);
    }

    void merge(const Moments& other) {
        if (other.n == 0) return;
        const auto total = n + other.n;
        const double delta = other.mean - mean;
        mean += delta * static_cast<double>(other.n) / static_cast<double>(total);
        m2 += other.m2 + delta * delta * static_cast<double>(n) * static_cast<double>(other.n) /
                             static_cast<double>(total);
        n = total;
    }
};

double simulate_path(double lambda, std::int64_t production, double t, SplitMix64& rng) {
    double now = 0.0;
    std::int64_t arrivals = 0;
    double area = 0.0;
    for (;;) {
        const double next = now - std::log(rng.uniform_open_zero()) / lambda;
        if (arrivals > production) {
            area += static_cast<double>(arrivals - production) * (std::min(next, t) - now);
        }
        if (next >= t) break;
        now = next;
        ++arrivals;
    }
    return area;
}

void check_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("time must be finite and non-negative");
}

}  // namespace

void McConfig::validate() const {
    if (n_paths < 1) throw DomainError("Monte Carlo needs at least one path");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("Monte Carlo horizon must be positive");
}

std::uint64_t path_seed(std::uint64_t master_seed, std::uint64_t path_index) {
    return splitmix_finalize(splitmix_finalize(master_seed) ^ (path_index * 0x9E3779B97F4A7C15ULL + 1));
}

EstimateWithError backlog_series_oracle(const ModelParams& params, double t, double abs_tol) {
    check_time(t);
    if (!(abs_tol > 0.0)) throw DomainError("abs_tol must be positive");
    const double x = params.lambda() * t;
    const std::int64_t P = params.production();
    if (x == 0.0) return {0.0, 0.0, 0, true};

    CompensatedSum sum;
    std::int64_t n = P + 1;
    double p = poisson_term(x, n);
    for (std::int64_t j = 1; j <= kMaxSeriesTerms; ++j) {
        sum.add(static_cast<double>(j) * p);

        // For k > j the terms a_k = k p_{P+k} shrink at least geometrically with ratio rho.
        const double jd = static_cast<double>(j);
        const double rho = (jd + 2.0) / (jd + 1.0) * x / static_cast<double>(n + 2);
        const double next_p = p > 0.0 ? p * x / static_cast<double>(n + 1) : poisson_term(x, n + 1);
        if (rho < 1.0) {
            const double tail = (jd + 1.0) * next_p / (1.0 - rho);
            if (tail <= 0.5 * abs_tol) {
                const double value = sum.value();
                const double bound = tail + 2.0 * std::numeric_limits<double>::epsilon() * value;
                if (bound > abs_tol) {
                    throw AccuracyError("series oracle: rounding exceeds tolerance", value, bound);
                }
                return {value, bound, j, true};
            }
        }
        p = next_p;
        ++n;
    }
    throw AccuracyError("series oracle: tolerance not certified within term budget", sum.value(),
                        std::numeric_limits<double>::infinity());
}

EstimateWithError cumulative_quadrature_oracle(const ModelParams& params, double t, double abs_tol) {
    check_time(t);
    if (!(abs_tol > 0.0)) throw DomainError("abs_tol must be positive");
    if (t == 0.0) return {0.0, 0.0, 0, true};

    const double integrand_tol = 0.25 * abs_tol / t;
    double worst_integrand_bound = 0.0;
    auto integrand = [&](double u) {
        const auto e = backlog_series_oracle(params, u, integrand_tol);
        worst_integrand_bound = std::max(worst_integrand_bound, e.abs_error_bound);
        return e.value;
    };
    SimpsonOptions opts;
    opts.abs_tol = 0.5 * abs_tol;
    const auto quad = adaptive_simpson(integrand, 0.0, t, opts);
    const double bound = quad.error + worst_integrand_bound * t;
    if (!quad.converged || !(bound < abs_tol)) {
        throw AccuracyError("quadrature oracle: error bound " + std::to_string(bound) + " exceeds tolerance",
                            quad.value, bound);
    }
    return {quad.value, bound, static_cast<std::int64_t>(quad.evaluations), true};
}

EstimateWithError monte_carlo_cumulative(const ModelParams& params, double t, const McConfig& config) {
    config.validate();
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("Monte Carlo time must be positive");
    if (t > config.horizon) throw DomainError("Monte Carlo time exceeds configured horizon");

    const std::int64_t chunks = (config.n_paths + kPathsPerChunk - 1) / kPathsPerChunk;
    std::vector<Moments> partial(static_cast<std::size_t>(chunks));
    std::atomic<std::int64_t> next_chunk{0};

    auto worker = [&] {
        for (;;) {
            const std::int64_t c = next_chunk.fetch_add(1);
            if (c >= chunks) return;
            Moments m;
            const std::int64_t begin = c * kPathsPerChunk;
            const std::int64_t end = std::min(begin + kPathsPerChunk, config.n_paths);
            for (std::int64_t path = begin; path < end; ++path) {
                SplitMix64 rng(path_seed(config.seed, static_cast<std::uint64_t>(path)));
                m.push(simulate_path(params.lambda(), params.production(), t, rng));
            }
            partial[static_cast<std::size_t>(c)] = m;
        }
    };

    unsigned workers = config.workers != 0 ? config.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::int64_t>(workers, chunks));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
    }

    // Merge in chunk order so the result does not depend on scheduling.
    Moments total;
    for (const auto& m : partial) total.merge(m);

    EstimateWithError out;
    out.value = total.mean;
    out.n_effective = total.n;
    out.reliable = total.n >= kMinReliablePaths;
    if (total.n > 1) {
        const double variance = total.m2 / static_cast<double>(total.n - 1);
        out.abs_error_bound = kZ99 * std::sqrt(variance / static_cast<double>(total.n));
    }
    return out;
}

double nfold_exponential_convolution(double lambda, int n, double t, double grid_step) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("rate must be positive");
    if (n < 2 || n > 8) throw DomainError("convolution order must be within [2, 8]");
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("time must be positive");
    if (!(grid_step > 0.0) || grid_step > t / 100.0) throw DomainError("grid_step must be in (0, t/100]");

    const double steps_real = std::ceil(t / grid_step);
    if (steps_real + 1.0 > static_cast<double>(kMaxConvolutionPoints)) {
        throw ResourceError("convolution grid exceeds " + std::to_string(kMaxConvolutionPoints) + " points");
    }
    const auto steps = static_cast<std::size_t>(steps_real);
    const double h = t / static_cast<double>(steps);

    std::vector<double> kernel(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) kernel[i] = lambda * std::exp(-lambda * h * static_cast<double>(i));

    std::vector<double> current = kernel;
    std::vector<double> next(steps + 1);
    for (int fold = 2; fold <= n; ++fold) {
        next[0] = 0.0;
        for (std::size_t i = 1; i <= steps; ++i) {
            double acc = 0.5 * (current[0] * kernel[i] + current[i] * kernel[0]);
            for (std::size_t m = 1; m < i; ++m) acc += current[m] * kernel[i - m];
            next[i] = h * acc;
        }
        std::swap(current, next);
    }
    return current[steps];
}

}  // namespace backlog
