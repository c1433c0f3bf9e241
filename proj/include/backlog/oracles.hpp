#pragma once

#include <cstdint>

#include "backlog/distributions.hpp"

namespace backlog {

/// Monte Carlo run settings. Results depend only on (seed, n_paths), never on `workers`.
struct McConfig {
    std::int64_t n_paths = 100'000;
    std::uint64_t seed = 0;
    /// Longest time a run may be asked for.
    double horizon = 1.0;
    /// Worker threads; 0 picks the hardware concurrency.
    unsigned workers = 0;

    void validate() const;
};

struct EstimateWithError {
    double value = 0.0;
    /// Certified bound for the deterministic oracles, 99% CI half-width for Monte Carlo.
    double abs_error_bound = 0.0;
    /// Terms summed, integrand evaluations, or sample paths.
    std::int64_t n_effective = 0;
    /// False when too few Monte Carlo paths were drawn for the CI to mean much.
    bool reliable = true;
};

/// sum_{j>=1} j Pr[D = P + j] with a geometric Poisson-tail certificate.
/// Throws AccuracyError if abs_tol cannot be certified within 10^7 terms.
EstimateWithError backlog_series_oracle(const ModelParams& params, double t, double abs_tol);

/// int_0^t of backlog_series_oracle by adaptive Simpson; quadrature error plus
/// t times the integrand tolerance stays below abs_tol.
EstimateWithError cumulative_quadrature_oracle(const ModelParams& params, double t, double abs_tol);

/// Path simulation of int_0^t (N(u) - P)^+ du with exponential interarrival times.
EstimateWithError monte_carlo_cumulative(const ModelParams& params, double t, const McConfig& config);

/// Value at t of the n-fold self-convolution of lambda e^{-lambda t}, by iterated
/// trapezoidal convolution on a uniform grid with step <= grid_step. Error is O(step^2).
double nfold_exponential_convolution(double lambda, int n, double t, double grid_step);

/// Counter-based seed for one Monte Carlo path (SplitMix64 finalizer of seed and index).
std::uint64_t path_seed(std::uint64_t master_seed, std::uint64_t path_index);

}  // namespace backlog
