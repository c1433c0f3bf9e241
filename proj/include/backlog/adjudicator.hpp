#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "backlog/closed_forms.hpp"
#include "backlog/laplace.hpp"

namespace backlog {

/// Evaluation points; the report enumerates lambdas x productions x times in that order.
struct SweepGrid {
    std::vector<double> lambdas;
    std::vector<std::int64_t> productions;
    std::vector<double> times;

    /// Throws DomainError on empty lists, invalid values or unsorted times.
    void validate() const;
    std::size_t size() const { return lambdas.size() * productions.size() * times.size(); }

    /// lambda in {0.5, 1, 2}, P in 1..6, t in {0.25, 0.5, 1, 2, 5, 10}.
    static SweepGrid default_grid();
};

/// Per-row warning bits.
enum RowFlag : unsigned {
    kFlagNone = 0,
    kFlagUndefinedTerm = 1u << 0,      ///< candidate contains a factorial of a negative integer
    kFlagBoundaryViolation = 1u << 1,  ///< |value| > 1e-9 at t = 0, where the integral must vanish
    kFlagOracleFailure = 1u << 2,      ///< quadrature oracle could not certify oracle_tol; row excluded
    kFlagGsSkipped = 1u << 3,          ///< t below the inversion engine's t_min
    kFlagNonFinite = 1u << 4,          ///< candidate evaluated to inf or nan
};

/// Flag names joined by ';' (empty when no flag is set).
std::string flags_to_string(unsigned flags);

enum class Verdict { Matches, Fails, UndefinedAtSomePoints };

std::string_view verdict_name(Verdict verdict);

struct ComparisonRow {
    double lambda = 0.0;
    std::int64_t production = 0;
    double t = 0.0;
    CandidateFormula candidate = CandidateFormula::CompactIntegral;
    double candidate_value = 0.0;
    double oracle_value = 0.0;
    double oracle_bound = 0.0;
    std::optional<double> gs_value;
    double abs_dev = 0.0;
    double rel_dev = 0.0;
    unsigned flags = kFlagNone;
};

struct CandidateSummary {
    CandidateFormula candidate = CandidateFormula::CompactIntegral;
    double max_abs_dev = 0.0;
    double max_rel_dev = 0.0;
    Verdict verdict = Verdict::Matches;
    std::int64_t points_compared = 0;
    std::int64_t undefined_points = 0;
};

struct ComparisonReport {
    std::vector<ComparisonRow> rows;
    std::vector<CandidateSummary> summary;
    std::int64_t oracle_failures = 0;
    /// Largest |GS - quadrature| over points where both exist.
    double max_gs_oracle_gap = 0.0;
    double match_tol = 0.0;
    double oracle_tol = 0.0;

    const CandidateSummary& summary_for(CandidateFormula candidate) const;
};

inline constexpr double kDefaultMatchTol = 1e-6;
inline constexpr double kDefaultOracleTol = 1e-9;
inline constexpr double kBoundaryTol = 1e-9;

/// Double-precision Stehfest sums with N <= 20 stay ~1e-3 away from the truth
/// at t = 10 for the larger P; adjudication uses extended precision and N = 32.
inline constexpr InversionConfig kAdjudicationInversion{InversionMethod::GaverStehfest, 32, 1e-3,
                                                        InversionPrecision::Extended};

/// Evaluates every candidate at every grid point against the quadrature oracle
/// and records the Gaver-Stehfest inversion of the cumulative image alongside.
/// Requires match_tol > 10 * oracle_tol. `workers` = 0 uses hardware concurrency;
/// row order never depends on it.
ComparisonReport adjudicate(const SweepGrid& grid, std::span<const CandidateFormula> candidates,
                            double match_tol = kDefaultMatchTol, double oracle_tol = kDefaultOracleTol,
                            const InversionConfig& inversion = kAdjudicationInversion, unsigned workers = 0);

/// Closed-form expected backlog against the series oracle and GS inversion at one point.
struct PointwiseReport {
    double closed_form = 0.0;
    double series_value = 0.0;
    double series_bound = 0.0;
    std::optional<double> gs_value;
    double series_dev = 0.0;
    std::optional<double> gs_dev;
};

PointwiseReport pointwise_check(const ModelParams& params, double t, double series_tol = 1e-12,
                                const InversionConfig& inversion = kAdjudicationInversion);

enum class ReportFormat { Csv, Json };

/// Fixed column order; doubles with 17 significant digits; byte-identical for identical input.
std::string render_report(const ComparisonReport& report, ReportFormat format);

/// One row per candidate: candidate, verdict, max_abs_dev, max_rel_dev, points_compared, undefined_points.
std::string render_summary(const ComparisonReport& report, ReportFormat format);

/// 17 significant digits via std::to_chars; non-finite values render as nan / inf / -inf.
std::string format_double(double value);

}  // namespace backlog
