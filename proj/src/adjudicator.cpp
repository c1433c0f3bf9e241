#include "backlog/adjudicator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "backlog/errors.hpp"
#include "backlog/oracles.hpp"

namespace backlog {

namespace {

struct PointResult {
    std::vector<ComparisonRow> rows;
    bool oracle_failed = false;
    std::optional<double> gs_gap;
};

PointResult evaluate_point(double lambda, std::int64_t production, double t,
                           std::span<const CandidateFormula> candidates, double oracle_tol,
                           const InversionConfig& inversion) {
    const ModelParams params(lambda, production);
    PointResult out;

    double oracle_value = 0.0;
    double oracle_bound = 0.0;
    try {
        const auto oracle = cumulative_quadrature_oracle(params, t, oracle_tol);
        oracle_value = oracle.value;
        oracle_bound = oracle.abs_error_bound;
    } catch (const AccuracyError& e) {
        oracle_value = e.best_estimate();
        oracle_bound = e.error_estimate();
        out.oracle_failed = true;
    }

    std::optional<double> gs;
    if (t >= inversion.t_min) {
        gs = invert_gaver_stehfest(cumulative_backlog_image(params), t, inversion);
        if (!out.oracle_failed) out.gs_gap = std::abs(*gs - oracle_value);
    }

    for (const auto candidate : candidates) {
        const auto value = cumulative_expected_backlog(params, t, candidate);
        ComparisonRow row;
        row.lambda = lambda;
        row.production = production;
        row.t = t;
        row.candidate = candidate;
        row.candidate_value = value.value;
        row.oracle_value = oracle_value;
        row.oracle_bound = oracle_bound;
        row.gs_value = gs;
        if (value.undefined_term) row.flags |= kFlagUndefinedTerm;
        if (!gs) row.flags |= kFlagGsSkipped;
        if (out.oracle_failed) row.flags |= kFlagOracleFailure;
        if (std::isfinite(value.value)) {
            row.abs_dev = std::abs(value.value - oracle_value);
        } else {
            row.flags |= kFlagNonFinite;
            row.abs_dev = std::numeric_limits<double>::infinity();
        }
        row.rel_dev = row.abs_dev / std::max(std::abs(oracle_value), 1.0);
        if (t == 0.0 && !(std::abs(value.value) <= kBoundaryTol)) row.flags |= kFlagBoundaryViolation;
        out.rows.push_back(row);
    }
    return out;
}

CandidateSummary summarize(CandidateFormula candidate, const std::vector<ComparisonRow>& rows, double match_tol) {
    CandidateSummary s;
    s.candidate = candidate;
    bool defined_failure = false;
    bool undefined_failure = false;
    for (const auto& row : rows) {
        if (row.candidate != candidate || (row.flags & kFlagOracleFailure) != 0) continue;
        ++s.points_compared;
        s.max_abs_dev = std::max(s.max_abs_dev, row.abs_dev);
        s.max_rel_dev = std::max(s.max_rel_dev, row.rel_dev);
        const bool within = row.abs_dev < match_tol;
        if ((row.flags & kFlagUndefinedTerm) != 0) {
            ++s.undefined_points;
            if (!within) undefined_failure = true;
        } else if (!within) {
            defined_failure = true;
        }
    }
    if (defined_failure) {
        s.verdict = Verdict::Fails;
    } else if (undefined_failure) {
        s.verdict = Verdict::UndefinedAtSomePoints;
    } else {
        s.verdict = Verdict::Matches;
    }
    return s;
}

}  // namespace

void SweepGrid::validate() const {
    if (lambdas.empty() || productions.empty() || times.empty()) throw DomainError("sweep grid lists must be non-empty");
    for (double l : lambdas) {
        if (!(l > 0.0) || !std::isfinite(l)) throw DomainError("grid lambdas must be positive and finite");
    }
    for (auto p : productions) {
        if (p < 0) throw DomainError("grid productions must be non-negative");
    }
    for (double t : times) {
        if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("grid times must be finite and non-negative");
    }
    if (!std::is_sorted(times.begin(), times.end())) throw DomainError("grid times must be sorted ascending");
}

SweepGrid SweepGrid::default_grid() {
    return {{0.5, 1.0, 2.0}, {1, 2, 3, 4, 5, 6}, {0.25, 0.5, 1.0, 2.0, 5.0, 10.0}};
}

std::string flags_to_string(unsigned flags) {
    static constexpr std::pair<unsigned, std::string_view> names[] = {
        {kFlagUndefinedTerm, "undefined-term"}, {kFlagBoundaryViolation, "boundary-violation"},
        {kFlagOracleFailure, "oracle-failure"}, {kFlagGsSkipped, "gs-skipped"},
        {kFlagNonFinite, "non-finite"},
    };
    std::string out;
    for (const auto& [bit, name] : names) {
        if ((flags & bit) == 0) continue;
        if (!out.empty()) out += ';';
        out += name;
    }
    return out;
}

std::string_view verdict_name(Verdict verdict) {
    switch (verdict) {
        case Verdict::Matches: return "Matches";
        case Verdict::Fails: return "Fails";
        case Verdict::UndefinedAtSomePoints: return "Undefined-at-some-points";
    }
    return "unknown";
}

const CandidateSummary& ComparisonReport::summary_for(CandidateFormula candidate) const {
    for (const auto& s : summary) {
        if (s.candidate == candidate) return s;
    }
    throw DomainError("candidate not present in report: " + std::string(candidate_name(candidate)));
}

ComparisonReport adjudicate(const SweepGrid& grid, std::span<const CandidateFormula> candidates, double match_tol,
                            double oracle_tol, const InversionConfig& inversion, unsigned workers) {
    grid.validate();
    inversion.validate();
    if (!(oracle_tol > 0.0)) throw DomainError("oracle_tol must be positive");
    if (!(match_tol > 10.0 * oracle_tol)) throw DomainError("match_tol must exceed 10 * oracle_tol");

    struct Point {
        double lambda;
        std::int64_t production;
        double t;
    };
    std::vector<Point> points;
    points.reserve(grid.size());
    for (double l : grid.lambdas) {
        for (auto p : grid.productions) {
            for (double t : grid.times) points.push_back({l, p, t});
        }
    }

    std::vector<PointResult> results(points.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < points.size(); i = next.fetch_add(1)) {
            const auto& pt = points[i];
            results[i] = evaluate_point(pt.lambda, pt.production, pt.t, candidates, oracle_tol, inversion);
        }
    };
    unsigned n_workers = workers != 0 ? workers : std::max(1u, std::thread::hardware_concurrency());
    n_workers = static_cast<unsigned>(std::min<std::size_t>(n_workers, points.size()));
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    }

    ComparisonReport report;
    report.match_tol = match_tol;
    report.oracle_tol = oracle_tol;
    report.rows.reserve(points.size() * candidates.size());
    for (auto& r : results) {
        if (r.oracle_failed) ++report.oracle_failures;
        if (r.gs_gap) report.max_gs_oracle_gap = std::max(report.max_gs_oracle_gap, *r.gs_gap);
        report.rows.insert(report.rows.end(), r.rows.begin(), r.rows.end());
    }
    for (const auto candidate : candidates) report.summary.push_back(summarize(candidate, report.rows, match_tol));
    return report;
}

PointwiseReport pointwise_check(const ModelParams& params, double t, double series_tol,
                                const InversionConfig& inversion) {
    inversion.validate();
    PointwiseReport r;
    r.closed_form = expected_backlog(params, t);
    const auto series = backlog_series_oracle(params, t, series_tol);
    r.series_value = series.value;
    r.series_bound = series.abs_error_bound;
    r.series_dev = std::abs(r.closed_form - r.series_value);
    if (t >= inversion.t_min) {
        r.gs_value = invert_gaver_stehfest(expected_backlog_image(params), t, inversion);
        r.gs_dev = std::abs(*r.gs_value - r.closed_form);
    }
    return r;
}

}  // namespace backlog
