#include <doctest.h>

#include <cmath>
#include <vector>

#include "backlog/closed_forms.hpp"
#include "backlog/errors.hpp"
#include "backlog/oracles.hpp"
#include "reference_values.hpp"

using namespace backlog;
namespace ref = backlog::reference;

namespace {

const std::vector<double> kLambdas{0.5, 1.0, 2.0, 5.0};
const std::vector<double> kTimes{0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0};

}  // namespace

TEST_CASE("candidate names round trip") {
    for (auto c : kAllCandidates) {
        const auto parsed = parse_candidate(candidate_name(c));
        REQUIRE(parsed);
        CHECK(*parsed == c);
    }
    CHECK_FALSE(parse_candidate("bogus"));
}

TEST_CASE("expected_backlog examples") {
    for (double lambda : kLambdas) {
        for (double t : kTimes) CHECK(expected_backlog(ModelParams(lambda, 0), t) == lambda * t);
    }
    CHECK(std::abs(expected_backlog(ModelParams(1.0, 1), 1.0) - std::exp(-1.0)) < 1e-15);
    CHECK(std::abs(expected_backlog(ModelParams(2.0, 3), 1.5) - ref::kBacklog_2_3_1p5) < 1e-14);
    CHECK(std::abs(expected_backlog(ModelParams(2.0, 5), 0.1) - ref::kBacklog_2_5_0p1) < 1e-15);
    CHECK(expected_backlog(ModelParams(2.0, 5), 0.1) > 0.0);
    CHECK_THROWS_AS(expected_backlog(ModelParams(1.0, 1), -1.0), DomainError);
}

TEST_CASE("expected_backlog_asymptote examples") {
    CHECK(expected_backlog_asymptote(ModelParams(1.0, 0), 5.0) == 5.0);
    CHECK(expected_backlog_asymptote(ModelParams(2.0, 3), 10.0) == 17.0);
    const ModelParams p(1.0, 3);
    CHECK(std::abs(expected_backlog(p, 40.0) - expected_backlog_asymptote(p, 40.0)) < 1e-10);
    CHECK(ref::kBacklogMinusAsymptote_1_3_40 < 1e-10);
}

TEST_CASE("expected_backlog bounds and monotonicity") {
    for (double lambda : kLambdas) {
        for (std::int64_t P = 0; P <= 10; ++P) {
            const ModelParams params(lambda, P);
            double prev = 0.0;
            for (int k = 0; k <= 50; ++k) {
                const double t = 0.4 * k;
                const double v = expected_backlog(params, t);
                CAPTURE(lambda);
                CAPTURE(P);
                CAPTURE(t);
                CHECK(v >= std::max(0.0, lambda * t - static_cast<double>(P)));
                CHECK(v <= lambda * t);
                CHECK(v >= prev - 1e-14);
                if (P > 0) CHECK(v <= expected_backlog(ModelParams(lambda, P - 1), t) + 1e-14);
                prev = v;
            }
        }
    }
}

TEST_CASE("expected_backlog matches the series oracle on the grid") {
    for (double lambda : kLambdas) {
        for (std::int64_t P = 0; P <= 10; ++P) {
            for (double t : kTimes) {
                const ModelParams params(lambda, P);
                CAPTURE(lambda);
                CAPTURE(P);
                CAPTURE(t);
                CHECK(std::abs(expected_backlog(params, t) - backlog_series_oracle(params, t, 1e-12).value) < 1e-10);
            }
        }
    }
}

TEST_CASE("cumulative candidates collapse to lambda t^2 / 2 when P = 0") {
    for (auto c : kAllCandidates) {
        for (double lambda : {0.5, 2.0}) {
            for (double t : {0.0, 0.7, 3.0}) {
                const auto v = cumulative_expected_backlog(ModelParams(lambda, 0), t, c);
                CAPTURE(candidate_name(c));
                CHECK(std::abs(v.value - 0.5 * lambda * t * t) <= 1e-12 * std::max(1.0, lambda * t * t));
            }
        }
    }
}

TEST_CASE("cumulative examples") {
    const ModelParams p11(1.0, 1);
    const auto compact = cumulative_expected_backlog(p11, 1.0, CandidateFormula::CompactIntegral);
    CHECK(std::abs(compact.value - ref::kCumulative_1_1_1) < 1e-15);
    CHECK(std::abs(compact.value - (0.5 - 1.0 + 1.0 - std::exp(-1.0))) < 1e-15);
    CHECK_FALSE(compact.undefined_term);
    CHECK(compact.t == 1.0);

    CHECK(std::abs(cumulative_expected_backlog(p11, 0.0, CandidateFormula::OriginalNegExp).value) < 1e-15);

    const auto note = cumulative_expected_backlog(p11, 0.0, CandidateFormula::ThisNote);
    CHECK(note.undefined_term);
    CHECK(std::abs(note.value - (-2.0)) < 1e-12);

    CHECK(std::abs(cumulative_expected_backlog(ModelParams(2.0, 3), 1.5, CandidateFormula::CompactIntegral).value -
                   ref::kCumulative_2_3_1p5) < 1e-14);
    CHECK(std::abs(cumulative_expected_backlog(ModelParams(0.5, 6), 10.0, CandidateFormula::CompactIntegral).value -
                   ref::kCumulative_0p5_6_10) < 1e-13);
    CHECK(std::abs(cumulative_expected_backlog(ModelParams(1.0, 10), 0.1, CandidateFormula::CompactIntegral).value -
                   ref::kCumulative_1_10_0p1) < 1e-13);
}

TEST_CASE("undefined-term flag marks only factorials of negative integers") {
    for (std::int64_t P = 0; P <= 4; ++P) {
        const ModelParams params(1.0, P);
        const bool note_flag = cumulative_expected_backlog(params, 1.0, CandidateFormula::ThisNote).undefined_term;
        // (P-2)! is a factorial of a negative integer for P = 0 and P = 1.
        CHECK(note_flag == (P < 2));
        CHECK_FALSE(cumulative_expected_backlog(params, 1.0, CandidateFormula::CompactIntegral).undefined_term);
        CHECK_FALSE(cumulative_expected_backlog(params, 1.0, CandidateFormula::OriginalNegExp).undefined_term);
    }
}

TEST_CASE("compact boundary value is zero") {
    for (double lambda : kLambdas) {
        for (std::int64_t P = 0; P <= 10; ++P) {
            CHECK(std::abs(cumulative_expected_backlog(ModelParams(lambda, P), 0.0, CandidateFormula::CompactIntegral)
                               .value) < 1e-12);
        }
    }
}

TEST_CASE("compact equals the sign-corrected original on the full grid") {
    for (double lambda : kLambdas) {
        for (std::int64_t P = 0; P <= 10; ++P) {
            for (double t : kTimes) {
                const ModelParams params(lambda, P);
                const double a = cumulative_expected_backlog(params, t, CandidateFormula::CompactIntegral).value;
                const double b = cumulative_expected_backlog(params, t, CandidateFormula::OriginalNegExp).value;
                CAPTURE(lambda);
                CAPTURE(P);
                CAPTURE(t);
                CHECK(std::abs(a - b) < 1e-9);
            }
        }
    }
}

TEST_CASE("finite differences of matching candidates reproduce expected_backlog") {
    const double h = 1e-4;
    for (double lambda : {0.5, 1.0, 2.0}) {
        for (std::int64_t P = 1; P <= 6; ++P) {
            const ModelParams params(lambda, P);
            for (double t : {0.5, 1.0, 2.0, 5.0}) {
                const double oracle = cumulative_quadrature_oracle(params, t, 1e-10).value;
                for (auto c : kAllCandidates) {
                    if (std::abs(cumulative_expected_backlog(params, t, c).value - oracle) >= 1e-7) continue;
                    const double d = (cumulative_expected_backlog(params, t + h, c).value -
                                      cumulative_expected_backlog(params, t - h, c).value) /
                                     (2.0 * h);
                    CAPTURE(candidate_name(c));
                    CHECK(std::abs(d - expected_backlog(params, t)) < 1e-5);
                }
            }
        }
    }
}

TEST_CASE("original as printed diverges with t") {
    const ModelParams params(1.0, 3);
    const double v = cumulative_expected_backlog(params, 10.0, CandidateFormula::OriginalAsPrinted).value;
    CHECK(std::abs(v - cumulative_expected_backlog(params, 10.0, CandidateFormula::CompactIntegral).value) > 1.0);
}

TEST_CASE("large production stays finite") {
    const ModelParams params(3.0, 200000);
    for (auto c : {CandidateFormula::CompactIntegral, CandidateFormula::OriginalNegExp}) {
        CHECK(std::isfinite(cumulative_expected_backlog(params, 1000.0, c).value));
    }
    CHECK(std::isfinite(expected_backlog(params, 1000.0)));
}
