#include "backlog/closed_forms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "backlog/errors.hpp"

namespace backlog {

namespace {

constexpr std::int64_t kExactCoefficientLimit = 1'000'003;

// a * b, exact in 64-bit integers while both factors stay within the limit.
double coefficient(std::int64_t a, std::int64_t b) {
    if (std::abs(a) <= kExactCoefficientLimit && std::abs(b) <= kExactCoefficientLimit) {
        return static_cast<double>(a * b);
    }
    return static_cast<double>(a) * static_cast<double>(b);
}

void check_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("time must be finite and non-negative");
}

// Regularized terms p_0 .. p_{P+3}; every candidate bracket fits inside this range.
class Terms {
public:
    Terms(double lambda_t, std::int64_t production) : terms_(poisson_terms(lambda_t, production + 4)) {}

    double operator[](std::int64_t i) const { return i < 0 ? 0.0 : terms_[static_cast<std::size_t>(i)]; }

private:
    std::vector<double> terms_;
};

// e^{-x} times the bracket shared by the original formula and the note:
//   P(P+1) sum_{j<=P-1} x^j/j! - 2P sum_{j<=P-2} x^{j+1}/j! + sum_{j<=P-3} x^{j+2}/j!
// using e^{-x} x^{j+1}/j! = (j+1) p_{j+1} and e^{-x} x^{j+2}/j! = (j+1)(j+2) p_{j+2}.
double original_bracket(const Terms& p, std::int64_t P) {
    double sum = 0.0;
    const double pp1 = coefficient(P, P + 1);
    for (std::int64_t j = 0; j <= P - 1; ++j) sum += pp1 * p[j];
    for (std::int64_t j = 0; j <= P - 2; ++j) sum -= coefficient(2 * P, j + 1) * p[j + 1];
    for (std::int64_t j = 0; j <= P - 3; ++j) sum += coefficient(j + 1, j + 2) * p[j + 2];
    return sum;
}

// Same bracket without the e^{-x} factor, as x^j/j! powers (may overflow to inf).
double original_bracket_raw(double x, std::int64_t P) {
    auto power_over_factorial = [x](std::int64_t k) {
        if (k == 0) return 1.0;
        if (x == 0.0) return 0.0;
        return std::exp(static_cast<double>(k) * std::log(x) - log_factorial(k));
    };
    double sum = 0.0;
    const double pp1 = coefficient(P, P + 1);
    for (std::int64_t j = 0; j <= P - 1; ++j) sum += pp1 * power_over_factorial(j);
    for (std::int64_t j = 0; j <= P - 2; ++j) sum -= coefficient(2 * P, j + 1) * power_over_factorial(j + 1);
    for (std::int64_t j = 0; j <= P - 3; ++j) sum += coefficient(j + 1, j + 2) * power_over_factorial(j + 2);
    return sum;
}

double wolfram_bracket(const Terms& p, std::int64_t P) {
    double sum = 0.0;
    const double pp1 = coefficient(P, P + 1);
    for (std::int64_t i = 0; i <= P + 1; ++i) {
        sum += pp1 * p[i];
        sum -= coefficient(2 * P, i + 1) * p[i + 1];
        sum += coefficient(i + 1, i + 2) * p[i + 2];
    }
    // [(P-1) x^{P+2} - x^{P+3}] e^{-x} / (P+1)!
    sum += coefficient(P - 1, P + 2) * p[P + 2];
    sum -= coefficient(P + 2, P + 3) * p[P + 3];
    return sum;
}

double eq10_bracket(const Terms& p, std::int64_t P) {
    double sum = 0.0;
    const double pp1 = coefficient(P, P + 1);
    for (std::int64_t i = 0; i <= P - 2; ++i) sum += pp1 * p[i];
    for (std::int64_t i = 0; i <= P - 3; ++i) sum -= coefficient(2 * P, i + 1) * p[i + 1];
    for (std::int64_t i = 0; i <= P - 4; ++i) sum += coefficient(i + 1, i + 2) * p[i + 2];
    // 2 x^{P-1}/(P-1)!; undefined for P = 0
    if (P >= 1) sum += 2.0 * p[P - 1];
    return sum;
}

double compact_bracket(const Terms& p, std::int64_t P) {
    double sum = 0.0;
    for (std::int64_t j = 0; j <= P - 1; ++j) sum += coefficient(P - j, P - j + 1) * p[j];
    return sum;
}

}  // namespace

std::string_view candidate_name(CandidateFormula candidate) {
    switch (candidate) {
        case CandidateFormula::OriginalAsPrinted: return "original";
        case CandidateFormula::OriginalNegExp: return "original-negexp";
        case CandidateFormula::WolframAlpha: return "wolfram";
        case CandidateFormula::ThisNote: return "note";
        case CandidateFormula::AppendixC_Eq10: return "eq10";
        case CandidateFormula::CompactIntegral: return "compact";
    }
    return "unknown";
}

std::optional<CandidateFormula> parse_candidate(std::string_view name) {
    for (auto c : kAllCandidates) {
        if (candidate_name(c) == name) return c;
    }
    return std::nullopt;
}

double expected_backlog(const ModelParams& params, double t) {
    check_time(t);
    const double x = params.lambda() * t;
    const std::int64_t P = params.production();
    if (P == 0) return x;

    const auto p = poisson_terms(x, P);
    double correction = 0.0;
    for (std::int64_t i = 0; i < P; ++i) {
        correction += static_cast<double>(P - i) * p[static_cast<std::size_t>(i)];
    }
    const double value = x - static_cast<double>(P) + correction;
    return std::clamp(value, std::max(0.0, x - static_cast<double>(P)), x);
}

double expected_backlog_asymptote(const ModelParams& params, double t) {
    check_time(t);
    return params.lambda() * t - static_cast<double>(params.production());
}

BacklogValue cumulative_expected_backlog(const ModelParams& params, double t, CandidateFormula candidate) {
    check_time(t);
    const double lambda = params.lambda();
    const std::int64_t P = params.production();
    const double x = lambda * t;
    const double Pd = static_cast<double>(P);
    const double half_pp1 = 0.5 * coefficient(P, P + 1) / lambda;
    const double quadratic = 0.5 * lambda * t * t - Pd * t;

    BacklogValue out;
    out.t = t;
    if (candidate == CandidateFormula::OriginalAsPrinted) {
        out.value = quadratic + half_pp1 - std::exp(x) * original_bracket_raw(x, P) / (2.0 * lambda);
        return out;
    }

    const Terms p(x, P);
    switch (candidate) {
        case CandidateFormula::OriginalNegExp:
            out.value = quadratic + half_pp1 - original_bracket(p, P) / (2.0 * lambda);
            break;
        case CandidateFormula::WolframAlpha:
            out.value = quadratic - half_pp1 - wolfram_bracket(p, P) / (2.0 * lambda);
            break;
        case CandidateFormula::ThisNote: {
            double bracket = original_bracket(p, P);
            // -4P x^{P-1}/(P-2)! = -4P (P-1) p_{P-1} e^{x}
            if (P >= 2) {
                bracket -= coefficient(4 * P, P - 1) * p[P - 1];
            } else {
                out.undefined_term = true;
            }
            out.value = quadratic - half_pp1 - bracket / (2.0 * lambda);
            break;
        }
        case CandidateFormula::AppendixC_Eq10:
            out.undefined_term = P < 1;
            out.value = quadratic - half_pp1 - eq10_bracket(p, P) / (2.0 * lambda);
            break;
        case CandidateFormula::CompactIntegral:
            out.value = quadratic + half_pp1 - compact_bracket(p, P) / (2.0 * lambda);
            break;
        case CandidateFormula::OriginalAsPrinted:
            break;
    }
    return out;
}

}  // namespace backlog
