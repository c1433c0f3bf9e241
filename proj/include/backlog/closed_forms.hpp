#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "backlog/distributions.hpp"

namespace backlog {

/// Competing closed forms for the cumulative expected backlog
/// int_0^t E[B(u)] du. Each is evaluated exactly as published, typos included.
enum class CandidateFormula {
    OriginalAsPrinted,  ///< original two-reference formula, with its e^{+lambda t} factor
    OriginalNegExp,     ///< same expression with e^{-lambda t}
    WolframAlpha,       ///< computer-algebra expansion
    ThisNote,           ///< final closed form of the verification note
    AppendixC_Eq10,     ///< last intermediate form of the long derivation
    CompactIntegral,    ///< term-wise integral of the pointwise closed form
};

inline constexpr std::array<CandidateFormula, 6> kAllCandidates = {
    CandidateFormula::OriginalAsPrinted, CandidateFormula::OriginalNegExp, CandidateFormula::WolframAlpha,
    CandidateFormula::ThisNote,          CandidateFormula::AppendixC_Eq10, CandidateFormula::CompactIntegral,
};

/// Command-line spelling: original, original-negexp, wolfram, note, eq10, compact.
std::string_view candidate_name(CandidateFormula candidate);
std::optional<CandidateFormula> parse_candidate(std::string_view name);

/// A candidate's value at one time point. `undefined_term` is set when the
/// expression contains a factorial of a negative integer; that term is taken as 0.
struct BacklogValue {
    double value = 0.0;
    double t = 0.0;
    bool undefined_term = false;
};

/// E[(D - P)^+] for D ~ Poisson(lambda t), via the finite closed form.
double expected_backlog(const ModelParams& params, double t);

/// lambda t - P, the exponential-free part of expected_backlog.
double expected_backlog_asymptote(const ModelParams& params, double t);

BacklogValue cumulative_expected_backlog(const ModelParams& params, double t, CandidateFormula candidate);

}  // namespace backlog
