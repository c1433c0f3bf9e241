#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace backlog {

using Rational = boost::multiprecision::cpp_rational;

/// A summand f(j) for the double-summation identities.
class SummandSpec {
public:
    /// f(j) = x^j / (j!)^factorial_weight.
    struct PowerSeriesTerm {
        Rational x;
        int factorial_weight = 0;
    };
    /// f(j) = values[j].
    struct ExplicitTable {
        std::vector<Rational> values;
    };

    static SummandSpec power_series(Rational x, int factorial_weight, int n);
    /// Throws DomainError if the table has fewer than n entries.
    static SummandSpec table(std::vector<Rational> values, int n);
    /// n + 1 seeded random rationals p/q with p, q in [-100, 100], q != 0.
    static SummandSpec random_table(int n, std::mt19937_64& rng);

    Rational operator()(std::int64_t j) const;
    int n() const noexcept { return n_; }

private:
    SummandSpec(std::variant<PowerSeriesTerm, ExplicitTable> kind, int n) : kind_(std::move(kind)), n_(n) {}

    std::variant<PowerSeriesTerm, ExplicitTable> kind_;
    int n_;
};

struct IdentityReport {
    Rational lhs;
    Rational rhs;
    bool equal = false;
};

/// sum_{i<n} sum_{j<=i} f(j)  vs  sum_{i<n} (n-i) f(i)
IdentityReport check_identity_A1(int n, const SummandSpec& f);
/// sum_{i<n} sum_{j<i} f(j)  vs  sum_{i<=n-2} (n-1-i) f(i)
IdentityReport check_identity_A2(int n, const SummandSpec& f);
/// sum_{i<n} i sum_{j<i} f(j)  vs  sum_{j<=n-2} [n(n-1)/2 - j(j+1)/2] f(j)
IdentityReport check_identity_A3(int n, const SummandSpec& f);

struct IndexShiftReport {
    Rational lhs;
    /// Shifted sum with the lower limit clipped to 0 when p < 0.
    Rational rhs;
    /// Shifted sum without clipping; always equals lhs.
    Rational rhs_unclipped;
    bool equal = false;
};

/// sum_{i=s}^{n} f(i) vs sum_{i=s+p}^{n+p} f(i-p), lower limit clipped at 0 for p < 0.
IndexShiftReport check_index_shift(std::int64_t s, std::int64_t n, std::int64_t p, const SummandSpec& f);

enum class IdentityFamily { A1, A2, A3, IndexShift };

struct IdentitySweepResult {
    std::int64_t cases = 0;
    std::vector<std::string> failures;

    bool passed() const { return failures.empty(); }
};

/// Every n in 1..n_max against `trials` seeded random tables. The index-shift
/// family checks s in 0..n and p in 0..3, where equality must hold.
IdentitySweepResult identity_sweep(IdentityFamily family, int n_max, int trials, std::uint64_t seed);

}  // namespace backlog
