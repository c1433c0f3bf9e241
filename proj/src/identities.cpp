#include "backlog/identities.hpp"

#include <algorithm>

#include "backlog/errors.hpp"

namespace backlog {

namespace {

constexpr int kMaxN = 50;

void check_n(int n) {
    if (n < 1 || n > kMaxN) throw DomainError("identity parameter n must be within [1, 50]");
}

Rational rational_pow(const Rational& x, std::int64_t k) {
    Rational r = 1;
    for (std::int64_t i = 0; i < k; ++i) r *= x;
    return r;
}

boost::multiprecision::cpp_int factorial(std::int64_t k) {
    boost::multiprecision::cpp_int r = 1;
    for (std::int64_t i = 2; i <= k; ++i) r *= i;
    return r;
}

}  // namespace

SummandSpec SummandSpec::power_series(Rational x, int factorial_weight, int n) {
    if (factorial_weight < 0) throw DomainError("factorial weight must be non-negative");
    return SummandSpec(PowerSeriesTerm{std::move(x), factorial_weight}, n);
}

SummandSpec SummandSpec::table(std::vector<Rational> values, int n) {
    if (static_cast<int>(values.size()) < n) throw DomainError("summand table shorter than n");
    return SummandSpec(ExplicitTable{std::move(values)}, n);
}

SummandSpec SummandSpec::random_table(int n, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-100, 100);
    std::uniform_int_distribution<int> den(-100, 99);
    std::vector<Rational> values;
    values.reserve(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
        int p = num(rng);
        int q = den(rng);
        if (q >= 0) ++q;  // skip zero, keep [-100, 100]
        if (q < 0) {
            // cpp_rational rejects negative denominators
            p = -p;
            q = -q;
        }
        values.emplace_back(p, q);
    }
    return table(std::move(values), n);
}

Rational SummandSpec::operator()(std::int64_t j) const {
    if (j < 0) throw DomainError("summand index must be non-negative");
    if (const auto* ps = std::get_if<PowerSeriesTerm>(&kind_)) {
        Rational denom = 1;
        const Rational fact(factorial(j));
        for (int w = 0; w < ps->factorial_weight; ++w) denom *= fact;
        return rational_pow(ps->x, j) / denom;
    }
    const auto& values = std::get<ExplicitTable>(kind_).values;
    if (j >= static_cast<std::int64_t>(values.size())) throw DomainError("summand index beyond table");
    return values[static_cast<std::size_t>(j)];
}

IdentityReport check_identity_A1(int n, const SummandSpec& f) {
    check_n(n);
    IdentityReport r;
    for (int i = 0; i <= n - 1; ++i) {
        for (int j = 0; j <= i; ++j) r.lhs += f(j);
        r.rhs += Rational(n - i) * f(i);
    }
    r.equal = r.lhs == r.rhs;
    return r;
}

IdentityReport check_identity_A2(int n, const SummandSpec& f) {
    check_n(n);
    IdentityReport r;
    for (int i = 0; i <= n - 1; ++i) {
        for (int j = 0; j <= i - 1; ++j) r.lhs += f(j);
    }
    for (int i = 0; i <= n - 2; ++i) r.rhs += Rational(n - 1 - i) * f(i);
    r.equal = r.lhs == r.rhs;
    return r;
}

IdentityReport check_identity_A3(int n, const SummandSpec& f) {
    check_n(n);
    IdentityReport r;
    for (int i = 0; i <= n - 1; ++i) {
        Rational inner = 0;
        for (int j = 0; j <= i - 1; ++j) inner += f(j);
        r.lhs += Rational(i) * inner;
    }
    for (int j = 0; j <= n - 2; ++j) {
        const Rational weight = Rational(n * (n - 1), 2) - Rational(j * (j + 1), 2);
        r.rhs += weight * f(j);
    }
    r.equal = r.lhs == r.rhs;
    return r;
}

IndexShiftReport check_index_shift(std::int64_t s, std::int64_t n, std::int64_t p, const SummandSpec& f) {
    if (s < 0 || n < s) throw DomainError("index shift requires 0 <= s <= n");
    IndexShiftReport r;
    for (std::int64_t i = s; i <= n; ++i) r.lhs += f(i);
    for (std::int64_t i = s + p; i <= n + p; ++i) r.rhs_unclipped += f(i - p);
    const std::int64_t lower = p < 0 ? std::max<std::int64_t>(s + p, 0) : s + p;
    for (std::int64_t i = lower; i <= n + p; ++i) r.rhs += f(i - p);
    r.equal = r.lhs == r.rhs;
    return r;
}

IdentitySweepResult identity_sweep(IdentityFamily family, int n_max, int trials, std::uint64_t seed) {
    check_n(n_max);
    if (trials < 1) throw DomainError("identity sweep needs at least one trial");
    std::mt19937_64 rng(seed);
    IdentitySweepResult out;

    auto record = [&](bool ok, const std::string& what) {
        ++out.cases;
        if (!ok) out.failures.push_back(what);
    };

    for (int n = 1; n <= n_max; ++n) {
        for (int trial = 0; trial < trials; ++trial) {
            const auto f = SummandSpec::random_table(n, rng);
            const std::string tag = "n=" + std::to_string(n) + " trial=" + std::to_string(trial);
            switch (family) {
                case IdentityFamily::A1: record(check_identity_A1(n, f).equal, "A1 " + tag); break;
                case IdentityFamily::A2: record(check_identity_A2(n, f).equal, "A2 " + tag); break;
                case IdentityFamily::A3: record(check_identity_A3(n, f).equal, "A3 " + tag); break;
                case IdentityFamily::IndexShift:
                    for (std::int64_t s = 0; s <= n; ++s) {
                        for (std::int64_t p = 0; p <= 3; ++p) {
                            record(check_index_shift(s, n, p, f).equal,
                                   "shift s=" + std::to_string(s) + " p=" + std::to_string(p) + " " + tag);
                        }
                    }
                    break;
            }
        }
    }
    return out;
}

}  // namespace backlog
