#pragma once
// Coefficients and heights of cyclotomic polynomials Phi_n and of ternary
// inclusion-exclusion polynomials Q_{p,q,r}.
//
// Phi_n for n with radical m:  Phi_n(x) = Phi_m(x^{n/m}), and
//   Phi_m(x) = prod_{d | m} (1 - x^d)^{mu(m/d)}
// evaluated as a truncated series of exact length phi(m) + 1 (the truncated
// quotient of a polynomial identity *is* the polynomial).  Using (1 - x^d)
// factors leaves the sign unchanged: mu-weighted exponent sums cancel for
// m > 1 (equally many factors up and down).
//
// Q_{p,q,r} for pairwise coprime p, q, r > 2:
//   Q(x) = (x^{pqr}-1)(x^p-1)(x^q-1)(x^r-1) / ((x^{pq}-1)(x^{qr}-1)(x^{rp}-1)(x-1))
// of degree (p-1)(q-1)(r-1).  For prime p,q,r this is Phi_{pqr}.
//
// Both pipelines interleave the factors canonically -- ascending divide and
// multiply exponents, alternating div/mul -- which keeps intermediate
// coefficient magnitudes of order p*q (far below the checked 2^63 wall for
// every size the coefficient budget admits).

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

#include "checked.hpp"
#include "errors.hpp"
#include "primes.hpp"
#include "series.hpp"

namespace cyclo {

// Largest coefficient buffer (series length) any single computation may
// allocate.  Overridable per call; the CLI also reads CYCLO_COEFF_BUDGET.
inline constexpr int64_t default_coeff_budget = 20000000;

struct TernaryTriple {
    int64_t p = 0, q = 0, r = 0;

    // Validates: each component > 2, pairwise coprime, and the degree
    // (p-1)(q-1)(r-1) must fit the coefficient budget.
    static TernaryTriple make(int64_t p, int64_t q, int64_t r,
                              int64_t coeff_budget = default_coeff_budget) {
        if (p <= 2 || q <= 2 || r <= 2)
            fail(errc::invalid_argument, "ternary triple: components must each be > 2");
        if (std::gcd(p, q) != 1 || std::gcd(q, r) != 1 || std::gcd(p, r) != 1)
            fail(errc::invalid_argument,
                 "ternary triple (" + std::to_string(p) + "," + std::to_string(q) + "," +
                     std::to_string(r) + "): components must be pairwise coprime");
        TernaryTriple t{p, q, r};
        int64_t len = checked_add(t.degree(), 1, "triple degree");
        if (len > coeff_budget)
            fail(errc::resource, "ternary triple (" + std::to_string(p) + "," +
                                     std::to_string(q) + "," + std::to_string(r) +
                                     "): series length " + std::to_string(len) +
                                     " exceeds coefficient budget " +
                                     std::to_string(coeff_budget));
        return t;
    }

    int64_t degree() const {
        int64_t d = checked_mul(p - 1, q - 1, "triple degree");
        return checked_mul(d, r - 1, "triple degree");
    }
};

// Subject of a height computation: an index n, or a (p,q,s) parameter triple
// (s may be the conventional 1 or 2).
using HeightSubject = std::variant<uint64_t, std::array<int64_t, 3>>;

struct HeightRecord {
    HeightSubject subject;
    uint64_t height = 0;
    int64_t degree = 0;
    int64_t extremal_index = 0;  // smallest index attaining the height
};

namespace detail {

// Shared evaluator: prod (1 - x^e), e in mul_exps, divided by the same over
// div_exps, truncated to len.  Canonical order: both lists ascending, then
// alternate div(0), mul(0), div(1), mul(1), ...; leftovers appended in order.
inline CoeffSeries binomial_quotient(std::vector<int64_t> mul_exps,
                                     std::vector<int64_t> div_exps, int64_t len) {
    std::sort(mul_exps.begin(), mul_exps.end());
    std::sort(div_exps.begin(), div_exps.end());
    CoeffSeries s = one(len);
    size_t i = 0, j = 0;
    while (i < div_exps.size() || j < mul_exps.size()) {
        if (i < div_exps.size()) div_binomial_inplace(s, div_exps[i++]);
        if (j < mul_exps.size()) mul_binomial_inplace(s, mul_exps[j++]);
    }
    return s;
}

inline void check_budget(int64_t len, int64_t coeff_budget, const std::string& what) {
    if (len > coeff_budget)
        fail(errc::resource, what + ": series length " + std::to_string(len) +
                                 " exceeds coefficient budget " + std::to_string(coeff_budget));
}

}  // namespace detail

// Coefficient vector of Phi_n, ascending, exact length phi(n) + 1.
inline CoeffSeries phi_coeffs(uint64_t n, int64_t coeff_budget = default_coeff_budget) {
    if (n == 0) fail(errc::invalid_argument, "phi_coeffs: n must be >= 1");
    if (n == 1) {
        CoeffSeries s;
        s.coeffs = {-1, 1};
        return s;
    }
    auto factors = factorize(n);
    uint64_t rad = 1, phi_rad = 1;
    for (auto [p, e] : factors) {
        rad = checked_mul_u(rad, p, "phi_coeffs radical");
        phi_rad = checked_mul_u(phi_rad, p - 1, "phi_coeffs totient");
    }
    uint64_t stretch = n / rad;
    int64_t core_len = checked_add(static_cast<int64_t>(phi_rad), 1, "phi_coeffs length");
    int64_t final_len = checked_add(
        checked_mul(static_cast<int64_t>(phi_rad), static_cast<int64_t>(stretch), "phi_coeffs length"),
        1, "phi_coeffs length");
    detail::check_budget(final_len, coeff_budget, "phi_coeffs(" + std::to_string(n) + ")");

    // Divisors d of rad split by the parity of the omitted prime count:
    // mu(rad/d) = +1 -> multiply by (1 - x^d), mu(rad/d) = -1 -> divide.
    const size_t k = factors.size();
    std::vector<int64_t> mul_exps, div_exps;
    for (size_t mask = 0; mask < (size_t(1) << k); ++mask) {
        int64_t d = 1;
        size_t omitted = k;
        for (size_t b = 0; b < k; ++b) {
            if (mask >> b & 1) {
                d = checked_mul(d, static_cast<int64_t>(factors[b].first), "phi_coeffs divisor");
                --omitted;
            }
        }
        (omitted % 2 == 0 ? mul_exps : div_exps).push_back(d);
    }
    CoeffSeries core = detail::binomial_quotient(mul_exps, div_exps, core_len);
    if (core.coeffs.front() != 1 || core.coeffs.back() != 1)
        fail(errc::internal, "phi_coeffs(" + std::to_string(n) + "): boundary coefficients != 1");
    if (stretch == 1) return core;

    CoeffSeries out;
    out.coeffs.assign(static_cast<size_t>(final_len), 0);
    for (int64_t m = 0; m < core_len; ++m)
        out.coeffs[static_cast<size_t>(m * static_cast<int64_t>(stretch))] =
            core.coeffs[static_cast<size_t>(m)];
    return out;
}

// Coefficient vector of Q_{p,q,r}, ascending, exact length degree + 1.
inline CoeffSeries inclusion_exclusion_coeffs(const TernaryTriple& t,
                                              int64_t coeff_budget = default_coeff_budget) {
    TernaryTriple v = TernaryTriple::make(t.p, t.q, t.r, coeff_budget);
    int64_t len = v.degree() + 1;
    int64_t pq = checked_mul(v.p, v.q, "inclusion_exclusion exponent");
    int64_t qr = checked_mul(v.q, v.r, "inclusion_exclusion exponent");
    int64_t rp = checked_mul(v.r, v.p, "inclusion_exclusion exponent");
    int64_t pqr = checked_mul(pq, v.r, "inclusion_exclusion exponent");
    CoeffSeries s = detail::binomial_quotient({v.p, v.q, v.r, pqr}, {1, pq, qr, rp}, len);
    if (s.coeffs.front() != 1 || s.coeffs.back() != 1)
        fail(errc::internal, "inclusion_exclusion_coeffs: boundary coefficients != 1");
    return s;
}

inline HeightRecord height(uint64_t n, int64_t coeff_budget = default_coeff_budget) {
    CoeffSeries s = phi_coeffs(n, coeff_budget);
    MaxAbs m = max_abs(s);
    return HeightRecord{HeightSubject{n}, m.value, s.truncation_len() - 1, m.index};
}

inline HeightRecord height(const TernaryTriple& t, int64_t coeff_budget = default_coeff_budget) {
    CoeffSeries s = inclusion_exclusion_coeffs(t, coeff_budget);
    MaxAbs m = max_abs(s);
    return HeightRecord{HeightSubject{std::array<int64_t, 3>{t.p, t.q, t.r}}, m.value,
                        s.truncation_len() - 1, m.index};
}

// Height of the (p,q,s) family including the conventional degenerate slots:
// A(p,q,1) = 0 and A(p,q,2) = 1 by convention; s > 2 is the genuine triple.
inline HeightRecord height_ternary(int64_t p, int64_t q, int64_t s,
                                   int64_t coeff_budget = default_coeff_budget) {
    if (s < 1) fail(errc::invalid_argument, "height_ternary: s must be >= 1");
    if (s <= 2) {
        if (p <= 2 || q <= 2 || std::gcd(p, q) != 1)
            fail(errc::invalid_argument, "height_ternary: p, q must be coprime and > 2");
        if (s == 2 && (p % 2 == 0 || q % 2 == 0))
            fail(errc::invalid_argument, "height_ternary: s = 2 needs odd p, q");
        HeightRecord rec;
        rec.subject = std::array<int64_t, 3>{p, q, s};
        if (s == 1) {
            rec.height = 0;  // Q_{p,q,1} = 1
            rec.degree = 0;
            rec.extremal_index = 0;
        } else {
            rec.height = 1;  // Q_{p,q,2} has all coefficients in {-1,0,1}
            rec.degree = checked_mul(p - 1, q - 1, "height_ternary degree");
            rec.extremal_index = 0;
        }
        return rec;
    }
    return height(TernaryTriple::make(p, q, s, coeff_budget), coeff_budget);
}

// A(n) depends only on the odd squarefree kernel: for n with radical m,
// A(n) = A(m), and A(2m) = A(m) for odd m.  core(n) strips both reductions.
struct CoreReduction {
    uint64_t n = 0;
    uint64_t core = 0;
    HeightRecord height_n;
    HeightRecord height_core;
    bool same_height = false;
};

inline CoreReduction reduce_to_core(uint64_t n, int64_t coeff_budget = default_coeff_budget) {
    if (n < 3) fail(errc::invalid_argument, "reduce_to_core: n must be >= 3");
    uint64_t rad = radical(n);
    uint64_t core = rad % 2 == 0 ? rad / 2 : rad;
    if (core == 1) core = 2;  // n a power of two
    CoreReduction out;
    out.n = n;
    out.core = core;
    out.height_n = height(n, coeff_budget);
    out.height_core = height(core, coeff_budget);
    out.same_height = out.height_n.height == out.height_core.height;
    return out;
}

}  // namespace cyclo
