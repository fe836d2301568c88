#pragma once
// Independent small-scale oracle for cross-checking the series pipeline.
//
// Deliberately uses a different arithmetic route: dense schoolbook
// multiplication and exact polynomial long division over int64, with no
// shared kernels.  oracle_phi builds Phi_n by the divisor recursion
//   Phi_n(x) = (x^n - 1) / prod_{d | n, d < n} Phi_d(x),
// oracle_inclusion_exclusion multiplies out the numerator of the defining
// quotient and long-divides by each denominator factor, checking every
// remainder.  Caps keep the oracle intentionally small-scale.

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "checked.hpp"
#include "errors.hpp"
#include "heights.hpp"

namespace cyclo {

inline constexpr uint64_t oracle_phi_cap = 100000;       // largest n
inline constexpr uint64_t oracle_ie_cap = 1000000;       // largest p*q*r

struct DensePoly {
    std::vector<int64_t> coeffs;  // ascending; trailing zeros trimmed; empty = 0

    int64_t degree() const { return static_cast<int64_t>(coeffs.size()) - 1; }
};

namespace oracle_detail {

inline void trim(DensePoly& p) {
    while (!p.coeffs.empty() && p.coeffs.back() == 0) p.coeffs.pop_back();
}

inline DensePoly x_pow_minus_1(uint64_t k) {
    DensePoly p;
    p.coeffs.assign(k + 1, 0);
    p.coeffs[0] = -1;
    p.coeffs[k] = 1;
    return p;
}

inline DensePoly mul(const DensePoly& a, const DensePoly& b) {
    if (a.coeffs.empty() || b.coeffs.empty()) return {};
    DensePoly out;
    out.coeffs.assign(a.coeffs.size() + b.coeffs.size() - 1, 0);
    for (size_t i = 0; i < a.coeffs.size(); ++i) {
        int64_t ai = a.coeffs[i];
        if (ai == 0) continue;
        for (size_t j = 0; j < b.coeffs.size(); ++j) {
            int64_t bj = b.coeffs[j];
            if (bj == 0) continue;
            int64_t prod = checked_mul(ai, bj, "oracle mul");
            out.coeffs[i + j] = checked_add(out.coeffs[i + j], prod, "oracle mul");
        }
    }
    oracle_detail::trim(out);
    return out;
}

// Exact division: returns q with a = q * b.  The divisor must have leading
// coefficient +-1; a nonzero remainder is an internal error (every division
// performed here is exact by construction).
inline DensePoly divide_exact(const DensePoly& a, const DensePoly& b) {
    if (b.coeffs.empty()) fail(errc::invalid_argument, "oracle divide: zero divisor");
    int64_t lead = b.coeffs.back();
    if (lead != 1 && lead != -1)
        fail(errc::invalid_argument, "oracle divide: divisor must have leading coefficient +-1");
    if (a.coeffs.empty()) return {};
    int64_t da = a.degree(), db = b.degree();
    if (da < db) fail(errc::internal, "oracle divide: dividend degree below divisor degree");

    // Sparse view of the divisor speeds up the update step.
    std::vector<std::pair<int64_t, int64_t>> bnz;  // (index, coeff)
    for (int64_t i = 0; i <= db; ++i)
        if (b.coeffs[static_cast<size_t>(i)] != 0)
            bnz.push_back({i, b.coeffs[static_cast<size_t>(i)]});

    std::vector<int64_t> rem = a.coeffs;
    DensePoly q;
    q.coeffs.assign(static_cast<size_t>(da - db + 1), 0);
    for (int64_t pos = da; pos >= db; --pos) {
        int64_t c = rem[static_cast<size_t>(pos)];
        if (c == 0) continue;
        int64_t qc = lead == 1 ? c : checked_sub(0, c, "oracle divide");
        q.coeffs[static_cast<size_t>(pos - db)] = qc;
        for (auto [i, bc] : bnz) {
            size_t at = static_cast<size_t>(pos - db + i);
            int64_t prod = checked_mul(qc, bc, "oracle divide");
            rem[at] = checked_sub(rem[at], prod, "oracle divide");
        }
    }
    for (int64_t i = 0; i < db; ++i)
        if (rem[static_cast<size_t>(i)] != 0)
            fail(errc::internal, "oracle divide: nonzero remainder at index " + std::to_string(i));
    oracle_detail::trim(q);
    return q;
}

inline std::vector<uint64_t> divisors_of(uint64_t n) {
    std::vector<uint64_t> ds;
    for (uint64_t d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            ds.push_back(d);
            if (d != n / d) ds.push_back(n / d);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

}  // namespace oracle_detail

// Phi_1 .. Phi_{n_max} in one pass (index 0 unused).  Each entry is built by
// dividing x^n - 1 by the already-known proper-divisor entries, largest
// degree first so the dividend shrinks quickly.
inline std::vector<DensePoly> oracle_phi_table(uint64_t n_max) {
    if (n_max < 1 || n_max > oracle_phi_cap)
        fail(errc::resource, "oracle_phi_table: n_max " + std::to_string(n_max) +
                                 " outside [1, " + std::to_string(oracle_phi_cap) + "]");
    std::vector<DensePoly> table(n_max + 1);
    for (uint64_t n = 1; n <= n_max; ++n) {
        DensePoly acc = oracle_detail::x_pow_minus_1(n);
        std::vector<uint64_t> divs = oracle_detail::divisors_of(n);
        std::sort(divs.begin(), divs.end(), [&](uint64_t x, uint64_t y) {
            return table[x].degree() > table[y].degree();
        });
        for (uint64_t d : divs)
            if (d != n) acc = oracle_detail::divide_exact(acc, table[d]);
        table[n] = std::move(acc);
    }
    return table;
}

inline DensePoly oracle_phi(uint64_t n) {
    if (n < 1 || n > oracle_phi_cap)
        fail(errc::resource, "oracle_phi: n " + std::to_string(n) + " outside [1, " +
                                 std::to_string(oracle_phi_cap) + "]");
    // Only the divisor closure of n is needed, computed in ascending order.
    std::vector<uint64_t> divs = oracle_detail::divisors_of(n);
    std::vector<DensePoly> known(divs.size());
    for (size_t i = 0; i < divs.size(); ++i) {
        DensePoly acc = oracle_detail::x_pow_minus_1(divs[i]);
        // Divide by known entries, largest degree first.
        std::vector<size_t> idx;
        for (size_t j = 0; j < i; ++j)
            if (divs[i] % divs[j] == 0) idx.push_back(j);
        std::sort(idx.begin(), idx.end(), [&](size_t x, size_t y) {
            return known[x].degree() > known[y].degree();
        });
        for (size_t j : idx) acc = oracle_detail::divide_exact(acc, known[j]);
        known[i] = std::move(acc);
    }
    return known.back();
}

// Q_{p,q,r} by expanding the defining quotient with dense arithmetic.
inline DensePoly oracle_inclusion_exclusion(const TernaryTriple& t) {
    // Validate the triple shape without inheriting the series budget rules.
    TernaryTriple v = TernaryTriple::make(t.p, t.q, t.r, INT64_MAX);
    uint64_t pqr = static_cast<uint64_t>(v.p) * static_cast<uint64_t>(v.q) *
                   static_cast<uint64_t>(v.r);
    if (pqr > oracle_ie_cap)
        fail(errc::resource, "oracle_inclusion_exclusion: p*q*r " + std::to_string(pqr) +
                                 " exceeds cap " + std::to_string(oracle_ie_cap));
    using oracle_detail::divide_exact;
    using oracle_detail::mul;
    using oracle_detail::x_pow_minus_1;
    DensePoly num = x_pow_minus_1(pqr);
    num = mul(num, x_pow_minus_1(static_cast<uint64_t>(v.p)));
    num = mul(num, x_pow_minus_1(static_cast<uint64_t>(v.q)));
    num = mul(num, x_pow_minus_1(static_cast<uint64_t>(v.r)));
    // Division order chosen so every intermediate quotient is a polynomial
    // (each step removes a full factor's worth of roots); the remainder
    // check inside divide_exact enforces this.
    num = divide_exact(num, x_pow_minus_1(static_cast<uint64_t>(v.p) * v.q));
    num = divide_exact(num, x_pow_minus_1(static_cast<uint64_t>(v.q) * v.r));
    num = divide_exact(num, x_pow_minus_1(static_cast<uint64_t>(v.r) * v.p));
    num = divide_exact(num, x_pow_minus_1(1));
    if (num.degree() != v.degree())
        fail(errc::internal, "oracle_inclusion_exclusion: degree mismatch");
    return num;
}

inline uint64_t poly_height(const DensePoly& p) {
    uint64_t best = 0;
    for (int64_t c : p.coeffs) best = std::max(best, abs_u64(c));
    return best;
}

}  // namespace cyclo
