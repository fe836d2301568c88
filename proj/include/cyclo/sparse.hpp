#pragma once
// A sparse set P of primes whose counting function stays below log x while
// still containing enough structure to drive the height-witness machinery:
//
//   q-family: q_1 = 5; q_n = smallest prime = 2 (mod 1*3*5***(2n+1))
//             above q_{n-1}.
//   r-family: r_1 = 5; r_n = smallest prime = (m+1)/2 (mod m) above
//             max(m, r_{n-1}), m = 1*3*5***(2n+1).
//   p-family (per a >= 1): pi_k = smallest odd prime > a^a; p_n(a) =
//             smallest prime = a (mod pi_k***pi_{k+n-1}) above p_{n-1}(a)^3
//             (above pi_k^3 for n = 1).
//
// The doubly-exponential growth makes 64-bit saturation a designed outcome:
// a p-family ends the moment a cube or modulus product leaves uint64 range,
// and count_P can certify from the growth rules that no omitted element
// could have landed below a given x.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "checked.hpp"
#include "errors.hpp"
#include "primes.hpp"

namespace cyclo {

// Sparse generation scans as far as 64-bit candidates allow by default.
inline constexpr uint64_t sparse_ap_cap = UINT64_MAX;

enum class SparseFamily { q_seq, r_seq, p_seq };

inline const char* family_name(SparseFamily f) {
    switch (f) {
        case SparseFamily::q_seq: return "q";
        case SparseFamily::r_seq: return "r";
        case SparseFamily::p_seq: return "p";
    }
    return "?";
}

struct SparseSetElement {
    uint64_t value = 0;
    SparseFamily family = SparseFamily::q_seq;
    uint64_t index = 0;    // n within the family, 1-based
    uint64_t a = 0;        // p-family parameter; 0 for q/r
    uint64_t modulus_used = 0;
};

// 1*3*5***(2n+1); overflows uint64 from n = 17 on (checked).
inline uint64_t odd_factorial(uint64_t n) {
    if (n < 1) fail(errc::invalid_argument, "odd_factorial: n must be >= 1");
    uint64_t r = 1;
    for (uint64_t i = 1; i <= n; ++i) {
        if (__builtin_mul_overflow(r, 2 * i + 1, &r))
            fail(errc::overflow, "odd_factorial(" + std::to_string(n) + "): exceeds 64 bits");
    }
    return r;
}

inline std::vector<SparseSetElement> gen_q_sequence(uint64_t count,
                                                    uint64_t ap_cap = sparse_ap_cap) {
    if (count < 1) fail(errc::invalid_argument, "gen_q_sequence: count must be >= 1");
    std::vector<SparseSetElement> out;
    out.push_back({5, SparseFamily::q_seq, 1, 0, odd_factorial(1)});
    for (uint64_t n = 2; n <= count; ++n) {
        uint64_t m = odd_factorial(n);
        uint64_t v = next_prime_in_ap({2 % m, m, out.back().value, ap_cap});
        out.push_back({v, SparseFamily::q_seq, n, 0, m});
    }
    return out;
}

inline std::vector<SparseSetElement> gen_r_sequence(uint64_t count,
                                                    uint64_t ap_cap = sparse_ap_cap) {
    if (count < 1) fail(errc::invalid_argument, "gen_r_sequence: count must be >= 1");
    std::vector<SparseSetElement> out;
    out.push_back({5, SparseFamily::r_seq, 1, 0, odd_factorial(1)});
    for (uint64_t n = 2; n <= count; ++n) {
        uint64_t m = odd_factorial(n);
        uint64_t v = next_prime_in_ap({(m + 1) / 2, m, std::max(m, out.back().value), ap_cap});
        out.push_back({v, SparseFamily::r_seq, n, 0, m});
    }
    return out;
}

struct PSequenceResult {
    uint64_t a = 0;
    uint64_t pi_k = 0;                        // smallest odd prime > a^a
    uint64_t c_a = 0;                         // threshold a^a + 1
    std::vector<SparseSetElement> elements;
    bool saturated = false;                   // 64-bit range ended the family
    std::string saturation_note;
};

namespace detail {

// a^a if it fits 64 bits.
inline bool try_pow_self(uint64_t a, uint64_t* out) {
    uint64_t r = 1;
    for (uint64_t i = 0; i < a; ++i)
        if (__builtin_mul_overflow(r, a, &r)) return false;
    *out = r;
    return true;
}

inline uint64_t pow_self(uint64_t a) {
    uint64_t r;
    if (!try_pow_self(a, &r)) fail(errc::overflow, "a^a: 64-bit multiply overflow");
    return r;
}

// a^a + 1 if representable; saturates to UINT64_MAX otherwise (only used as
// a comparison threshold).
inline uint64_t c_a_threshold(uint64_t a) {
    uint64_t p, c;
    if (!try_pow_self(a, &p)) return UINT64_MAX;
    if (__builtin_add_overflow(p, uint64_t(1), &c)) return UINT64_MAX;
    return c;
}

inline bool try_cube(uint64_t v, uint64_t* out) {
    uint64_t sq;
    return !__builtin_mul_overflow(v, v, &sq) && !__builtin_mul_overflow(sq, v, out);
}

}  // namespace detail

inline PSequenceResult gen_p_sequence(uint64_t a, uint64_t count,
                                      uint64_t ap_cap = sparse_ap_cap) {
    if (a < 1) fail(errc::invalid_argument, "gen_p_sequence: a must be >= 1");
    if (count < 1) fail(errc::invalid_argument, "gen_p_sequence: count must be >= 1");
    PSequenceResult out;
    out.a = a;
    uint64_t aa = detail::pow_self(a);
    out.c_a = checked_add_u(aa, 1, "gen_p_sequence C_a");
    out.pi_k = next_prime_in_ap({0, 1, std::max<uint64_t>(aa, 2), ap_cap});
    uint64_t modulus = out.pi_k;       // pi_k *** pi_{k+n-1} for index n
    uint64_t window_last = out.pi_k;   // last prime included in the modulus
    // Lower bound for the next element: pi_k^3, then p_n^3.
    uint64_t lower;
    if (__builtin_mul_overflow(checked_mul_u(out.pi_k, out.pi_k, "gen_p_sequence"), out.pi_k,
                               &lower)) {
        out.saturated = true;
        out.saturation_note = "pi_k^3 exceeds 64 bits; family is empty at this scale";
        return out;
    }
    for (uint64_t n = 1; n <= count; ++n) {
        uint64_t v;
        try {
            v = next_prime_in_ap({a % modulus, modulus, lower, ap_cap});
        } catch (const error& e) {
            if (e.kind() == errc::overflow) {
                out.saturated = true;
                out.saturation_note = "index " + std::to_string(n) +
                                      ": candidate scan left 64-bit range";
                return out;
            }
            throw;  // not_found from a caller-imposed cap propagates
        }
        out.elements.push_back({v, SparseFamily::p_seq, n, a, modulus});
        if (n == count) break;
        uint64_t next_window = next_prime_in_ap({0, 1, window_last, ap_cap});
        if (__builtin_mul_overflow(modulus, next_window, &modulus)) {
            out.saturated = true;
            out.saturation_note = "index " + std::to_string(n + 1) +
                                  ": modulus product exceeds 64 bits";
            return out;
        }
        window_last = next_window;
        uint64_t sq;
        if (__builtin_mul_overflow(v, v, &sq) || __builtin_mul_overflow(sq, v, &lower)) {
            out.saturated = true;
            out.saturation_note = "index " + std::to_string(n + 1) + ": cube of " +
                                  std::to_string(v) + " exceeds 64 bits";
            return out;
        }
    }
    return out;
}

// ------------------------------------------------------------- union set ---

struct GeneratedSet {
    std::vector<SparseSetElement> elements;  // all families, in generation order
    uint64_t q_depth = 0;
    uint64_t r_depth = 0;
    uint64_t a_max = 0;                      // p-families generated for a = 1..a_max
    std::vector<PSequenceResult> p_families;
    uint64_t support = 0;                    // x_max the depths were derived for
    std::vector<uint64_t> trimmed_values;    // values removed by trim_small
};

// Generates every family deep enough that no omitted element can be <= x_max
// (odd_factorial growth for q/r, cubing for the p-families).
inline GeneratedSet generate_support(uint64_t x_max, uint64_t ap_cap = sparse_ap_cap) {
    if (x_max < 5) fail(errc::invalid_argument, "generate_support: x_max must be >= 5");
    GeneratedSet g;
    g.support = x_max;

    uint64_t depth = 1;
    for (;; ++depth) {
        uint64_t next;
        bool of_overflows = true;
        try {
            next = odd_factorial(depth + 1);
            of_overflows = false;
        } catch (const error&) {
        }
        if (of_overflows || next >= x_max) break;
    }
    g.q_depth = g.r_depth = depth;
    for (const auto& e : gen_q_sequence(depth, ap_cap)) g.elements.push_back(e);
    for (const auto& e : gen_r_sequence(depth, ap_cap)) g.elements.push_back(e);

    // p-families whose first element provably exceeds x_max (pi_k^3 >= x_max)
    // are omitted; pi_k is nondecreasing in a, so the first such a covers all
    // larger ones.  Included families run to 64-bit saturation, which takes
    // only a handful of elements.
    for (uint64_t a = 1;; ++a) {
        uint64_t aa, cube;
        if (!detail::try_pow_self(a, &aa)) break;
        uint64_t pik = next_prime_in_ap({0, 1, std::max<uint64_t>(aa, 2), ap_cap});
        if (!detail::try_cube(pik, &cube) || cube >= x_max) break;
        PSequenceResult fam = gen_p_sequence(a, 64, ap_cap);
        g.a_max = a;
        for (const auto& e : fam.elements) g.elements.push_back(e);
        g.p_families.push_back(std::move(fam));
    }
    return g;
}

struct CountReport {
    uint64_t x = 0;
    uint64_t count = 0;        // distinct values <= x in the whole set
    bool bound_ok = false;     // count < ln x
    uint64_t qr_count = 0;     // distinct q/r-family values <= x
    bool qr_half_ok = false;   // qr_count < (1/2) ln x
    uint64_t p_count = 0;
    bool p_half_ok = false;
};

namespace detail {

// Certify that generation depth suffices for counting up to x; raises
// invalid_argument with concrete guidance otherwise.
inline void check_counting_depth(uint64_t x, const GeneratedSet& g) {
    auto of_at_least = [](uint64_t n, uint64_t x_) {
        try {
            return odd_factorial(n) >= x_;
        } catch (const error&) {
            return true;  // overflowing the modulus certainly exceeds x
        }
    };
    if (!of_at_least(g.q_depth + 1, x) || !of_at_least(g.r_depth + 1, x))
        fail(errc::invalid_argument,
             "count_P: insufficient q/r depth for x = " + std::to_string(x) +
                 "; generate to depth n with odd_factorial(n+1) >= x");
    for (const auto& fam : g.p_families) {
        if (fam.saturated) continue;  // next element would exceed 64 bits
        uint64_t last = fam.elements.empty() ? fam.pi_k : fam.elements.back().value;
        uint64_t cube;
        if (detail::try_cube(last, &cube) && cube < x)
            fail(errc::invalid_argument,
                 "count_P: p-family a = " + std::to_string(fam.a) +
                     " not generated deep enough for x = " + std::to_string(x) +
                     "; extend until the last element's cube reaches x");
    }
    // Families a > a_max contribute nothing <= x only if pi_k(a_max+1)^3 >= x.
    uint64_t a = g.a_max + 1, aa;
    if (detail::try_pow_self(a, &aa)) {
        uint64_t pik = next_prime_in_ap({0, 1, std::max<uint64_t>(aa, 2)});
        uint64_t cube;
        if (detail::try_cube(pik, &cube) && cube < x)
            fail(errc::invalid_argument,
                 "count_P: p-families above a = " + std::to_string(g.a_max) +
                     " could reach below x = " + std::to_string(x) +
                     "; generate further families");
    }
}

}  // namespace detail

inline CountReport count_P(uint64_t x, const GeneratedSet& g) {
    if (x < 1) fail(errc::invalid_argument, "count_P: x must be >= 1");
    detail::check_counting_depth(x, g);
    std::set<uint64_t> all, qr, pf;
    for (const auto& e : g.elements) {
        if (e.value > x) continue;
        all.insert(e.value);
        (e.family == SparseFamily::p_seq ? pf : qr).insert(e.value);
    }
    CountReport rep;
    rep.x = x;
    rep.count = all.size();
    rep.qr_count = qr.size();
    rep.p_count = pf.size();
    double lx = std::log(static_cast<double>(x));
    rep.bound_ok = static_cast<double>(rep.count) < lx;
    rep.qr_half_ok = static_cast<double>(rep.qr_count) < lx / 2;
    rep.p_half_ok = static_cast<double>(rep.p_count) < lx / 2;
    return rep;
}

// ------------------------------------------------------- property checks ---

struct P3Instance {
    uint64_t n = 0;               // p-family index whose modulus covers the pair
    uint64_t q_val = 0, r_val = 0;  // the pair of window primes
    uint64_t p_val = 0;
    bool congruence_ok = false;   // p_val = a (mod q_val * r_val)
    bool pair_in_set = false;     // both window primes are values of P
    bool pair_ge_ca = false;      // both window primes >= C_a
};

struct PropertyReport {
    uint64_t m = 0, a = 0, depth = 0;
    uint64_t c_a = 0;
    // p1: every q_n with m | odd_factorial(n) has q_n = 2 (mod m).
    std::vector<uint64_t> p1_indices;
    bool p1_all_ok = false, p1_conclusive = false;
    // p2: every such r_n has r_n = (m+1)/2 (mod m).
    std::vector<uint64_t> p2_indices;
    bool p2_all_ok = false, p2_conclusive = false;
    // p3: p-family elements = a modulo products of window-prime pairs.
    std::vector<P3Instance> p3_instances;
    bool p3_all_ok = false, p3_conclusive = false;
};

inline PropertyReport check_P_properties(uint64_t m, uint64_t a, uint64_t depth = 6,
                                         uint64_t ap_cap = sparse_ap_cap) {
    if (m < 3 || m % 2 == 0)
        fail(errc::invalid_argument, "check_P_properties: m must be odd and >= 3");
    if (a < 1) fail(errc::invalid_argument, "check_P_properties: a must be >= 1");
    if (depth < 1) fail(errc::invalid_argument, "check_P_properties: depth must be >= 1");
    PropertyReport rep;
    rep.m = m;
    rep.a = a;
    rep.depth = depth;

    auto qs = gen_q_sequence(depth, ap_cap);
    auto rs = gen_r_sequence(depth, ap_cap);
    rep.p1_all_ok = rep.p2_all_ok = true;
    for (uint64_t n = 1; n <= depth; ++n) {
        if (odd_factorial(n) % m != 0) continue;
        rep.p1_indices.push_back(n);
        if (qs[n - 1].value % m != 2 % m) rep.p1_all_ok = false;
        rep.p2_indices.push_back(n);
        if (rs[n - 1].value % m != ((m + 1) / 2) % m) rep.p2_all_ok = false;
    }
    rep.p1_conclusive = !rep.p1_indices.empty();
    rep.p2_conclusive = !rep.p2_indices.empty();

    PSequenceResult fam = gen_p_sequence(a, depth, ap_cap);
    rep.c_a = fam.c_a;
    std::set<uint64_t> set_values;
    for (const auto& e : qs) set_values.insert(e.value);
    for (const auto& e : rs) set_values.insert(e.value);
    for (const auto& e : fam.elements) set_values.insert(e.value);
    // Window primes pi_k, pi_{k+1}, ... in modulus order.
    std::vector<uint64_t> window{fam.pi_k};
    while (window.size() < fam.elements.size())
        window.push_back(next_prime_in_ap({0, 1, window.back(), ap_cap}));
    rep.p3_all_ok = true;
    for (const auto& e : fam.elements) {
        if (e.index < 2) continue;  // modulus covers a pair only from n = 2
        for (size_t i = 0; i < e.index; ++i) {
            for (size_t j = i + 1; j < e.index; ++j) {
                P3Instance inst;
                inst.n = e.index;
                inst.q_val = window[i];
                inst.r_val = window[j];
                inst.p_val = e.value;
                uint64_t prod = checked_mul_u(window[i], window[j], "check_P_properties");
                inst.congruence_ok = e.value % prod == a % prod;
                inst.pair_in_set = set_values.count(window[i]) && set_values.count(window[j]);
                inst.pair_ge_ca = window[i] >= fam.c_a && window[j] >= fam.c_a;
                if (!inst.congruence_ok) rep.p3_all_ok = false;
                rep.p3_instances.push_back(inst);
            }
        }
    }
    rep.p3_conclusive = !rep.p3_instances.empty();
    return rep;
}

// ---------------------------------------------------------------- trimming ---

struct TrimResult {
    GeneratedSet trimmed;
    std::vector<uint64_t> removed_values;
    uint64_t x_max = 0;
};

// Removes the minimal prefix of smallest values so that the count of
// remaining values <= x stays below ln x for every integer x in [3, x_max].
// Since the count is constant between consecutive set values and ln is
// increasing, checking each value point (and nothing else) is exhaustive.
inline TrimResult trim_small(const GeneratedSet& g, uint64_t x_max) {
    if (x_max < 3) fail(errc::invalid_argument, "trim_small: x_max must be >= 3");
    std::vector<uint64_t> vals;
    for (const auto& e : g.elements)
        if (e.value <= x_max) vals.push_back(e.value);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());

    size_t t = 0;
    for (; t <= vals.size(); ++t) {
        bool ok = true;
        for (size_t j = t; j < vals.size(); ++j) {
            double lx = std::log(static_cast<double>(vals[j]));
            if (static_cast<double>(j - t + 1) >= lx) { ok = false; break; }
        }
        if (ok) break;
    }
    TrimResult out;
    out.x_max = x_max;
    out.removed_values.assign(vals.begin(), vals.begin() + static_cast<ptrdiff_t>(t));
    std::set<uint64_t> removed(out.removed_values.begin(), out.removed_values.end());
    out.trimmed = g;
    out.trimmed.elements.clear();
    for (const auto& e : g.elements)
        if (!removed.count(e.value)) out.trimmed.elements.push_back(e);
    out.trimmed.trimmed_values = out.removed_values;
    return out;
}

// ------------------------------------------- witness selection inside P ---

// Attempt the height-witness recipe for a target h using only primes of the
// generated set: q in P with q = 2 (mod p'), then r in P in the class
// (p'q+1)/2 (mod p'q), then p in P with p = p' (mod qr), all >= C_{p'}.
// At 64-bit depth the r-stage is typically impossible (it needs p'q to
// divide an odd factorial, i.e. generation depth far beyond overflow), and
// the error says exactly that.
struct SparseWitnessPick {
    uint64_t target_h = 0;
    uint64_t p_prime = 0;
    uint64_t q = 0, r = 0, p = 0;
};

inline SparseWitnessPick pick_witness_from_set(uint64_t h, const GeneratedSet& g) {
    if (h < 1) fail(errc::invalid_argument, "pick_witness_from_set: h must be >= 1");
    uint64_t pp = 2 * h - 1;
    uint64_t ca = detail::c_a_threshold(pp);
    std::vector<uint64_t> vals;
    for (const auto& e : g.elements) vals.push_back(e.value);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());

    SparseWitnessPick pick;
    pick.target_h = h;
    pick.p_prime = pp;
    for (uint64_t v : vals)
        if (v >= ca && v % pp == 2 % pp) { pick.q = v; break; }
    if (pick.q == 0)
        fail(errc::not_found, "pick_witness_from_set: q-stage: no set element = 2 (mod " +
                                  std::to_string(pp) + ") at or above C = " + std::to_string(ca));
    uint64_t ppq = checked_mul_u(pp, pick.q, "pick_witness_from_set");
    for (uint64_t v : vals)
        if (v >= ca && v % ppq == (ppq + 1) / 2 % ppq) { pick.r = v; break; }
    if (pick.r == 0) {
        // Diagnose the needed depth: r_n lands in this class once ppq divides
        // odd_factorial(n), i.e. n >= (largest prime factor of ppq - 1) / 2.
        uint64_t lpf = factorize(ppq).back().first;
        uint64_t need = (lpf - 1) / 2;
        bool of_fits = true;
        try {
            odd_factorial(need);
        } catch (const error&) {
            of_fits = false;
        }
        fail(errc::not_found,
             "pick_witness_from_set: r-stage: no set element = (p'q+1)/2 (mod " +
                 std::to_string(ppq) + "); the r-family reaches this class only at index n >= " +
                 std::to_string(need) +
                 (of_fits ? " -- generate the r-family deeper"
                          : ", whose modulus odd_factorial(n) exceeds 64 bits"));
    }
    uint64_t qr = checked_mul_u(pick.q, pick.r, "pick_witness_from_set");
    for (uint64_t v : vals)
        if (v % qr == pp % qr) { pick.p = v; break; }
    if (pick.p == 0)
        fail(errc::not_found, "pick_witness_from_set: p-stage: no set element = " +
                                  std::to_string(pp) + " (mod " + std::to_string(qr) + ")");
    return pick;
}

}  // namespace cyclo
