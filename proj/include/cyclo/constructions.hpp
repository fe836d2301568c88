#pragma once
// Constructive procedures around ternary heights:
//
//  * lemma1_triple / lemma4_triple: families (p, q, r) with q = 2 (mod p)
//    and 2r = 1 (mod pq) whose height is exactly (p+1)/2.
//  * lemma2_range: the interval of heights attainable over the (p, q, r)
//    family with both congruences free, [ (p+1)/2, (p+1)/2 + x_p ].
//  * theorem1_witness: for a target h, primes q = 2 (mod p'), r = (p'q+1)/2
//    (mod p'q), p = p' (mod qr) with p' = 2h-1 give A(pqr) in {h, h+1};
//    h = 1 uses p = 1 (mod qr), which forces height 1.
//  * jump_sequence: the recurrence (p,q,r) -> (q, r, p + qr); each step
//    changes the height by 0 or +1.
//  * jump_probe: compares A(q,r,s) with A(q,r,s+qr) for one shift.
//  * prime_chain: (p,q,r) -> (q, r, smallest prime = p (mod qr) above r).
//  * explore_M: exhaustive height scan of a (q, r) prime box for fixed p,
//    empirical evidence about max_{q,r} A(pqr).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "checked.hpp"
#include "errors.hpp"
#include "heights.hpp"
#include "primes.hpp"
#include "series.hpp"

namespace cyclo {

struct SearchCaps {
    uint64_t q_cap = default_ap_search_cap;
    uint64_t r_cap = default_ap_search_cap;
    uint64_t p_cap = default_ap_search_cap;
};

namespace detail {

inline void require_odd_ge3(int64_t p, const char* who, bool must_be_prime) {
    if (p < 3 || p % 2 == 0)
        fail(errc::invalid_argument, std::string(who) + ": p must be odd and >= 3");
    if (must_be_prime && !is_prime(static_cast<uint64_t>(p)))
        fail(errc::invalid_argument, std::string(who) + ": p must be prime");
}

}  // namespace detail

// ----------------------------------------------------- lemma1 / lemma4 ---

struct Lemma1Result {
    TernaryTriple triple;
    uint64_t predicted_height = 0;
    char r_class_sign = '+';  // which of (pq+1)/2 ('+') or (pq-1)/2 ('-') won
};

inline Lemma1Result lemma1_triple(int64_t p, uint64_t q_cap = default_ap_search_cap,
                                  uint64_t r_cap = default_ap_search_cap) {
    detail::require_odd_ge3(p, "lemma1_triple", true);
    uint64_t pu = static_cast<uint64_t>(p);
    uint64_t q = next_prime_in_ap({2 % pu, pu, pu, q_cap});
    uint64_t pq = checked_mul_u(pu, q, "lemma1_triple");
    // Both residue classes (pq+1)/2 and (pq-1)/2 are admissible mod pq;
    // scan each and keep the smaller prime.
    uint64_t r = 0;
    char sign = '+';
    bool found = false;
    for (char s : {'+', '-'}) {
        uint64_t cls = s == '+' ? (pq + 1) / 2 : (pq - 1) / 2;
        try {
            uint64_t cand = next_prime_in_ap({cls, pq, pq, r_cap});
            if (!found || cand < r) {
                r = cand;
                sign = s;
            }
            found = true;
        } catch (const error& e) {
            if (e.kind() != errc::not_found) throw;
        }
    }
    if (!found)
        fail(errc::not_found, "lemma1_triple: no prime in either class mod " +
                                  std::to_string(pq) + " within cap " + std::to_string(r_cap));
    Lemma1Result out{TernaryTriple::make(p, static_cast<int64_t>(q), static_cast<int64_t>(r),
                                         INT64_MAX),
                     static_cast<uint64_t>((p + 1) / 2), sign};
    return out;
}

struct Lemma4Result {
    TernaryTriple triple;
    uint64_t predicted_height = 0;
};

// q = 2 + (2k+1)p, r = (pq+1)/2 + l*pq; works for any odd p >= 3, prime or not.
inline Lemma4Result lemma4_triple(int64_t p, int64_t k, int64_t l) {
    detail::require_odd_ge3(p, "lemma4_triple", false);
    if (k < 0 || l < 0) fail(errc::invalid_argument, "lemma4_triple: k, l must be >= 0");
    int64_t q = checked_add(2, checked_mul(checked_add(checked_mul(2, k, "lemma4"), 1, "lemma4"),
                                           p, "lemma4"),
                            "lemma4");
    int64_t pq = checked_mul(p, q, "lemma4");
    int64_t r = checked_add((pq + 1) / 2, checked_mul(l, pq, "lemma4"), "lemma4");
    if (std::gcd(p, q) != 1)
        fail(errc::invalid_argument, "lemma4_triple: gcd(p, q) != 1");
    if (std::gcd(q, r) != 1)
        fail(errc::invalid_argument, "lemma4_triple: gcd(q, r) != 1");
    if (std::gcd(p, r) != 1)
        fail(errc::invalid_argument, "lemma4_triple: gcd(p, r) != 1");
    return Lemma4Result{TernaryTriple::make(p, q, r, INT64_MAX),
                        static_cast<uint64_t>((p + 1) / 2)};
}

// ----------------------------------------------------------------- lemma2 ---

struct Lemma2Range {
    int64_t p = 0;
    uint64_t h_min = 0;
    uint64_t h_max = 0;
    std::vector<uint64_t> heights;  // every integer in [h_min, h_max]
};

// The attainable heights over the free family are (p+1)/2 + t for integer
// 0 <= t <= x_p, x_p = (-1 + sqrt(4p-11))/4.  floor(x_p) is computed with
// integer square roots only.
inline Lemma2Range lemma2_range(int64_t p) {
    detail::require_odd_ge3(p, "lemma2_range", true);
    uint64_t d = static_cast<uint64_t>(4 * p - 11);
    uint64_t s = static_cast<uint64_t>(std::sqrt(static_cast<double>(d)));
    while (s > 0 && s * s > d) --s;
    while ((s + 1) * (s + 1) <= d) ++s;
    Lemma2Range out;
    out.p = p;
    out.h_min = static_cast<uint64_t>((p + 1) / 2);
    out.h_max = out.h_min + (s - 1) / 4;  // floor((sqrt(4p-11) - 1)/4), exact
    for (uint64_t h = out.h_min; h <= out.h_max; ++h) out.heights.push_back(h);
    return out;
}

// ------------------------------------------------------- witness search ---

enum class WitnessCase { exact_h, h_plus_one };

struct WitnessCertificate {
    uint64_t target_h = 0;
    int64_t p_prime = 0;  // p' = 2h - 1
    int64_t q = 0, r = 0, p = 0;
    uint64_t computed_height = 0;
    WitnessCase outcome = WitnessCase::exact_h;
    bool strict_larger_p = false;
    SearchCaps caps_used;
    int64_t degree = 0;
};

// Recheck the three defining congruences and primality; throws internal on
// violation (callers use this as an independent audit of a certificate).
inline void verify_witness_congruences(const WitnessCertificate& c) {
    auto bad = [](const std::string& what) {
        fail(errc::internal, "witness certificate violates " + what);
    };
    if (c.p_prime != static_cast<int64_t>(2 * c.target_h - 1)) bad("p' = 2h - 1");
    if (!is_prime(static_cast<uint64_t>(c.q)) || !is_prime(static_cast<uint64_t>(c.r)) ||
        !is_prime(static_cast<uint64_t>(c.p)))
        bad("primality of q, r, p");
    int64_t pp = c.p_prime;
    if ((c.q - 2) % pp != 0) bad("q = 2 (mod p')");
    int64_t ppq = checked_mul(pp, c.q, "verify_witness");
    if ((c.r - (ppq + 1) / 2) % ppq != 0) bad("r = (p'q+1)/2 (mod p'q)");
    int64_t qr = checked_mul(c.q, c.r, "verify_witness");
    if ((c.p - pp) % qr != 0) bad("p = p' (mod qr)");
    if (c.computed_height != c.target_h && c.computed_height != c.target_h + 1)
        bad("computed height in {h, h+1}");
    if ((c.outcome == WitnessCase::exact_h) != (c.computed_height == c.target_h))
        bad("case tag consistency");
}

inline WitnessCertificate theorem1_witness(uint64_t h, bool strict_larger_p = false,
                                           SearchCaps caps = {},
                                           int64_t coeff_budget = default_coeff_budget) {
    if (h < 1) fail(errc::invalid_argument, "theorem1_witness: h must be >= 1");
    uint64_t pp = 2 * h - 1;
    WitnessCertificate cert;
    cert.target_h = h;
    cert.p_prime = static_cast<int64_t>(pp);
    cert.strict_larger_p = strict_larger_p;
    cert.caps_used = caps;

    uint64_t q;
    try {
        q = next_prime_in_ap({2 % pp, pp, 2, caps.q_cap});
    } catch (const error& e) {
        if (e.kind() != errc::not_found) throw;
        fail(errc::not_found, std::string("theorem1_witness: q-search: ") + e.what());
    }
    uint64_t ppq = checked_mul_u(pp, q, "theorem1_witness");
    uint64_t r;
    try {
        r = next_prime_in_ap({(ppq + 1) / 2, ppq, 2, caps.r_cap});
    } catch (const error& e) {
        if (e.kind() != errc::not_found) throw;
        fail(errc::not_found, std::string("theorem1_witness: r-search: ") + e.what());
    }
    uint64_t qr = checked_mul_u(q, r, "theorem1_witness");
    uint64_t p;
    if (!strict_larger_p && pp >= 3 && is_prime(pp)) {
        p = pp;  // taking p = p' is the smallest admissible choice
    } else {
        uint64_t lower = strict_larger_p && pp > 2 ? pp : 2;
        try {
            p = next_prime_in_ap({pp % qr, qr, lower, caps.p_cap});
        } catch (const error& e) {
            if (e.kind() != errc::not_found) throw;
            fail(errc::not_found, std::string("theorem1_witness: p-search: ") + e.what());
        }
    }
    cert.q = static_cast<int64_t>(q);
    cert.r = static_cast<int64_t>(r);
    cert.p = static_cast<int64_t>(p);

    TernaryTriple t = TernaryTriple::make(cert.p, cert.q, cert.r, coeff_budget);
    HeightRecord rec = height(t, coeff_budget);
    cert.computed_height = rec.height;
    cert.degree = rec.degree;
    if (cert.computed_height != h && cert.computed_height != h + 1)
        fail(errc::internal, "theorem1_witness: computed height " +
                                 std::to_string(cert.computed_height) + " outside {" +
                                 std::to_string(h) + ", " + std::to_string(h + 1) + "}");
    cert.outcome = cert.computed_height == h ? WitnessCase::exact_h : WitnessCase::h_plus_one;
    verify_witness_congruences(cert);
    return cert;
}

// ------------------------------------------------------------------ jumps ---

struct JumpStep {
    TernaryTriple before, after;
    uint64_t height_before = 0, height_after = 0;
    bool jumped = false;
};

struct JumpSequenceResult {
    TernaryTriple start;
    uint64_t start_height = 0;
    std::vector<JumpStep> steps;
    std::string stop_reason;  // empty if all requested steps completed
};

inline JumpSequenceResult jump_sequence(const TernaryTriple& start, int64_t steps,
                                        int64_t coeff_budget = default_coeff_budget) {
    if (steps < 0) fail(errc::invalid_argument, "jump_sequence: steps must be >= 0");
    TernaryTriple cur = TernaryTriple::make(start.p, start.q, start.r, coeff_budget);
    if (!(2 < cur.p && cur.p < cur.q && cur.q < cur.r))
        fail(errc::invalid_argument, "jump_sequence: start must satisfy 2 < p < q < r");
    JumpSequenceResult out;
    out.start = cur;
    uint64_t h = height(cur, coeff_budget).height;
    out.start_height = h;
    for (int64_t i = 0; i < steps; ++i) {
        int64_t next_r = checked_add(cur.p, checked_mul(cur.q, cur.r, "jump_sequence"),
                                     "jump_sequence");
        TernaryTriple next;
        try {
            next = TernaryTriple::make(cur.q, cur.r, next_r, coeff_budget);
        } catch (const error& e) {
            if (e.kind() != errc::resource) throw;
            out.stop_reason = "step " + std::to_string(i + 1) + ": " + e.what();
            return out;
        }
        uint64_t h2 = height(next, coeff_budget).height;
        if (h2 != h && h2 != h + 1)
            fail(errc::internal, "jump_sequence: height step " + std::to_string(h) + " -> " +
                                     std::to_string(h2) + " violates the {0,+1} law");
        out.steps.push_back({cur, next, h, h2, h2 == h + 1});
        cur = next;
        h = h2;
    }
    return out;
}

struct JumpProbe {
    uint64_t h_base = 0;
    uint64_t h_shifted = 0;
    bool jumped = false;
};

inline JumpProbe jump_probe(int64_t q, int64_t r, int64_t s,
                            int64_t coeff_budget = default_coeff_budget) {
    HeightRecord base = height_ternary(q, r, s, coeff_budget);
    int64_t qr = checked_mul(q, r, "jump_probe");
    HeightRecord shifted = height_ternary(q, r, checked_add(s, qr, "jump_probe"), coeff_budget);
    uint64_t hb = base.height, hs = shifted.height;
    if (hs != hb && hs != hb + 1)
        fail(errc::internal, "jump_probe: heights " + std::to_string(hb) + " -> " +
                                 std::to_string(hs) + " violate the {0,+1} law");
    if (s > std::max(q, r) && hs != hb)
        fail(errc::internal,
             "jump_probe: congruent indices above max(q, r) must have equal heights");
    return JumpProbe{hb, hs, hs == hb + 1};
}

// ------------------------------------------------------------ prime chain ---

struct ChainEntry {
    TernaryTriple triple;
    bool height_computed = false;
    uint64_t height = 0;
};

struct ChainResult {
    std::vector<ChainEntry> entries;  // entry 0 is the start
    std::string stop_reason;          // empty if all requested steps completed
};

inline ChainResult prime_chain(const TernaryTriple& start, int64_t steps,
                               uint64_t ap_cap = default_ap_search_cap,
                               int64_t coeff_budget = default_coeff_budget) {
    if (steps < 0) fail(errc::invalid_argument, "prime_chain: steps must be >= 0");
    TernaryTriple cur = TernaryTriple::make(start.p, start.q, start.r, INT64_MAX);
    for (int64_t v : {cur.p, cur.q, cur.r})
        if (!is_prime(static_cast<uint64_t>(v)))
            fail(errc::invalid_argument,
                 "prime_chain: start components must be primes (got " + std::to_string(v) + ")");
    ChainResult out;
    bool budget_ok = true;
    uint64_t prev_h = 0;
    bool have_prev = false;
    for (int64_t i = 0;; ++i) {
        ChainEntry e;
        e.triple = cur;
        int64_t len = checked_add(cur.degree(), 1, "prime_chain");
        if (budget_ok && len > coeff_budget) {
            budget_ok = false;
            out.stop_reason = "entry " + std::to_string(i) + ": series length " +
                              std::to_string(len) + " exceeds coefficient budget " +
                              std::to_string(coeff_budget) + "; heights omitted from here on";
        }
        if (budget_ok) {
            e.height = height(cur, coeff_budget).height;
            e.height_computed = true;
            if (have_prev && e.height != prev_h && e.height != prev_h + 1)
                fail(errc::internal, "prime_chain: height step " + std::to_string(prev_h) +
                                         " -> " + std::to_string(e.height) +
                                         " violates the {0,+1} law");
            prev_h = e.height;
            have_prev = true;
        }
        out.entries.push_back(e);
        if (i == steps) break;
        uint64_t qr = checked_mul_u(static_cast<uint64_t>(cur.q), static_cast<uint64_t>(cur.r),
                                    "prime_chain");
        uint64_t next_r;
        try {
            next_r = next_prime_in_ap({static_cast<uint64_t>(cur.p) % qr, qr,
                                       static_cast<uint64_t>(cur.r), ap_cap});
        } catch (const error& e2) {
            if (e2.kind() != errc::not_found) throw;
            out.stop_reason = "successor of entry " + std::to_string(i) + ": " + e2.what();
            return out;
        }
        cur = TernaryTriple::make(cur.q, cur.r, static_cast<int64_t>(next_r), INT64_MAX);
    }
    return out;
}

// -------------------------------------------------------------- explorer ---

struct ExploreReport {
    int64_t p = 0;
    int64_t q_max = 0, r_max = 0;
    std::set<uint64_t> attained;
    uint64_t max_h = 0;
    bool full_interval = false;           // attained == {1, ..., max_h}
    std::map<uint64_t, TernaryTriple> witnesses;  // first triple per height
    int64_t pairs_examined = 0;
};

inline ExploreReport explore_M(int64_t p, int64_t q_max, int64_t r_max,
                               int64_t coeff_budget = default_coeff_budget) {
    detail::require_odd_ge3(p, "explore_M", true);
    if (q_max < 0 || r_max < 0)
        fail(errc::invalid_argument, "explore_M: bounds must be >= 0");
    ExploreReport rep;
    rep.p = p;
    rep.q_max = q_max;
    rep.r_max = r_max;
    if (r_max < 3 || q_max < 3) {
        rep.full_interval = true;  // empty box, empty interval
        return rep;
    }
    std::vector<uint64_t> primes = small_primes(static_cast<uint64_t>(r_max));
    for (uint64_t qu : primes) {
        int64_t q = static_cast<int64_t>(qu);
        if (q < 3 || q > q_max || q == p) continue;
        for (uint64_t ru : primes) {
            int64_t r = static_cast<int64_t>(ru);
            if (r <= q || r == p) continue;
            TernaryTriple t = TernaryTriple::make(p, q, r, coeff_budget);
            uint64_t h = height(t, coeff_budget).height;
            ++rep.pairs_examined;
            rep.attained.insert(h);
            rep.witnesses.try_emplace(h, t);
        }
    }
    rep.max_h = rep.attained.empty() ? 0 : *rep.attained.rbegin();
    rep.full_interval = rep.attained.size() == rep.max_h;
    return rep;
}

}  // namespace cyclo
