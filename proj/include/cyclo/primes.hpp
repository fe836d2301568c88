#pragma once
// 64-bit primality, factorization and capped prime searches.
//
// is_prime: deterministic Miller-Rabin for the full uint64 range using the
// standard 12-base certificate {2,3,...,37}.  factorize: trial division by
// small primes, then Brent's variant of Pollard rho.  next_prime_in_ap:
// linear scan of an admissible residue class with a hard cap (no silent
// truncation; exhausting the cap raises errc::not_found).

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "checked.hpp"
#include "errors.hpp"

namespace cyclo {

namespace detail {

inline uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<__uint128_t>(a) * b) % m);
}

inline uint64_t powmod_u64(uint64_t base, uint64_t exp, uint64_t m) {
    uint64_t r = m > 1 ? 1 % m : 0;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod_u64(r, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return r;
}

}  // namespace detail

inline bool is_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = detail::powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = detail::mulmod_u64(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

namespace detail {

inline uint64_t pollard_rho(uint64_t n) {
    // Brent's cycle detection; n must be odd composite, not a prime power of
    // a small prime (those were peeled off by trial division).
    for (uint64_t c = 1;; ++c) {
        uint64_t x = 2, y = 2, d = 1, q = 1, ys = 0, r = 1;
        auto f = [&](uint64_t v) { return (mulmod_u64(v, v, n) + c) % n; };
        while (d == 1) {
            x = y;
            for (uint64_t i = 0; i < r; ++i) y = f(y);
            for (uint64_t k = 0; k < r && d == 1; k += 128) {
                ys = y;
                uint64_t lim = std::min<uint64_t>(128, r - k);
                for (uint64_t i = 0; i < lim; ++i) {
                    y = f(y);
                    q = mulmod_u64(q, x > y ? x - y : y - x, n);
                }
                d = std::gcd(q, n);
            }
            r <<= 1;
        }
        if (d == n) {
            d = 1;
            while (d == 1) {
                ys = f(ys);
                d = std::gcd(x > ys ? x - ys : ys - x, n);
            }
        }
        if (d != n) return d;
    }
}

}  // namespace detail

// Prime factorization as (prime, exponent) pairs, primes ascending.
inline std::vector<std::pair<uint64_t, int>> factorize(uint64_t n) {
    if (n == 0) fail(errc::invalid_argument, "factorize(0)");
    std::vector<uint64_t> primes;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        while (n % p == 0) { primes.push_back(p); n /= p; }
    }
    std::vector<uint64_t> stack;
    if (n > 1) stack.push_back(n);
    while (!stack.empty()) {
        uint64_t m = stack.back();
        stack.pop_back();
        if (is_prime(m)) { primes.push_back(m); continue; }
        uint64_t d = detail::pollard_rho(m);
        stack.push_back(d);
        stack.push_back(m / d);
    }
    std::sort(primes.begin(), primes.end());
    std::vector<std::pair<uint64_t, int>> out;
    for (uint64_t p : primes) {
        if (!out.empty() && out.back().first == p) ++out.back().second;
        else out.push_back({p, 1});
    }
    return out;
}

// Product of the distinct prime divisors; radical(1) = 1.
inline uint64_t radical(uint64_t n) {
    uint64_t r = 1;
    for (auto [p, e] : factorize(n)) r = checked_mul_u(r, p, "radical");
    return r;
}

inline uint64_t euler_phi(uint64_t n) {
    uint64_t r = n;
    for (auto [p, e] : factorize(n)) r = r / p * (p - 1);
    return r;
}

// All primes <= limit, ascending (simple sieve of Eratosthenes).
inline std::vector<uint64_t> small_primes(uint64_t limit, uint64_t limit_cap = 1000000000ull) {
    if (limit < 2) fail(errc::invalid_argument, "small_primes: limit must be >= 2");
    if (limit > limit_cap)
        fail(errc::resource, "small_primes: limit " + std::to_string(limit) +
                                 " exceeds cap " + std::to_string(limit_cap));
    std::vector<bool> composite(limit + 1, false);
    std::vector<uint64_t> out;
    for (uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return out;
}

inline constexpr uint64_t default_ap_search_cap = uint64_t(1) << 40;

struct APQuery {
    uint64_t residue = 0;                        // taken mod modulus
    uint64_t modulus = 1;
    uint64_t lower_bound = 1;                    // result must be strictly above this
    uint64_t search_cap = default_ap_search_cap; // largest candidate value examined
};

// Smallest prime p with p = residue (mod modulus) and p > lower_bound, or
// errc::not_found once candidates pass search_cap.  The residue class must
// be admissible (coprime to the modulus) unless modulus is 1.
inline uint64_t next_prime_in_ap(const APQuery& q) {
    if (q.modulus < 1) fail(errc::invalid_argument, "next_prime_in_ap: modulus must be >= 1");
    uint64_t a = q.residue % q.modulus;
    if (std::gcd(a, q.modulus) != 1)
        fail(errc::invalid_argument,
             "next_prime_in_ap: residue class " + std::to_string(a) + " mod " +
                 std::to_string(q.modulus) + " is not coprime to the modulus");
    // First candidate strictly above lower_bound in the class.
    uint64_t c;
    if (q.lower_bound < a) {
        c = a;
    } else {
        uint64_t k = (q.lower_bound - a) / q.modulus + 1;
        uint64_t step = checked_mul_u(k, q.modulus, "next_prime_in_ap");
        c = checked_add_u(a, step, "next_prime_in_ap");
    }
    for (; c <= q.search_cap; c = checked_add_u(c, q.modulus, "next_prime_in_ap")) {
        if (is_prime(c)) return c;
    }
    fail(errc::not_found,
         "next_prime_in_ap: no prime = " + std::to_string(a) + " (mod " +
             std::to_string(q.modulus) + ") in (" + std::to_string(q.lower_bound) +
             ", " + std::to_string(q.search_cap) + "]");
}

}  // namespace cyclo
