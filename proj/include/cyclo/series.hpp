#pragma once
// Truncated formal power series over int64 coefficients.
//
// Only two in-place kernels are needed to evaluate quotients of products of
// (x^k - 1): multiplying by (1 - x^k) and dividing by (1 - x^k).  Working
// with (1 - x^k) rather than (x^k - 1) flips the sign of each factor; a
// quotient with equally many factors up and down is unaffected.
//
//   multiply by (1 - x^k):  s[m] -= s[m-k]   for m descending
//   divide   by (1 - x^k):  s[m] += s[m-k]   for m ascending
//
// The division is exact truncation of multiplication by the formal inverse
// 1 + x^k + x^{2k} + ... (strided cumulative sums).  Both are O(len) and
// overflow-checked per coefficient.

#include <cstdint>
#include <string>
#include <vector>

#include "checked.hpp"
#include "errors.hpp"

namespace cyclo {

struct CoeffSeries {
    std::vector<int64_t> coeffs;  // coeffs[m] is the coefficient of x^m

    int64_t truncation_len() const { return static_cast<int64_t>(coeffs.size()); }
};

// 1 + 0*x + ... truncated to the given length.
inline CoeffSeries one(int64_t truncation_len) {
    if (truncation_len < 1)
        fail(errc::invalid_argument, "series length must be >= 1");
    CoeffSeries s;
    s.coeffs.assign(static_cast<size_t>(truncation_len), 0);
    s.coeffs[0] = 1;
    return s;
}

namespace detail {

[[noreturn]] inline void series_overflow(const char* op, int64_t k, int64_t m) {
    fail(errc::overflow, std::string(op) + "(1 - x^" + std::to_string(k) +
                             "): coefficient overflow at index " + std::to_string(m));
}

inline void check_stride(int64_t k) {
    if (k < 1) fail(errc::invalid_argument, "stride k must be >= 1");
}

}  // namespace detail

inline void mul_binomial_inplace(CoeffSeries& s, int64_t k) {
    detail::check_stride(k);
    const int64_t len = s.truncation_len();
    int64_t* c = s.coeffs.data();
    for (int64_t m = len - 1; m >= k; --m) {
        if (__builtin_sub_overflow(c[m], c[m - k], &c[m]))
            detail::series_overflow("mul", k, m);
    }
}

inline void div_binomial_inplace(CoeffSeries& s, int64_t k) {
    detail::check_stride(k);
    const int64_t len = s.truncation_len();
    int64_t* c = s.coeffs.data();
    for (int64_t m = k; m < len; ++m) {
        if (__builtin_add_overflow(c[m], c[m - k], &c[m]))
            detail::series_overflow("div", k, m);
    }
}

inline CoeffSeries mul_binomial(CoeffSeries s, int64_t k) {
    mul_binomial_inplace(s, k);
    return s;
}

inline CoeffSeries div_binomial(CoeffSeries s, int64_t k) {
    div_binomial_inplace(s, k);
    return s;
}

struct MaxAbs {
    uint64_t value = 0;  // max |coeff|
    int64_t index = 0;   // smallest index attaining it
};

inline MaxAbs max_abs(const CoeffSeries& s) {
    if (s.coeffs.empty()) fail(errc::invalid_argument, "max_abs of empty series");
    MaxAbs best;
    best.value = abs_u64(s.coeffs[0]);
    best.index = 0;
    for (int64_t m = 1; m < s.truncation_len(); ++m) {
        uint64_t a = abs_u64(s.coeffs[static_cast<size_t>(m)]);
        if (a > best.value) {
            best.value = a;
            best.index = m;
        }
    }
    return best;
}

}  // namespace cyclo
