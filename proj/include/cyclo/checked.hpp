#pragma once
// Overflow-checked 64-bit helpers.  All arithmetic that could leave the
// representable range goes through these; a hit raises errc::overflow with
// the caller-supplied context string.

#include <cstdint>
#include <string>

#include "errors.hpp"

namespace cyclo {

inline int64_t checked_add(int64_t a, int64_t b, const char* what) {
    int64_t r;
    if (__builtin_add_overflow(a, b, &r))
        fail(errc::overflow, std::string(what) + ": 64-bit add overflow");
    return r;
}

inline int64_t checked_sub(int64_t a, int64_t b, const char* what) {
    int64_t r;
    if (__builtin_sub_overflow(a, b, &r))
        fail(errc::overflow, std::string(what) + ": 64-bit subtract overflow");
    return r;
}

inline int64_t checked_mul(int64_t a, int64_t b, const char* what) {
    int64_t r;
    if (__builtin_mul_overflow(a, b, &r))
        fail(errc::overflow, std::string(what) + ": 64-bit multiply overflow");
    return r;
}

inline uint64_t checked_add_u(uint64_t a, uint64_t b, const char* what) {
    uint64_t r;
    if (__builtin_add_overflow(a, b, &r))
        fail(errc::overflow, std::string(what) + ": 64-bit add overflow");
    return r;
}

inline uint64_t checked_mul_u(uint64_t a, uint64_t b, const char* what) {
    uint64_t r;
    if (__builtin_mul_overflow(a, b, &r))
        fail(errc::overflow, std::string(what) + ": 64-bit multiply overflow");
    return r;
}

// |v| as an unsigned value; correct for INT64_MIN as well.
inline uint64_t abs_u64(int64_t v) {
    uint64_t u = static_cast<uint64_t>(v);
    return v < 0 ? ~u + 1 : u;
}

}  // namespace cyclo
