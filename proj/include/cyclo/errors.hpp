#pragma once
// Error taxonomy shared by the library and the CLI exit-code mapping.
// Every failure is a thrown cyclo::error carrying one of these kinds;
// arithmetic never wraps silently and caps never truncate silently.

#include <stdexcept>
#include <string>
#include <utility>

namespace cyclo {

enum class errc {
    invalid_argument,  // domain violation in the inputs
    overflow,          // a 64-bit operation would wrap
    not_found,         // a capped search exhausted its cap
    resource,          // a size/memory budget or hard cap was exceeded
    io,                // file read/write failure
    internal,          // a checked internal law failed (always a bug)
};

inline const char* errc_name(errc k) {
    switch (k) {
        case errc::invalid_argument: return "invalid_argument";
        case errc::overflow:         return "overflow";
        case errc::not_found:        return "not_found";
        case errc::resource:         return "resource";
        case errc::io:               return "io";
        case errc::internal:         return "internal";
    }
    return "unknown";
}

class error : public std::runtime_error {
public:
    error(errc kind, std::string msg)
        : std::runtime_error(std::move(msg)), kind_(kind) {}
    errc kind() const noexcept { return kind_; }

private:
    errc kind_;
};

[[noreturn]] inline void fail(errc kind, const std::string& msg) {
    throw error(kind, msg);
}

}  // namespace cyclo
