#pragma once

#include <stdexcept>
#include <string>

namespace mlab {

// Error taxonomy shared with the C API (see include/mlab.h). Codes are
// stable; new ones may only be appended.
enum class ErrorCode {
    ok = 0,
    invalid_argument = 1,
    dimension_mismatch = 2,
    domain = 3,
    singular_point = 4,
    evaluation = 5,
    unknown_id = 6,
    io = 7,
    config = 8,
    tolerance = 9,
    internal = 10,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
    if (!cond) fail(code, what);
}

} // namespace mlab
