// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace spde {

/// Error categories shared by the C++ core and the C API status codes.
enum class ErrorCode {
    InvalidArgument = 1,
    Dimension,      // grid too small, length mismatch
    Domain,         // t <= 0, p < 1, tau < 0 ...
    BlowUp,         // non-finite state during time stepping
    NotConverged,   // Picard / optimizer budget exhausted
    Config,         // bad or missing configuration key
    Io,
    UnknownFamily,
    Degenerate,     // sigma below threshold on a path
    Internal,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Raised when a time integration produces a non-finite state.
class BlowUpError : public Error {
public:
    BlowUpError(std::size_t step, const std::string& what)
        : Error(ErrorCode::BlowUp, what), step_(step) {}

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
    if (!cond) fail(code, what);
}

}  // namespace spde
