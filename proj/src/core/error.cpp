// SPDX-License-Identifier: Apache-2.0
#include "spde/error.hpp"

namespace spde {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "invalid-argument";
        case ErrorCode::Dimension: return "dimension";
        case ErrorCode::Domain: return "domain";
        case ErrorCode::BlowUp: return "blow-up";
        case ErrorCode::NotConverged: return "not-converged";
        case ErrorCode::Config: return "config";
        case ErrorCode::Io: return "io";
        case ErrorCode::UnknownFamily: return "unknown-family";
        case ErrorCode::Degenerate: return "degenerate";
        case ErrorCode::Internal: return "internal";
    }
    return "unknown";
}

}  // namespace spde
