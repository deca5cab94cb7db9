#include "spiked/error.hpp"

#include <cmath>

namespace spiked {

std::string_view error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidMatrix: return "InvalidMatrix";
        case ErrorCode::GammaNearZero: return "GammaNearZero";
        case ErrorCode::OutOfDomain: return "OutOfDomain";
        case ErrorCode::MuZeroDivergent: return "MuZeroDivergent";
        case ErrorCode::RegimeBoundary: return "RegimeBoundary";
        case ErrorCode::NonZeroMu: return "NonZeroMu";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
    }
    return "Unknown";
}

void require_off_boundary(double c, const char* where) {
    if (!(std::abs(c - 1.0) >= kRegimeWindow)) {
        throw Error(ErrorCode::RegimeBoundary,
                    std::string(where) + ": c = " + std::to_string(c) + " is within 0.02 of 1");
    }
}

}  // namespace spiked
