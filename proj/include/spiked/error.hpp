#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spiked {

enum class ErrorCode {
    InvalidMatrix,
    GammaNearZero,
    OutOfDomain,
    MuZeroDivergent,
    RegimeBoundary,
    NonZeroMu,
    InvalidConfig,
};

std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

enum class Regime { Under, Over };

inline const char* regime_name(Regime r) { return r == Regime::Under ? "under" : "over"; }

// c = 1 itself is tagged Over; only ridge problems (mu > 0) can reach it.
inline Regime regime_of(double c) { return c < 1.0 ? Regime::Under : Regime::Over; }

// Half-width of the excluded window around c = 1.
inline constexpr double kRegimeWindow = 0.02;

void require_off_boundary(double c, const char* where);

}  // namespace spiked
