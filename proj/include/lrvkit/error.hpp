#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lrvkit {

enum class ErrorCode {
    InvalidLength,
    BandwidthOutOfRange,
    NonFiniteInput,
    LagOutOfRange,
    InvalidBandwidth,
    InvalidBounds,
    DegenerateOrdinates,
    InvalidF0,
    BreakOutOfRange,
    InvalidSpec,
    InsufficientReps,
    InvalidArgument,
    ConfigError,
    IoError,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-readable error code. Every precondition
/// failure in the library is reported through this type.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace lrvkit
