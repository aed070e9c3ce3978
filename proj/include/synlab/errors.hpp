#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace synlab {

enum class ErrorCode {
    InvalidGrammar,
    DegenerateGrammar,
    IncompleteProgram,
    ParseError,
    InvalidTrajectory,
    RangeError,
    A4Violation,
    CeilingTooSmall,
    IndexError,
    Unidentifiable,
    OrbitUncovered,
    TooLarge,
    InvalidArgument,
    IoError,
};

const char* error_code_name(ErrorCode code);

/// Exception carrying a machine-checkable code and, for stream errors,
/// the symbol position at which decoding stopped.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
          code_(code) {}

    Error(ErrorCode code, const std::string& message, std::size_t position)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message +
                             " (at position " + std::to_string(position) + ")"),
          code_(code), position_(position), has_position_(true) {}

    ErrorCode code() const noexcept { return code_; }
    bool has_position() const noexcept { return has_position_; }
    std::size_t position() const noexcept { return position_; }

private:
    ErrorCode code_;
    std::size_t position_ = 0;
    bool has_position_ = false;
};

} // namespace synlab
