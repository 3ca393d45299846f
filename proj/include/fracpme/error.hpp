#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fracpme {

enum class ErrorCode {
    MeshAnisotropy,
    InvalidExtent,
    InvalidArgument,
    IndexOutOfRange,
    DomainError,
    CflViolation,
    NonConvergence,
    CornerViolation,
    LengthMismatch,
    IncommensurateGrids,
    DegenerateError,
    ParseError,
    ValidationError,
    IoError,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying one of the library's error codes.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace fracpme
