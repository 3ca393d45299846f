#include "fracpme/error.hpp"

namespace fracpme {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::MeshAnisotropy: return "MeshAnisotropy";
        case ErrorCode::InvalidExtent: return "InvalidExtent";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::CflViolation: return "CflViolation";
        case ErrorCode::NonConvergence: return "NonConvergence";
        case ErrorCode::CornerViolation: return "CornerViolation";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::IncommensurateGrids: return "IncommensurateGrids";
        case ErrorCode::DegenerateError: return "DegenerateError";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::ValidationError: return "ValidationError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace fracpme
