#include "synlab/errors.hpp"

namespace synlab {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidGrammar: return "InvalidGrammar";
        case ErrorCode::DegenerateGrammar: return "DegenerateGrammar";
        case ErrorCode::IncompleteProgram: return "IncompleteProgram";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::InvalidTrajectory: return "InvalidTrajectory";
        case ErrorCode::RangeError: return "RangeError";
        case ErrorCode::A4Violation: return "A4Violation";
        case ErrorCode::CeilingTooSmall: return "CeilingTooSmall";
        case ErrorCode::IndexError: return "IndexError";
        case ErrorCode::Unidentifiable: return "Unidentifiable";
        case ErrorCode::OrbitUncovered: return "OrbitUncovered";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::IoError: return "IoError";
    }
    return "UnknownError";
}

} // namespace synlab
