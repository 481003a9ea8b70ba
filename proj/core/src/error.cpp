#include "wfresil/error.hpp"

namespace wfresil {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::InvalidName: return "InvalidName";
    case ErrorCode::DuplicateDeclaration: return "DuplicateDeclaration";
    case ErrorCode::CyclicOrder: return "CyclicOrder";
    case ErrorCode::DanglingReference: return "DanglingReference";
    case ErrorCode::MalformedConstraint: return "MalformedConstraint";
    case ErrorCode::InvalidSeed: return "InvalidSeed";
    case ErrorCode::StateBudgetExceeded: return "StateBudgetExceeded";
    case ErrorCode::UnsupportedConstraint: return "UnsupportedConstraint";
    case ErrorCode::SolverNotFound: return "SolverNotFound";
    case ErrorCode::SolverTimeout: return "SolverTimeout";
    case ErrorCode::SolverFailed: return "SolverFailed";
    case ErrorCode::OutputParseError: return "OutputParseError";
    case ErrorCode::IndeterminateResult: return "IndeterminateResult";
    case ErrorCode::InconsistentStrategy: return "InconsistentStrategy";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

} // namespace wfresil
