#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wfresil {

enum class ErrorCode {
    SyntaxError,
    InvalidName,
    DuplicateDeclaration,
    CyclicOrder,
    DanglingReference,
    MalformedConstraint,
    InvalidSeed,
    StateBudgetExceeded,
    UnsupportedConstraint,
    SolverNotFound,
    SolverTimeout,
    SolverFailed,
    OutputParseError,
    IndeterminateResult,
    InconsistentStrategy,
    TooLarge,
    InvalidArgument,
};

[[nodiscard]] std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Positioned parse failure; line and column are 1-based.
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t line, std::size_t column, const std::string& message)
        : Error(ErrorCode::SyntaxError,
                std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line), column_(column) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

} // namespace wfresil
