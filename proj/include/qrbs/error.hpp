#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace qrbs {

enum class ErrorCode {
    Syntax,
    EmptyNetwork,
    UnknownAtom,
    DuplicateConsequent,
    Cycle,
    UnassignedAtom,
    MissingInput,
    IndexOutOfRange,
    ControlEqualsTarget,
    WriteAfterMeasure,
    ClassicalBitReused,
    CapExceeded,
    BudgetExceeded,
    NotUnitary,
    SuperposedMeasurement,
    DimensionMismatch,
    NoRelevantComplex,
    OneHotViolation,
    InvalidArgument,
    Io,
};

const char* to_string(ErrorCode code) noexcept;

/// Base class for every domain error raised by the library.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

/// Parse failure with a 1-based source position.
class SyntaxError : public Error {
  public:
    SyntaxError(std::size_t line, std::size_t column, const std::string& what);

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

  private:
    std::size_t line_;
    std::size_t column_;
};

/// Dependency cycle between facts; `cycle()` lists one cycle in dependency order.
class CycleError : public Error {
  public:
    explicit CycleError(std::vector<std::string> cycle);

    const std::vector<std::string>& cycle() const noexcept { return cycle_; }

  private:
    std::vector<std::string> cycle_;
};

}  // namespace qrbs
