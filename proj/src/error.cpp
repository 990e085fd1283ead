#include "qrbs/error.hpp"

#include <utility>

namespace qrbs {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::Syntax: return "syntax error";
        case ErrorCode::EmptyNetwork: return "empty network";
        case ErrorCode::UnknownAtom: return "unknown atom";
        case ErrorCode::DuplicateConsequent: return "duplicate consequent";
        case ErrorCode::Cycle: return "cycle detected";
        case ErrorCode::UnassignedAtom: return "unassigned atom";
        case ErrorCode::MissingInput: return "missing input";
        case ErrorCode::IndexOutOfRange: return "index out of range";
        case ErrorCode::ControlEqualsTarget: return "control equals target";
        case ErrorCode::WriteAfterMeasure: return "write after measure";
        case ErrorCode::ClassicalBitReused: return "classical bit reused";
        case ErrorCode::CapExceeded: return "cap exceeded";
        case ErrorCode::BudgetExceeded: return "ancilla budget exceeded";
        case ErrorCode::NotUnitary: return "not a unitary gate";
        case ErrorCode::SuperposedMeasurement: return "superposed measurement";
        case ErrorCode::DimensionMismatch: return "dimension mismatch";
        case ErrorCode::NoRelevantComplex: return "no relevant complex";
        case ErrorCode::OneHotViolation: return "one-hot violation";
        case ErrorCode::InvalidArgument: return "invalid argument";
        case ErrorCode::Io: return "i/o error";
    }
    return "unknown error";
}

SyntaxError::SyntaxError(std::size_t line, std::size_t column, const std::string& what)
    : Error(ErrorCode::Syntax,
            "syntax error at " + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

namespace {

std::string describe_cycle(const std::vector<std::string>& cycle) {
    std::string text = "cycle detected:";
    for (const auto& fact : cycle) {
        text += " " + fact + " ->";
    }
    if (!cycle.empty()) {
        text += " " + cycle.front();
    }
    return text;
}

}  // namespace

CycleError::CycleError(std::vector<std::string> cycle)
    : Error(ErrorCode::Cycle, describe_cycle(cycle)), cycle_(std::move(cycle)) {}

}  // namespace qrbs
