#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sgn {

enum class Severity { Error, Warning };

// One diagnostic with a stable code. line/column are 1-based; 0 means
// "no source position" (object was built programmatically).
struct Diagnostic {
    Severity severity = Severity::Error;
    std::string code;
    std::string message;
    int line = 0;
    int column = 0;
};

using ValidationReport = std::vector<Diagnostic>;

inline bool has_errors(const ValidationReport& report) {
    for (const auto& d : report)
        if (d.severity == Severity::Error) return true;
    return false;
}

enum class ErrorCode {
    UnknownSort,
    UnknownConstructor,
    UnknownRelation,
    SortMismatch,
    InvalidMorphism,
    SystemMismatch,
    ProbSum,
    NonpositiveProb,
    TimeOrder,
    ClosureViolation,
    IndexOutOfRange,
    EmptySeries,
    InsufficientData,
    DimensionMismatch,
    InvalidScenario,
    IoError,
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::UnknownSort: return "UNKNOWN_SORT";
        case ErrorCode::UnknownConstructor: return "UNKNOWN_CONSTRUCTOR";
        case ErrorCode::UnknownRelation: return "UNKNOWN_RELATION";
        case ErrorCode::SortMismatch: return "SORT_MISMATCH";
        case ErrorCode::InvalidMorphism: return "INVALID_MORPHISM";
        case ErrorCode::SystemMismatch: return "SYSTEM_MISMATCH";
        case ErrorCode::ProbSum: return "PROB_SUM";
        case ErrorCode::NonpositiveProb: return "NONPOSITIVE_PROB";
        case ErrorCode::TimeOrder: return "TIME_ORDER";
        case ErrorCode::ClosureViolation: return "CLOSURE_VIOLATION";
        case ErrorCode::IndexOutOfRange: return "INDEX_OUT_OF_RANGE";
        case ErrorCode::EmptySeries: return "EMPTY_SERIES";
        case ErrorCode::InsufficientData: return "INSUFFICIENT_DATA";
        case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
        case ErrorCode::InvalidScenario: return "INVALID_SCENARIO";
        case ErrorCode::IoError: return "IO_ERROR";
    }
    return "UNKNOWN";
}

// Thrown for contract violations on operations that have a hard error path.
// Validation-style operations never throw; they return a ValidationReport.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace sgn
