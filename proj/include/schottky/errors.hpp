#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace schottky {

enum class ErrorCode {
    InvalidGraph,
    InvalidRank,
    InvalidTransitionMatrix,
    EnumerationBudgetExceeded,
    RequiresIrreducible,
    NotAdmissible,
    ConvergenceFailure,
    TruncationTooSmall,
    InvalidParameter,
    SummabilityViolation,
    InsufficientSpectrum,
    RequiresEvenTriple,
    PresentationInvalid,
    RequiresSquares,
    NotBMReducible,
    InvalidTable,
    DegenerateEuclidean,
    InvalidPolygon,
    BracketFailure,
    UsageError,
    UnsupportedFormat,
    IoError,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidGraph: return "InvalidGraph";
    case ErrorCode::InvalidRank: return "InvalidRank";
    case ErrorCode::InvalidTransitionMatrix: return "InvalidTransitionMatrix";
    case ErrorCode::EnumerationBudgetExceeded: return "EnumerationBudgetExceeded";
    case ErrorCode::RequiresIrreducible: return "RequiresIrreducible";
    case ErrorCode::NotAdmissible: return "NotAdmissible";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::SummabilityViolation: return "SummabilityViolation";
    case ErrorCode::InsufficientSpectrum: return "InsufficientSpectrum";
    case ErrorCode::RequiresEvenTriple: return "RequiresEvenTriple";
    case ErrorCode::PresentationInvalid: return "PresentationInvalid";
    case ErrorCode::RequiresSquares: return "RequiresSquares";
    case ErrorCode::NotBMReducible: return "NotBMReducible";
    case ErrorCode::InvalidTable: return "InvalidTable";
    case ErrorCode::DegenerateEuclidean: return "DegenerateEuclidean";
    case ErrorCode::InvalidPolygon: return "InvalidPolygon";
    case ErrorCode::BracketFailure: return "BracketFailure";
    case ErrorCode::UsageError: return "UsageError";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

/// Every failure in the library is reported through this type. `witness`
/// names the offending object (a flag, a word, a matrix entry) and is empty
/// when there is nothing more specific to point at.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::string witness = {})
        : std::runtime_error(std::string(to_string(code)) + ": " + message),
          code_(code), message_(message), witness_(std::move(witness)) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& message() const noexcept { return message_; }
    const std::string& witness() const noexcept { return witness_; }

private:
    ErrorCode code_;
    std::string message_;
    std::string witness_;
};

} // namespace schottky
