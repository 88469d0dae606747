#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace toricqc {

enum class ErrorCode {
    // presentation
    EmptySemistableLocus,
    InfiniteStabilizer,
    RankDeficient,
    GeneratorNotThetaPositive,
    NotEffective,
    // cohomology
    NonConfluentRingSpec,
    SingularPairingMatrix,
    MissingSectorRing,
    NotNilpotent,
    // series
    TwistedProductUnsupported,
    ZeroZCoefficient,
    UnknownDirection,
    NontruncatingArgument,
    // ifunction
    MissingTwistedClass,
    SemipositivityViolated,
    // mirror
    NotUnital,
    PositivePowersRemain,
    FrameResidualTooLow,
    UnsupportedEvaluation,
    // plumbing
    ParseError,
    ValidationError,
    DimensionMismatch,
    NotIntegral,
    Overflow,
};

constexpr std::string_view error_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::EmptySemistableLocus: return "EmptySemistableLocus";
        case ErrorCode::InfiniteStabilizer: return "InfiniteStabilizer";
        case ErrorCode::RankDeficient: return "RankDeficient";
        case ErrorCode::GeneratorNotThetaPositive: return "GeneratorNotThetaPositive";
        case ErrorCode::NotEffective: return "NotEffective";
        case ErrorCode::NonConfluentRingSpec: return "NonConfluentRingSpec";
        case ErrorCode::SingularPairingMatrix: return "SingularPairingMatrix";
        case ErrorCode::MissingSectorRing: return "MissingSectorRing";
        case ErrorCode::NotNilpotent: return "NotNilpotent";
        case ErrorCode::TwistedProductUnsupported: return "TwistedProductUnsupported";
        case ErrorCode::ZeroZCoefficient: return "ZeroZCoefficient";
        case ErrorCode::UnknownDirection: return "UnknownDirection";
        case ErrorCode::NontruncatingArgument: return "NontruncatingArgument";
        case ErrorCode::MissingTwistedClass: return "MissingTwistedClass";
        case ErrorCode::SemipositivityViolated: return "SemipositivityViolated";
        case ErrorCode::NotUnital: return "NotUnital";
        case ErrorCode::PositivePowersRemain: return "PositivePowersRemain";
        case ErrorCode::FrameResidualTooLow: return "FrameResidualTooLow";
        case ErrorCode::UnsupportedEvaluation: return "UnsupportedEvaluation";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::ValidationError: return "ValidationError";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NotIntegral: return "NotIntegral";
        case ErrorCode::Overflow: return "Overflow";
    }
    return "Unknown";
}

/// Single exception type for the library; `code()` identifies the failure.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

    /// Validation-class failures (bad input data) vs. computation failures.
    bool is_validation() const noexcept {
        switch (code_) {
            case ErrorCode::EmptySemistableLocus:
            case ErrorCode::InfiniteStabilizer:
            case ErrorCode::RankDeficient:
            case ErrorCode::GeneratorNotThetaPositive:
            case ErrorCode::NonConfluentRingSpec:
            case ErrorCode::SingularPairingMatrix:
            case ErrorCode::MissingSectorRing:
            case ErrorCode::ParseError:
            case ErrorCode::ValidationError:
            case ErrorCode::DimensionMismatch:
            case ErrorCode::UnknownDirection:
            case ErrorCode::UnsupportedEvaluation:
                return true;
            default:
                return false;
        }
    }

private:
    ErrorCode code_;
};

}  // namespace toricqc
