#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace modtopo {

enum class ErrorCode {
    DimensionMismatch,
    NotAComplex,
    NotAHomomorphism,
    InvalidArgument,
    DegreeOutOfRange,
    InvalidDimension,
    NoUnitSummand,
    AmbientMismatch,
    ShapeMismatch,
    LengthMismatch,
    NotModTwo,
    NotOddPrime,
    Inhomogeneous,
    Undetermined,
    WrongDegree,
    InvalidPresentation,
    NotConfluent,
    ValueTooLarge,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::NotAComplex: return "NOT_A_COMPLEX";
    case ErrorCode::NotAHomomorphism: return "NOT_A_HOMOMORPHISM";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::DegreeOutOfRange: return "DEGREE_OUT_OF_RANGE";
    case ErrorCode::InvalidDimension: return "INVALID_DIMENSION";
    case ErrorCode::NoUnitSummand: return "NO_UNIT_SUMMAND";
    case ErrorCode::AmbientMismatch: return "AMBIENT_MISMATCH";
    case ErrorCode::ShapeMismatch: return "SHAPE_MISMATCH";
    case ErrorCode::LengthMismatch: return "LENGTH_MISMATCH";
    case ErrorCode::NotModTwo: return "NOT_MOD_TWO";
    case ErrorCode::NotOddPrime: return "NOT_ODD_PRIME";
    case ErrorCode::Inhomogeneous: return "INHOMOGENEOUS";
    case ErrorCode::Undetermined: return "UNDETERMINED";
    case ErrorCode::WrongDegree: return "WRONG_DEGREE";
    case ErrorCode::InvalidPresentation: return "INVALID_PRESENTATION";
    case ErrorCode::NotConfluent: return "NOT_CONFLUENT";
    case ErrorCode::ValueTooLarge: return "VALUE_TOO_LARGE";
    }
    return "UNKNOWN";
}

/// Domain error raised by every module. The code is stable and is what the
/// CLI reports; the message is for humans.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace modtopo
