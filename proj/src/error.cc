#include "bellsim/error.h"

namespace bellsim {

std::string_view error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NotHermitian:
            return "NotHermitian";
        case ErrorKind::DimensionMismatch:
            return "DimensionMismatch";
        case ErrorKind::NotUnit:
            return "NotUnit";
        case ErrorKind::NotNormalized:
            return "NotNormalized";
        case ErrorKind::NotDensity:
            return "NotDensity";
        case ErrorKind::NotRotation:
            return "NotRotation";
        case ErrorKind::GridTooCoarse:
            return "GridTooCoarse";
        case ErrorKind::TooFewSamples:
            return "TooFewSamples";
        case ErrorKind::UnknownSource:
            return "UnknownSource";
        case ErrorKind::InvalidConfig:
            return "InvalidConfig";
        case ErrorKind::ParseError:
            return "ParseError";
        case ErrorKind::BadOutcome:
            return "BadOutcome";
        case ErrorKind::UndefinedCell:
            return "UndefinedCell";
        case ErrorKind::NotPermissible:
            return "NotPermissible";
        case ErrorKind::GroupTooLarge:
            return "GroupTooLarge";
        case ErrorKind::Io:
            return "Io";
    }
    return "Unknown";
}

BellError::BellError(ErrorKind kind, const std::string &message)
    : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message), kind_(kind) {
}

ParseFailure::ParseFailure(ErrorKind kind, size_t line, const std::string &message)
    : BellError(kind, "line " + std::to_string(line) + ": " + message), line_(line) {
}

}  // namespace bellsim
