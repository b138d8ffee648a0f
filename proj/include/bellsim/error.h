#ifndef BELLSIM_ERROR_H
#define BELLSIM_ERROR_H

#include <stdexcept>
#include <string>
#include <string_view>

namespace bellsim {

enum class ErrorKind {
    NotHermitian,
    DimensionMismatch,
    NotUnit,
    NotNormalized,
    NotDensity,
    NotRotation,
    GridTooCoarse,
    TooFewSamples,
    UnknownSource,
    InvalidConfig,
    ParseError,
    BadOutcome,
    UndefinedCell,
    NotPermissible,
    GroupTooLarge,
    Io,
};

std::string_view error_kind_name(ErrorKind kind);

/// All library failures surface as this exception; `kind()` identifies the failed contract.
class BellError : public std::runtime_error {
   public:
    BellError(ErrorKind kind, const std::string &message);

    ErrorKind kind() const noexcept {
        return kind_;
    }

   private:
    ErrorKind kind_;
};

/// A BellError carrying the 1-based line number of the offending input line.
class ParseFailure : public BellError {
   public:
    ParseFailure(ErrorKind kind, size_t line, const std::string &message);

    size_t line() const noexcept {
        return line_;
    }

   private:
    size_t line_;
};

}  // namespace bellsim

#endif
