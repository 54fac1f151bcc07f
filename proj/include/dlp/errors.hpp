#pragma once

#include <stdexcept>
#include <string>

namespace dlp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define DLP_DEFINE_ERROR(Name)                       \
  class Name : public Error {                        \
   public:                                           \
    explicit Name(const std::string& what)           \
        : Error(std::string(#Name ": ") + what) {}   \
  };

DLP_DEFINE_ERROR(DivisionByZero)
DLP_DEFINE_ERROR(ParseError)
DLP_DEFINE_ERROR(DegreeOutOfRange)
DLP_DEFINE_ERROR(NormalizationError)
DLP_DEFINE_ERROR(DegenerateInput)
DLP_DEFINE_ERROR(OutOfDomain)
DLP_DEFINE_ERROR(ShapeError)
DLP_DEFINE_ERROR(UnsupportedPattern)
DLP_DEFINE_ERROR(PreconditionViolation)
DLP_DEFINE_ERROR(InvalidCode)
DLP_DEFINE_ERROR(InvalidArgument)
DLP_DEFINE_ERROR(LPInfeasible)

#undef DLP_DEFINE_ERROR

/// Raised when an internal self-check fails. Always a bug.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what)
      : std::logic_error("InternalError: " + what) {}
};

}  // namespace dlp
