#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qhc {

enum class ErrorKind {
  NonAssociativeTable,
  NoIdentity,
  NoInverse,
  UnsupportedDescriptor,
  EmptyGeneratorSet,
  NotASubgroup,
  NonAbelianGroup,
  InvalidMeasure,
  UnsupportedGroup,
  InvalidRep,
  NonUnitVector,
  NotNormalizedAtIdentity,
  NotPositiveDefinite,
  DimensionMismatch,
  RankNotTwo,
  RepresentationDimensionOne,
  EmptyInput,
  NotAState,
  NotAnAlgebra,
  FixedPointsNotAlgebra,
  ParseError,
  NotTracePreserving,
  NumericalFailure,
};

std::string_view error_kind_name(ErrorKind kind);

/// Thrown by every validating operation in the library. `kind()` is stable and
/// is what the command-line tool serializes into its error object.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qhc
