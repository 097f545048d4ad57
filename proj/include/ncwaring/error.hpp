#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ncw {

enum class ErrorCode {
  // scalar / polynomial kit
  DegreeZero,
  ZeroPolynomial,
  RootsNotConverged,
  // matrix kit
  DimensionMismatch,
  SingularMatrix,
  NonzeroTrace,
  ScalarInput,
  TraceMismatch,
  RepeatedLambda,
  NonzeroDiagonal,
  RepeatedEigenvalue,
  IrrationalSpectrum,
  DeterminantMismatch,
  SingularPrescription,
  ConstructionFailed,
  NotRepresentable,
  // expressions
  SyntaxError,
  UnknownVariable,
  DomainError,
  NotPolynomial,
  // realizations
  PencilSingular,
  // witnesses
  BudgetExhausted,
  DomainEmpty,
  // decompositions
  WitnessNotFound,
  ScalarTarget,
  ZeroTrace,
  TracelessImage,
  DeterminantNotOne,
  SingularTarget,
  NoScalarRoot,
  ThresholdTooLarge,
  DegenerateDirections,
  ConstantFunction,
  VerificationFailed,
  // I/O
  InvalidInput,
};

std::string_view to_string(ErrorCode code);

/// True for outcomes the decomposition contracts report as unsupported
/// rather than as failures (scalar targets, traceless images, ...).
bool is_unsupported(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ncw
