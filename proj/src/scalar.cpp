#include "ncwaring/scalar.hpp"

#include <cctype>
#include <cstdio>

#include "ncwaring/error.hpp"

namespace ncw {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegreeZero: return "DegreeZero";
    case ErrorCode::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorCode::RootsNotConverged: return "RootsNotConverged";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::NonzeroTrace: return "NonzeroTrace";
    case ErrorCode::ScalarInput: return "ScalarInput";
    case ErrorCode::TraceMismatch: return "TraceMismatch";
    case ErrorCode::RepeatedLambda: return "RepeatedLambda";
    case ErrorCode::NonzeroDiagonal: return "NonzeroDiagonal";
    case ErrorCode::RepeatedEigenvalue: return "RepeatedEigenvalue";
    case ErrorCode::IrrationalSpectrum: return "IrrationalSpectrum";
    case ErrorCode::DeterminantMismatch: return "DeterminantMismatch";
    case ErrorCode::SingularPrescription: return "SingularPrescription";
    case ErrorCode::ConstructionFailed: return "ConstructionFailed";
    case ErrorCode::NotRepresentable: return "NotRepresentable";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NotPolynomial: return "NotPolynomial";
    case ErrorCode::PencilSingular: return "PencilSingular";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
    case ErrorCode::DomainEmpty: return "DomainEmpty";
    case ErrorCode::WitnessNotFound: return "WitnessNotFound";
    case ErrorCode::ScalarTarget: return "ScalarTarget";
    case ErrorCode::ZeroTrace: return "ZeroTrace";
    case ErrorCode::TracelessImage: return "TracelessImage";
    case ErrorCode::DeterminantNotOne: return "DeterminantNotOne";
    case ErrorCode::SingularTarget: return "SingularTarget";
    case ErrorCode::NoScalarRoot: return "NoScalarRoot";
    case ErrorCode::ThresholdTooLarge: return "ThresholdTooLarge";
    case ErrorCode::DegenerateDirections: return "DegenerateDirections";
    case ErrorCode::ConstantFunction: return "ConstantFunction";
    case ErrorCode::VerificationFailed: return "VerificationFailed";
    case ErrorCode::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

bool is_unsupported(ErrorCode code) {
  switch (code) {
    case ErrorCode::ScalarTarget:
    case ErrorCode::ZeroTrace:
    case ErrorCode::TracelessImage:
    case ErrorCode::NoScalarRoot:
    case ErrorCode::ThresholdTooLarge:
      return true;
    default:
      return false;
  }
}

Rational parse_rational(std::string_view text) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  }
  if (s.empty()) throw Error(ErrorCode::InvalidInput, "empty rational literal");

  auto dot = s.find('.');
  if (dot != std::string::npos) {
    if (s.find('/') != std::string::npos) {
      throw Error(ErrorCode::InvalidInput, "malformed rational literal '" + s + "'");
    }
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::size_t frac_len = s.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+") {
      throw Error(ErrorCode::InvalidInput, "malformed rational literal '" + s + "'");
    }
    mpz_class num;
    if (num.set_str(digits[0] == '+' ? digits.substr(1) : digits, 10) != 0) {
      throw Error(ErrorCode::InvalidInput, "malformed rational literal '" + s + "'");
    }
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
    Rational q(num, den);
    q.canonicalize();
    return q;
  }

  if (s[0] == '+') s.erase(0, 1);
  Rational q;
  if (q.set_str(s, 10) != 0) {
    throw Error(ErrorCode::InvalidInput, "malformed rational literal '" + s + "'");
  }
  if (sgn(q.get_den()) == 0) throw Error(ErrorCode::InvalidInput, "zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(10); }

std::string to_string(const Complex& z) {
  char buf[96];
  if (z.imag() == 0.0) {
    std::snprintf(buf, sizeof(buf), "%.12g", z.real());
  } else {
    std::snprintf(buf, sizeof(buf), "%.12g%+.12gi", z.real(), z.imag());
  }
  return buf;
}

Rational rational_from_double(double x) {
  Rational q(x);
  q.canonicalize();
  return q;
}

}  // namespace ncw
