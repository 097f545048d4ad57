#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "ncwaring/expr.hpp"
#include "ncwaring/unipoly.hpp"

namespace ncw {

enum class SamplingMode {
  General,         // every entry uniform in [-B, B]
  UpperTriangular  // entries below the diagonal are zero
};

struct WitnessOptions {
  std::size_t n = 2;
  bool require_nonzero = true;
  std::size_t budget = 1000;
  long box = 5;
  std::uint64_t seed = 0;
  SamplingMode mode = SamplingMode::General;
  bool require_nonzero_trace = false;
  bool require_rational_spectrum = false;
};

/// A tuple X with exact certificates on the value r(X).
struct WitnessCertificate {
  MatrixTuple<Rational> x;
  std::size_t n = 0;
  UniPoly<Rational> chi;
  bool disc_nonzero = false;
  bool det_nonzero = false;
  Matrix<Rational> value;
  std::uint64_t seed = 0;
  std::size_t trial_index = 0;
  long box = 0;
};

/// Samples integer tuples (trial t draws from its own stream of `seed`, in the
/// box B * 2^(t / max(1, budget / 4))) and returns the first whose value has a
/// squarefree characteristic polynomial (and nonzero determinant / trace and
/// rational spectrum as requested). Throws BudgetExhausted with acceptance
/// statistics, DomainEmpty when no sample was in the domain.
WitnessCertificate find_distinct_eigs(const RatExpr& e, const WitnessOptions& options);

/// Recomputes value, chi and both certificates from scratch.
bool verify_certificate(const RatExpr& e, const WitnessCertificate& cert);

/// Certificate at size a p + b q on a direct sum of a p-blocks and b q-blocks.
/// The first p-block and q-block are the given certificates, the others fresh
/// samples; on a collision (non-squarefree glued chi) every block is redrawn
/// (budget 100). Throws BudgetExhausted.
WitnessCertificate glue_blocks(const RatExpr& e, const WitnessCertificate& cert_p, const WitnessCertificate& cert_q,
                               std::size_t a, std::size_t b, std::uint64_t seed = 0);

/// Certificate at size n through sizes p < q from sylvester_representation.
WitnessCertificate glued_witness(const RatExpr& e, std::size_t n, std::size_t p, std::size_t q,
                                 const WitnessOptions& options);

enum class ProfileKind { ConstantScalar, TwoPointSpectrum, Generic };

struct SpectralProfile {
  ProfileKind kind = ProfileKind::Generic;
  std::optional<Rational> lambda;  // for ConstantScalar
  std::size_t samples = 0;
  std::size_t in_domain = 0;
  std::size_t max_distinct = 0;    // most distinct eigenvalues seen in one value
  bool square_scalar = false;      // value^2 scalar in every sample
  UniPoly<Rational> common_factor; // gcd of all sampled characteristic polynomials
};

/// Sampling evidence for constant values and two-point spectra. At n <= 2 the
/// two-point signature additionally requires value^2 to be scalar, since every
/// 2 x 2 value trivially has at most two eigenvalues.
SpectralProfile spectral_profile(const RatExpr& e, std::size_t n, std::size_t samples, std::uint64_t seed = 0,
                                 long box = 5);

std::string to_string(ProfileKind kind);

/// m integer n x n matrices drawn from the stream (seed, index).
MatrixTuple<Rational> sample_tuple(std::size_t m, std::size_t n, long box, SamplingMode mode, std::uint64_t seed,
                                   std::uint64_t index);

}  // namespace ncw
