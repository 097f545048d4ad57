#include "ncwaring/witness.hpp"

#include <algorithm>

#include "ncwaring/charpoly.hpp"
#include "ncwaring/factorization.hpp"
#include "ncwaring/rng.hpp"

namespace ncw {

MatrixTuple<Rational> sample_tuple(std::size_t m, std::size_t n, long box, SamplingMode mode, std::uint64_t seed,
                                   std::uint64_t index) {
  Rng rng = Rng::stream(seed, index);
  MatrixTuple<Rational> x;
  for (std::size_t k = 0; k < m; ++k) {
    Matrix<Rational> a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (mode == SamplingMode::UpperTriangular && j < i) continue;
        a(i, j) = rng.uniform_int(-box, box);
      }
    }
    x.blocks.push_back(std::move(a));
  }
  return x;
}

namespace {

std::optional<Matrix<Rational>> try_eval(const RatExpr& e, const MatrixTuple<Rational>& x) {
  try {
    return eval_expr(e, x);
  } catch (const Error& err) {
    if (err.code() == ErrorCode::DomainError) return std::nullopt;
    throw;
  }
}

std::size_t distinct_count(const UniPoly<Rational>& chi) {
  return static_cast<std::size_t>(std::max(0, squarefree_part(chi).degree()));
}

WitnessCertificate certify(const MatrixTuple<Rational>& x, Matrix<Rational> value) {
  WitnessCertificate c;
  c.n = value.rows();
  c.x = x;
  c.chi = charpoly(value);
  c.disc_nonzero = is_squarefree(c.chi);
  c.det_nonzero = sgn(c.chi.coeff(0)) != 0;
  c.value = std::move(value);
  return c;
}

}  // namespace

WitnessCertificate find_distinct_eigs(const RatExpr& e, const WitnessOptions& options) {
  if (options.n == 0 || options.budget == 0) throw Error(ErrorCode::InvalidInput, "n and budget must be positive");
  const std::size_t escalate = std::max<std::size_t>(1, options.budget / 4);
  std::size_t in_domain = 0;
  std::size_t max_distinct = 0;
  for (std::size_t t = 0; t < options.budget; ++t) {
    const long box = options.box << std::min<std::size_t>(t / escalate, 20);
    const MatrixTuple<Rational> x = sample_tuple(e.variables(), options.n, box, options.mode, options.seed, t);
    auto value = try_eval(e, x);
    if (!value) continue;
    ++in_domain;
    WitnessCertificate c = certify(x, std::move(*value));
    max_distinct = std::max(max_distinct, distinct_count(c.chi));
    if (!c.disc_nonzero) continue;
    if (options.require_nonzero && !c.det_nonzero) continue;
    if (options.require_nonzero_trace && sgn(trace(c.value)) == 0) continue;
    if (options.require_rational_spectrum && !exact_spectrum(c.value)) continue;
    c.seed = options.seed;
    c.trial_index = t;
    c.box = box;
    return c;
  }
  if (in_domain == 0) {
    throw Error(ErrorCode::DomainEmpty, "none of " + std::to_string(options.budget) + " samples was in the domain");
  }
  std::string msg = std::to_string(options.budget) + " samples, " + std::to_string(in_domain) +
                    " in the domain, at most " + std::to_string(max_distinct) + " distinct eigenvalues seen";
  if (max_distinct < options.n) {
    msg += "; no value reached " + std::to_string(options.n) +
           " distinct eigenvalues, which suggests a structural obstruction (e.g. a k-central function) "
           "rather than bad luck";
  } else {
    msg += "; distinct spectra occurred but the remaining requirements failed";
  }
  throw Error(ErrorCode::BudgetExhausted, msg);
}

bool verify_certificate(const RatExpr& e, const WitnessCertificate& cert) {
  auto value = try_eval(e, cert.x);
  if (!value || !(*value == cert.value) || value->rows() != cert.n) return false;
  const UniPoly<Rational> chi = charpoly(*value);
  if (!(chi == cert.chi)) return false;
  if (cert.disc_nonzero && !is_squarefree(chi)) return false;
  if (cert.det_nonzero && sgn(chi.coeff(0)) == 0) return false;
  return true;
}

WitnessCertificate glue_blocks(const RatExpr& e, const WitnessCertificate& cert_p, const WitnessCertificate& cert_q,
                               std::size_t a, std::size_t b, std::uint64_t seed) {
  if (a + b == 0) throw Error(ErrorCode::InvalidInput, "glue_blocks needs at least one block");
  if (a == 1 && b == 0) return cert_p;
  if (a == 0 && b == 1) return cert_q;
  const bool nonzero = (a == 0 || cert_p.det_nonzero) && (b == 0 || cert_q.det_nonzero);
  auto fresh = [&](const WitnessCertificate& like, std::uint64_t stream) {
    WitnessOptions o;
    o.n = like.n;
    o.require_nonzero = like.det_nonzero;
    o.box = std::max(1L, like.box);
    o.seed = Rng::stream(seed, stream).next();
    return find_distinct_eigs(e, o).x;
  };
  for (std::size_t attempt = 0; attempt < 100; ++attempt) {
    std::vector<MatrixTuple<Rational>> blocks;
    for (std::size_t i = 0; i < a; ++i) {
      blocks.push_back(attempt == 0 && i == 0 ? cert_p.x : fresh(cert_p, attempt * 1000 + i));
    }
    for (std::size_t j = 0; j < b; ++j) {
      blocks.push_back(attempt == 0 && j == 0 ? cert_q.x : fresh(cert_q, attempt * 1000 + 500 + j));
    }
    MatrixTuple<Rational> x = blocks.front();
    for (std::size_t k = 1; k < blocks.size(); ++k) x = direct_sum(x, blocks[k]);
    auto value = try_eval(e, x);
    if (!value) continue;
    WitnessCertificate c = certify(x, std::move(*value));
    if (!c.disc_nonzero || (nonzero && !c.det_nonzero)) continue;
    c.seed = seed;
    c.trial_index = attempt;
    c.box = std::max(cert_p.box, cert_q.box);
    return c;
  }
  throw Error(ErrorCode::BudgetExhausted, "block gluing collided in 100 attempts");
}

WitnessCertificate glued_witness(const RatExpr& e, std::size_t n, std::size_t p, std::size_t q,
                                 const WitnessOptions& options) {
  const SylvesterPair ab = sylvester_representation(n, p, q);
  WitnessOptions op = options;
  op.n = p;
  op.seed = Rng::stream(options.seed, 1).next();
  WitnessOptions oq = options;
  oq.n = q;
  oq.seed = Rng::stream(options.seed, 2).next();
  const WitnessCertificate cp = ab.a > 0 ? find_distinct_eigs(e, op) : WitnessCertificate{};
  const WitnessCertificate cq = ab.b > 0 ? find_distinct_eigs(e, oq) : WitnessCertificate{};
  return glue_blocks(e, cp, cq, ab.a, ab.b, options.seed);
}

SpectralProfile spectral_profile(const RatExpr& e, std::size_t n, std::size_t samples, std::uint64_t seed, long box) {
  SpectralProfile out;
  out.samples = samples;
  bool all_constant = true;
  bool all_two_point = true;
  bool all_square_scalar = true;
  std::optional<Matrix<Rational>> first;
  for (std::size_t t = 0; t < samples; ++t) {
    const MatrixTuple<Rational> x = sample_tuple(e.variables(), n, box, SamplingMode::General, seed, t);
    auto value = try_eval(e, x);
    if (!value) continue;
    ++out.in_domain;
    const UniPoly<Rational> chi = charpoly(*value);
    out.common_factor = out.in_domain == 1 ? chi : poly_gcd(out.common_factor, chi);
    const std::size_t distinct = distinct_count(chi);
    out.max_distinct = std::max(out.max_distinct, distinct);
    if (!first) first = *value;
    all_constant = all_constant && is_scalar_matrix(*value) && *value == *first;
    all_two_point = all_two_point && distinct <= 2;
    all_square_scalar = all_square_scalar && is_scalar_matrix(*value * *value);
  }
  if (out.in_domain == 0) return out;
  out.square_scalar = all_square_scalar;
  if (all_constant) {
    out.kind = ProfileKind::ConstantScalar;
    out.lambda = (*first)(0, 0);
  } else if (all_two_point && (n > 2 || all_square_scalar)) {
    out.kind = ProfileKind::TwoPointSpectrum;
  }
  return out;
}

std::string to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::ConstantScalar: return "ConstantScalar";
    case ProfileKind::TwoPointSpectrum: return "TwoPointSpectrum";
    case ProfileKind::Generic: return "Generic";
  }
  return "Generic";
}

}  // namespace ncw
