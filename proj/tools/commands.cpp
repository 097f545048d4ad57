#include "commands.hpp"

#include <iomanip>
#include <ostream>
#include <sstream>

#include "ncwaring/json_io.hpp"
#include "ncwaring/ncpoly.hpp"
#include "ncwaring/realization.hpp"
#include "ncwaring/waring.hpp"
#include "ncwaring/witness.hpp"

namespace ncw::cli {

namespace {

std::string sci(double x) {
  std::ostringstream s;
  s << std::setprecision(3) << std::scientific << x;
  return s.str();
}

const std::string& first_expr(const JobSpec& spec) {
  if (spec.exprs.empty()) throw Error(ErrorCode::InvalidInput, "--expr is required");
  return spec.exprs.front();
}

Backend parse_backend(const std::string& b) {
  if (b == "auto") return Backend::Auto;
  if (b == "exact") return Backend::Exact;
  if (b == "float") return Backend::Float;
  throw Error(ErrorCode::InvalidInput, "unknown backend \"" + b + "\"");
}

struct Output {
  Json json;
  std::string report;
};

Output cmd_eval(const JobSpec& spec) {
  if (spec.tuple.empty()) throw Error(ErrorCode::InvalidInput, "eval needs --tuple");
  const Json tj = read_json_file(spec.tuple);
  const bool exact = is_exact_document(tj) && spec.backend != "float";
  std::ostringstream rep;
  if (exact) {
    const MatrixTuple<Rational> x = rational_tuple_from_json(tj);
    const RatExpr e = parse(first_expr(spec), spec.m ? spec.m : x.variables());
    if (e.variables() != x.variables()) throw Error(ErrorCode::DimensionMismatch, "tuple has the wrong number of matrices");
    const Matrix<Rational> v = spec.pencil ? eval_realization(from_expr(e), x) : eval_expr(e, x);
    rep << "evaluated " << e.to_string() << " at n = " << v.rows() << " (exact, "
        << (spec.pencil ? "pencil" : "direct") << ")\n";
    return {to_json(v), rep.str()};
  }
  const MatrixTuple<Complex> x = complex_tuple_from_json(tj);
  const RatExpr e = parse(first_expr(spec), spec.m ? spec.m : x.variables());
  if (e.variables() != x.variables()) throw Error(ErrorCode::DimensionMismatch, "tuple has the wrong number of matrices");
  const Matrix<Complex> v = spec.pencil ? eval_realization(from_expr(e), x) : eval_expr(e, x);
  rep << "evaluated " << e.to_string() << " at n = " << v.rows() << " (float, "
      << (spec.pencil ? "pencil" : "direct") << ")\n";
  return {to_json(v), rep.str()};
}

Output cmd_realize(const JobSpec& spec) {
  const RatExpr e = parse(first_expr(spec), spec.m);
  const Realization inner = from_expr(e);
  std::optional<int> degree;
  if (!e.has_inverse()) degree = expr_to_poly(e).degree();
  std::ostringstream rep;
  Json j;
  if (spec.commutator_inverse) {
    const Realization r = commutator_inverse(inner);
    const Thresholds t = thresholds(r.delta());
    j = Json{{"realization", to_json(r)}, {"inner_delta", inner.delta()}, {"thresholds", to_json(t)}};
    rep << "inner size " << inner.delta() << ", (x0 r - r x0)^-1 size " << r.delta() << " = 2*" << inner.delta()
        << "+1\n";
    rep << "thresholds: domain n >= " << t.n_domain_nonempty << ", p = " << t.p << ", q = " << t.q
        << ", distinct n >= " << t.n_distinct << ", bertrand bound " << t.bertrand_bound << '\n';
    return {j, rep.str()};
  }
  const Thresholds t = thresholds(inner.delta(), degree);
  j = Json{{"realization", to_json(inner)}, {"thresholds", to_json(t)}};
  rep << "size " << inner.delta() << " realization of " << e.to_string() << '\n';
  rep << "thresholds: domain n >= " << t.n_domain_nonempty << ", noncentral n >= " << t.n_noncentral
      << ", p = " << t.p << ", q = " << t.q << ", distinct n >= " << t.n_distinct << ", bertrand bound "
      << t.bertrand_bound;
  if (t.poly_noncentral) rep << ", polynomial noncentral n >= " << *t.poly_noncentral;
  rep << '\n';
  return {j, rep.str()};
}

Output cmd_witness(const JobSpec& spec) {
  const RatExpr e = parse(first_expr(spec), spec.m);
  WitnessOptions o;
  o.n = spec.n;
  o.require_nonzero = !spec.allow_singular;
  o.budget = spec.budget;
  o.box = spec.box;
  o.seed = spec.seed;
  o.mode = spec.upper_triangular ? SamplingMode::UpperTriangular : SamplingMode::General;
  o.require_nonzero_trace = spec.nonzero_trace;
  o.require_rational_spectrum = spec.rational_spectrum;
  WitnessCertificate c;
  if (!spec.glue.empty()) {
    if (spec.glue.size() != 2) throw Error(ErrorCode::InvalidInput, "--glue takes two sizes p q");
    c = glued_witness(e, spec.n, spec.glue[0], spec.glue[1], o);
  } else {
    c = find_distinct_eigs(e, o);
  }
  const bool ok = verify_certificate(e, c);
  std::ostringstream rep;
  rep << "witness for " << e.to_string() << " at n = " << c.n << ": trial " << c.trial_index << ", box " << c.box
      << ", disc " << (c.disc_nonzero ? "nonzero" : "zero") << ", det " << (c.det_nonzero ? "nonzero" : "zero")
      << ", recheck " << (ok ? "passed" : "FAILED") << '\n';
  if (!ok) throw Error(ErrorCode::VerificationFailed, "certificate did not re-verify");
  return {to_json(c), rep.str()};
}

std::vector<RatExpr> functions_for(const std::string& mode, const std::vector<std::string>& exprs, std::size_t m) {
  std::size_t want = 1;
  if (mode == "product2") want = 2;
  if (mode == "product3") want = 3;
  if (exprs.empty()) throw Error(ErrorCode::InvalidInput, "--expr is required");
  if (exprs.size() > want) throw Error(ErrorCode::InvalidInput, "mode " + mode + " takes at most " + std::to_string(want) + " expressions");
  std::vector<RatExpr> fs;
  for (std::size_t i = 0; i < want; ++i) fs.push_back(parse(exprs[std::min(i, exprs.size() - 1)], m));
  return fs;
}

Output cmd_decompose(const JobSpec& spec) {
  if (spec.target.empty()) throw Error(ErrorCode::InvalidInput, "decompose needs --target");
  const Matrix<Rational> target = rational_matrix_from_json(read_json_file(spec.target));
  const std::vector<RatExpr> fs = functions_for(spec.mode, spec.exprs, spec.m);
  WaringOptions o;
  o.backend = parse_backend(spec.backend);
  o.seed = spec.seed;
  o.budget = spec.budget;
  o.box = spec.box;
  o.n0 = spec.n0;
  if (spec.tol) {
    o.tolerance = *spec.tol;
    o.twelve_tolerance = *spec.tol;
  }
  AnyDecomposition d;
  const std::string& mode = spec.mode;
  if (mode == "difference") {
    d = decompose_difference(fs[0], target, o);
  } else if (mode == "linear2") {
    d = decompose_linear_two(fs[0], target, o);
  } else if (mode == "linear3") {
    d = decompose_linear_three(fs[0], target, o);
  } else if (mode == "quotient") {
    d = decompose_quotient(fs[0], target, o);
  } else if (mode == "product2") {
    d = decompose_product_two(fs[0], fs[1], target, o);
  } else if (mode == "product3") {
    d = decompose_product_three(fs[0], fs[1], fs[2], target, o);
  } else if (mode == "product12") {
    d = decompose_product_twelve(fs[0], target, o);
  } else {
    throw Error(ErrorCode::InvalidInput, "unknown mode \"" + mode + "\"");
  }
  const double tol = mode == "product12" ? o.twelve_tolerance : o.tolerance;
  const VerificationReport v = verify(d, fs, tol);
  Json j = to_json(d);
  Json names = Json::array();
  for (const auto& f : fs) names.push_back(f.to_string());
  j["functions"] = std::move(names);
  j["mode"] = mode;
  std::ostringstream rep;
  rep << "mode " << mode << ": " << to_string(kind_of(d)) << " with " << term_count(d) << " terms, "
      << (is_exact(d) ? "exact" : "float") << ", residual " << sci(v.residual) << '\n';
  rep << "replay: " << (v.pass ? "verified" : "FAILED") << " (tolerance " << sci(tol) << ")\n";
  if (!v.pass) throw Error(ErrorCode::VerificationFailed, v.message);
  return {j, rep.str()};
}

Output cmd_verify(const JobSpec& spec) {
  if (spec.input.empty()) throw Error(ErrorCode::InvalidInput, "verify needs --in");
  const Json j = read_json_file(spec.input);
  const AnyDecomposition d = decomposition_from_json(j);
  std::vector<std::string> exprs = spec.exprs;
  if (exprs.empty() && j.contains("functions")) exprs = j.at("functions").get<std::vector<std::string>>();
  if (exprs.empty()) throw Error(ErrorCode::InvalidInput, "no functions given");
  std::vector<RatExpr> fs;
  for (const auto& s : exprs) fs.push_back(parse(s, spec.m));
  const double tol = spec.tol ? *spec.tol : (kind_of(d) == DecompositionKind::ProductTwelve ? 1e-6 : 1e-8);
  const VerificationReport v = verify(d, fs, tol);
  std::ostringstream rep;
  rep << to_string(kind_of(d)) << " with " << term_count(d) << " terms: " << (v.pass ? "verified" : "FAILED")
      << ", residual " << sci(v.residual) << '\n';
  if (!v.pass) throw Error(ErrorCode::VerificationFailed, v.message);
  return {Json{{"pass", v.pass}, {"residual", v.residual}, {"message", v.message}, {"seed", j.value("seed", spec.seed)}},
          rep.str()};
}

Output cmd_profile(const JobSpec& spec) {
  const RatExpr e = parse(first_expr(spec), spec.m);
  const SpectralProfile p = spectral_profile(e, spec.n, spec.budget, spec.seed, spec.box);
  Json common = Json::array();
  for (const auto& a : p.common_factor.coefficients()) common.push_back(to_json(a));
  Json j{{"kind", to_string(p.kind)},          {"samples", p.samples},
         {"in_domain", p.in_domain},           {"max_distinct", p.max_distinct},
         {"square_scalar", p.square_scalar},   {"common_factor", std::move(common)},
         {"seed", spec.seed},                  {"n", spec.n}};
  j["lambda"] = p.lambda ? to_json(*p.lambda) : Json(nullptr);
  std::ostringstream rep;
  rep << e.to_string() << " at n = " << spec.n << ": " << to_string(p.kind) << ", " << p.in_domain << "/"
      << p.samples << " samples in the domain, at most " << p.max_distinct << " distinct eigenvalues\n";
  return {j, rep.str()};
}

}  // namespace

int run(const JobSpec& spec, std::ostream& report, std::ostream& err) {
  try {
    Output o;
    if (spec.command == "eval") {
      o = cmd_eval(spec);
    } else if (spec.command == "realize") {
      o = cmd_realize(spec);
    } else if (spec.command == "witness") {
      o = cmd_witness(spec);
    } else if (spec.command == "decompose") {
      o = cmd_decompose(spec);
    } else if (spec.command == "verify") {
      o = cmd_verify(spec);
    } else if (spec.command == "profile") {
      o = cmd_profile(spec);
    } else {
      throw Error(ErrorCode::InvalidInput, "unknown command \"" + spec.command + "\"");
    }
    if (!o.json.contains("seed") && o.json.is_object()) o.json["seed"] = spec.seed;
    if (spec.out.empty()) {
      report << o.json.dump(2) << '\n';
      err << o.report;
    } else {
      write_json_file(spec.out, o.json);
      report << o.report;
    }
    return 0;
  } catch (const Error& e) {
    if (is_unsupported(e.code())) {
      err << "unsupported: " << e.what() << '\n';
      return 2;
    }
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const Json::exception& e) {
    err << "error: malformed JSON: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace ncw::cli
