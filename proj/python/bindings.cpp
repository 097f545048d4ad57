// Python module _core. Matrices, tuples and results cross the boundary as
// JSON text in the same format as the command-line tool; the ncwaring
// package converts them to and from Python objects.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "ncwaring/json_io.hpp"
#include "ncwaring/ncpoly.hpp"
#include "ncwaring/realization.hpp"
#include "ncwaring/waring.hpp"
#include "ncwaring/witness.hpp"

namespace py = pybind11;
using namespace ncw;

namespace {

Backend backend_from(const std::string& b) {
  if (b == "auto") return Backend::Auto;
  if (b == "exact") return Backend::Exact;
  if (b == "float") return Backend::Float;
  throw Error(ErrorCode::InvalidInput, "unknown backend \"" + b + "\"");
}

std::string eval_json(const std::string& expr, const std::string& tuple, std::size_t m, bool pencil) {
  const Json tj = Json::parse(tuple);
  if (is_exact_document(tj)) {
    const MatrixTuple<Rational> x = rational_tuple_from_json(tj);
    const RatExpr e = parse(expr, m ? m : x.variables());
    return to_json(pencil ? eval_realization(from_expr(e), x) : eval_expr(e, x)).dump();
  }
  const MatrixTuple<Complex> x = complex_tuple_from_json(tj);
  const RatExpr e = parse(expr, m ? m : x.variables());
  return to_json(pencil ? eval_realization(from_expr(e), x) : eval_expr(e, x)).dump();
}

std::string realize_json(const std::string& expr, std::size_t m, bool commutator) {
  const RatExpr e = parse(expr, m);
  const Realization r = commutator ? commutator_inverse(from_expr(e)) : from_expr(e);
  return to_json(r).dump();
}

std::string thresholds_json(std::size_t delta, std::optional<int> degree) {
  return to_json(thresholds(delta, degree)).dump();
}

std::string witness_json(const std::string& expr, std::size_t n, std::uint64_t seed, std::size_t budget, long box,
                         bool require_nonzero, std::optional<std::pair<std::size_t, std::size_t>> glue) {
  const RatExpr e = parse(expr);
  WitnessOptions o;
  o.n = n;
  o.seed = seed;
  o.budget = budget;
  o.box = box;
  o.require_nonzero = require_nonzero;
  const WitnessCertificate c = glue ? glued_witness(e, n, glue->first, glue->second, o) : find_distinct_eigs(e, o);
  return to_json(c).dump();
}

bool verify_certificate_json(const std::string& expr, const std::string& cert) {
  return verify_certificate(parse(expr), certificate_from_json(Json::parse(cert)));
}

std::string decompose_json(const std::string& mode, const std::vector<std::string>& exprs, const std::string& target,
                           const std::string& backend, std::uint64_t seed, std::size_t budget, long box,
                           std::optional<double> tol, std::size_t n0) {
  if (exprs.empty()) throw Error(ErrorCode::InvalidInput, "at least one expression is required");
  std::vector<RatExpr> fs;
  for (const auto& s : exprs) fs.push_back(parse(s));
  const std::size_t want = mode == "product2" ? 2 : mode == "product3" ? 3 : 1;
  while (fs.size() < want) fs.push_back(fs.back());
  const Matrix<Rational> m = rational_matrix_from_json(Json::parse(target));
  WaringOptions o;
  o.backend = backend_from(backend);
  o.seed = seed;
  o.budget = budget;
  o.box = box;
  o.n0 = n0;
  if (tol) {
    o.tolerance = *tol;
    o.twelve_tolerance = *tol;
  }
  AnyDecomposition d;
  if (mode == "difference") {
    d = decompose_difference(fs[0], m, o);
  } else if (mode == "linear2") {
    d = decompose_linear_two(fs[0], m, o);
  } else if (mode == "linear3") {
    d = decompose_linear_three(fs[0], m, o);
  } else if (mode == "quotient") {
    d = decompose_quotient(fs[0], m, o);
  } else if (mode == "product2") {
    d = decompose_product_two(fs[0], fs[1], m, o);
  } else if (mode == "product3") {
    d = decompose_product_three(fs[0], fs[1], fs[2], m, o);
  } else if (mode == "product12") {
    d = decompose_product_twelve(fs[0], m, o);
  } else {
    throw Error(ErrorCode::InvalidInput, "unknown mode \"" + mode + "\"");
  }
  Json j = to_json(d);
  Json names = Json::array();
  for (std::size_t i = 0; i < want; ++i) names.push_back(fs[i].to_string());
  j["functions"] = std::move(names);
  j["mode"] = mode;
  return j.dump();
}

py::dict verify_json(const std::string& decomposition, const std::vector<std::string>& exprs, double tol) {
  const AnyDecomposition d = decomposition_from_json(Json::parse(decomposition));
  std::vector<RatExpr> fs;
  for (const auto& s : exprs) fs.push_back(parse(s));
  const VerificationReport v = verify(d, fs, tol);
  py::dict out;
  out["pass"] = v.pass;
  out["residual"] = v.residual;
  out["message"] = v.message;
  return out;
}

std::string profile_json(const std::string& expr, std::size_t n, std::size_t samples, std::uint64_t seed, long box) {
  const SpectralProfile p = spectral_profile(parse(expr), n, samples, seed, box);
  Json j{{"kind", to_string(p.kind)},
         {"samples", p.samples},
         {"in_domain", p.in_domain},
         {"max_distinct", p.max_distinct},
         {"square_scalar", p.square_scalar}};
  j["lambda"] = p.lambda ? to_json(*p.lambda) : Json(nullptr);
  return j.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "ncwaring native core";

  m.attr("NcwError") = py::handle(PyErr_NewException("ncwaring._core.NcwError", PyExc_RuntimeError, nullptr));
  py::register_local_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object type = py::module_::import("ncwaring._core").attr("NcwError");
      py::object exc = type(py::str(e.what()));
      exc.attr("code") = std::string(to_string(e.code()));
      exc.attr("unsupported") = is_unsupported(e.code());
      PyErr_SetObject(type.ptr(), exc.ptr());
    } catch (const Json::exception& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def("normalize", [](const std::string& expr, std::size_t m_vars) { return parse(expr, m_vars).to_string(); },
        py::arg("expr"), py::arg("m") = 0);
  m.def("eval", &eval_json, py::arg("expr"), py::arg("tuple"), py::arg("m") = 0, py::arg("pencil") = false);
  m.def("realize", &realize_json, py::arg("expr"), py::arg("m") = 0, py::arg("commutator_inverse") = false);
  m.def("thresholds", &thresholds_json, py::arg("delta"), py::arg("degree") = py::none());
  m.def("find_witness", &witness_json, py::arg("expr"), py::arg("n"), py::arg("seed") = 0, py::arg("budget") = 1000,
        py::arg("box") = 5, py::arg("require_nonzero") = true, py::arg("glue") = py::none());
  m.def("verify_certificate", &verify_certificate_json, py::arg("expr"), py::arg("certificate"));
  m.def("decompose", &decompose_json, py::arg("mode"), py::arg("exprs"), py::arg("target"),
        py::arg("backend") = "auto", py::arg("seed") = 0, py::arg("budget") = 1000, py::arg("box") = 5,
        py::arg("tol") = py::none(), py::arg("n0") = 2);
  m.def("verify", &verify_json, py::arg("decomposition"), py::arg("exprs"), py::arg("tol") = 1e-8);
  m.def("profile", &profile_json, py::arg("expr"), py::arg("n"), py::arg("samples") = 100, py::arg("seed") = 0,
        py::arg("box") = 5);
}
