#include "ncwaring/json_io.hpp"

#include <fstream>
#include <sstream>

namespace ncw {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidInput, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

template <class T, class Entry>
Matrix<T> matrix_from(const Json& j, Entry entry) {
  const Json& rows = field(j, "entries");
  if (!rows.is_array()) bad("\"entries\" must be an array of rows");
  const std::size_t n = j.contains("n") ? j.at("n").get<std::size_t>() : rows.size();
  if (rows.size() != n) bad("matrix has " + std::to_string(rows.size()) + " rows, expected " + std::to_string(n));
  Matrix<T> m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!rows[i].is_array() || rows[i].size() != n) bad("row " + std::to_string(i) + " does not have n entries");
    for (std::size_t k = 0; k < n; ++k) m(i, k) = entry(rows[i][k]);
  }
  return m;
}

template <class T, class MatrixFrom>
MatrixTuple<T> tuple_from(const Json& j, MatrixFrom one) {
  const Json& ms = field(j, "matrices");
  if (!ms.is_array() || ms.empty()) bad("\"matrices\" must be a nonempty array");
  if (j.contains("m") && j.at("m").get<std::size_t>() != ms.size()) bad("\"m\" disagrees with the matrix count");
  MatrixTuple<T> x;
  for (const auto& mj : ms) x.blocks.push_back(one(mj));
  for (const auto& b : x.blocks) {
    if (b.rows() != x.blocks.front().rows()) bad("tuple matrices differ in size");
  }
  return x;
}

template <class T>
Json matrix_json(const Matrix<T>& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return Json{{"n", m.rows()}, {"entries", std::move(rows)}};
}

template <class T>
Json tuple_json(const MatrixTuple<T>& x) {
  Json ms = Json::array();
  for (const auto& b : x.blocks) ms.push_back(to_json(b));
  return Json{{"m", x.blocks.size()}, {"matrices", std::move(ms)}};
}

template <class T>
Json decomposition_json(const Decomposition<T>& d) {
  Json terms = Json::array();
  for (const auto& t : d.terms) {
    terms.push_back(Json{{"coefficient", to_json(t.coefficient)},
                         {"inverted", t.inverted},
                         {"function", t.function},
                         {"x", to_json(t.x)}});
  }
  return Json{{"kind", to_string(d.kind)},
              {"backend", FieldTraits<T>::exact ? "exact" : "float"},
              {"seed", d.seed},
              {"residual", d.residual},
              {"target", to_json(d.target)},
              {"terms", std::move(terms)}};
}

template <class T, class Coefficient, class TupleFrom>
Decomposition<T> decomposition_from(const Json& j, Coefficient coefficient, TupleFrom tuple) {
  Decomposition<T> d;
  d.kind = parse_kind(field(j, "kind").get<std::string>());
  d.seed = j.value("seed", std::uint64_t{0});
  d.residual = j.value("residual", 0.0);
  d.target = rational_matrix_from_json(field(j, "target"));
  for (const auto& tj : field(j, "terms")) {
    Term<T> t;
    t.coefficient = tj.contains("coefficient") ? coefficient(tj.at("coefficient")) : FieldTraits<T>::one();
    t.inverted = tj.value("inverted", false);
    t.function = tj.value("function", std::size_t{0});
    t.x = tuple(field(tj, "x"));
    d.terms.push_back(std::move(t));
  }
  return d;
}

bool exact_entry(const Json& e) { return e.is_string() || e.is_number_integer(); }

}  // namespace

Json to_json(const Rational& q) { return to_string(q); }

Json to_json(const Complex& z) {
  if (z.imag() == 0.0) return z.real();
  return Json::array({z.real(), z.imag()});
}

Json to_json(const Matrix<Rational>& m) { return matrix_json(m); }
Json to_json(const Matrix<Complex>& m) { return matrix_json(m); }
Json to_json(const MatrixTuple<Rational>& x) { return tuple_json(x); }
Json to_json(const MatrixTuple<Complex>& x) { return tuple_json(x); }

Json to_json(const Realization& r) {
  Json a = Json::array();
  for (const auto& p : r.pencil) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < p.rows(); ++i) {
      Json row = Json::array();
      for (std::size_t k = 0; k < p.cols(); ++k) row.push_back(to_json(p(i, k)));
      rows.push_back(std::move(row));
    }
    a.push_back(std::move(rows));
  }
  Json b = Json::array();
  for (const auto& v : r.b) b.push_back(to_json(v));
  Json c = Json::array();
  for (const auto& v : r.c) c.push_back(to_json(v));
  return Json{{"delta", r.delta()}, {"m", r.m}, {"A", std::move(a)}, {"b", std::move(b)}, {"c", std::move(c)}};
}

Json to_json(const WitnessCertificate& c) {
  Json chi = Json::array();
  for (const auto& a : c.chi.coefficients()) chi.push_back(to_json(a));
  return Json{{"n", c.n},
              {"x", to_json(c.x)},
              {"value", to_json(c.value)},
              {"chi", std::move(chi)},
              {"disc_nonzero", c.disc_nonzero},
              {"det_nonzero", c.det_nonzero},
              {"seed", c.seed},
              {"trial_index", c.trial_index},
              {"box", c.box}};
}

Json to_json(const AnyDecomposition& d) {
  return std::visit([](const auto& x) { return decomposition_json(x); }, d);
}

Json to_json(const Thresholds& t) {
  Json j{{"delta", t.delta},
         {"n_domain_nonempty", t.n_domain_nonempty},
         {"n_noncentral", t.n_noncentral},
         {"p", t.p},
         {"q", t.q},
         {"n_distinct", t.n_distinct},
         {"bertrand_bound", t.bertrand_bound}};
  j["poly_noncentral"] = t.poly_noncentral ? Json(*t.poly_noncentral) : Json(nullptr);
  return j;
}

Rational rational_from_json(const Json& j, bool allow_float) {
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const Error&) {
      bad("not a rational: \"" + j.get<std::string>() + "\"");
    }
  }
  if (j.is_number_integer()) {
    std::ostringstream s;
    if (j.is_number_unsigned()) {
      s << j.get<std::uint64_t>();
    } else {
      s << j.get<std::int64_t>();
    }
    return Rational(s.str());
  }
  if (j.is_number_float() && allow_float) return rational_from_double(j.get<double>());
  bad("expected a rational, got " + j.dump());
}

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_string()) return FieldTraits<Rational>::to_complex(rational_from_json(j));
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  bad("expected a number, \"p/q\" or [re, im], got " + j.dump());
}

bool is_exact_document(const Json& j) {
  if (j.is_object() && j.contains("matrices")) {
    for (const auto& m : j.at("matrices")) {
      if (!is_exact_document(m)) return false;
    }
    return true;
  }
  if (!j.is_object() || !j.contains("entries")) return false;
  for (const auto& row : j.at("entries")) {
    for (const auto& e : row) {
      if (!exact_entry(e)) return false;
    }
  }
  return true;
}

Matrix<Rational> rational_matrix_from_json(const Json& j) {
  return matrix_from<Rational>(j, [](const Json& e) { return rational_from_json(e); });
}

Matrix<Complex> complex_matrix_from_json(const Json& j) { return matrix_from<Complex>(j, complex_from_json); }

MatrixTuple<Rational> rational_tuple_from_json(const Json& j) {
  return tuple_from<Rational>(j, rational_matrix_from_json);
}

MatrixTuple<Complex> complex_tuple_from_json(const Json& j) { return tuple_from<Complex>(j, complex_matrix_from_json); }

Realization realization_from_json(const Json& j) {
  Realization r;
  const std::size_t delta = field(j, "delta").get<std::size_t>();
  for (const auto& aj : field(j, "A")) {
    if (!aj.is_array() || aj.size() != delta) bad("pencil coefficient is not delta x delta");
    Matrix<Rational> a(delta, delta);
    for (std::size_t i = 0; i < delta; ++i) {
      if (!aj[i].is_array() || aj[i].size() != delta) bad("pencil coefficient is not delta x delta");
      for (std::size_t k = 0; k < delta; ++k) a(i, k) = rational_from_json(aj[i][k], false);
    }
    r.pencil.push_back(std::move(a));
  }
  if (r.pencil.empty()) bad("a realization needs the constant coefficient A_0");
  r.m = j.value("m", r.pencil.size() - 1);
  if (r.m + 1 != r.pencil.size()) bad("\"m\" disagrees with the number of pencil coefficients");
  for (const auto& v : field(j, "b")) r.b.push_back(rational_from_json(v, false));
  for (const auto& v : field(j, "c")) r.c.push_back(rational_from_json(v, false));
  if (r.b.size() != delta || r.c.size() != delta) bad("b and c must have delta entries");
  return r;
}

WitnessCertificate certificate_from_json(const Json& j) {
  WitnessCertificate c;
  c.n = field(j, "n").get<std::size_t>();
  c.x = rational_tuple_from_json(field(j, "x"));
  c.value = rational_matrix_from_json(field(j, "value"));
  std::vector<Rational> chi;
  for (const auto& a : field(j, "chi")) chi.push_back(rational_from_json(a, false));
  c.chi = UniPoly<Rational>(std::move(chi));
  c.disc_nonzero = j.value("disc_nonzero", false);
  c.det_nonzero = j.value("det_nonzero", false);
  c.seed = j.value("seed", std::uint64_t{0});
  c.trial_index = j.value("trial_index", std::size_t{0});
  c.box = j.value("box", 0L);
  return c;
}

AnyDecomposition decomposition_from_json(const Json& j) {
  const std::string backend = j.value("backend", std::string("exact"));
  if (backend == "exact") {
    return decomposition_from<Rational>(
        j, [](const Json& e) { return rational_from_json(e, false); }, rational_tuple_from_json);
  }
  if (backend == "float") return decomposition_from<Complex>(j, complex_from_json, complex_tuple_from_json);
  bad("unknown backend \"" + backend + "\"");
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    bad(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) bad("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace ncw
