#pragma once

// JSON documents for matrices, tuples, realizations, certificates and
// decompositions. Exact entries are "p/q" strings; complex entries are plain
// numbers when real and [re, im] pairs otherwise.

#include <string>

#include "json.hpp"
#include "ncwaring/realization.hpp"
#include "ncwaring/waring.hpp"
#include "ncwaring/witness.hpp"

namespace ncw {

using Json = nlohmann::json;

Json to_json(const Rational& q);
Json to_json(const Complex& z);
Json to_json(const Matrix<Rational>& m);
Json to_json(const Matrix<Complex>& m);
Json to_json(const MatrixTuple<Rational>& x);
Json to_json(const MatrixTuple<Complex>& x);
Json to_json(const Realization& r);
Json to_json(const WitnessCertificate& c);
Json to_json(const AnyDecomposition& d);
Json to_json(const Thresholds& t);

/// Accepts "p/q" strings and integers; with allow_float also floating numbers
/// (converted exactly). Throws InvalidInput.
Rational rational_from_json(const Json& j, bool allow_float = true);
Complex complex_from_json(const Json& j);

/// Whether every entry of a matrix or tuple document is exact (a string or an integer).
bool is_exact_document(const Json& j);

Matrix<Rational> rational_matrix_from_json(const Json& j);
Matrix<Complex> complex_matrix_from_json(const Json& j);
MatrixTuple<Rational> rational_tuple_from_json(const Json& j);
MatrixTuple<Complex> complex_tuple_from_json(const Json& j);
Realization realization_from_json(const Json& j);
WitnessCertificate certificate_from_json(const Json& j);
AnyDecomposition decomposition_from_json(const Json& j);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace ncw
