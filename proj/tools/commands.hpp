#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ncw::cli {

/// One invocation of the command-line tool.
struct JobSpec {
  std::string command;
  std::vector<std::string> exprs;
  std::size_t m = 0;  // 0: largest variable index used
  std::size_t n = 2;
  std::string backend = "auto";
  std::uint64_t seed = 0;
  std::size_t budget = 1000;
  std::optional<double> tol;
  long box = 5;
  std::string mode;
  std::size_t n0 = 2;
  std::string target;
  std::string tuple;
  std::string input;
  std::string out;
  // realize
  bool commutator_inverse = false;
  // eval
  bool pencil = false;
  // witness
  bool allow_singular = false;
  bool nonzero_trace = false;
  bool rational_spectrum = false;
  bool upper_triangular = false;
  std::vector<std::size_t> glue;  // {p, q}
};

/// Runs the job. JSON goes to spec.out when set (the report then goes to
/// `report`), otherwise JSON goes to `report` and the report to `err`.
/// Returns 0 on success, 2 for contractual unsupported cases, 1 on errors.
int run(const JobSpec& spec, std::ostream& report, std::ostream& err);

}  // namespace ncw::cli
