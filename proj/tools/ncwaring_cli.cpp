// ncwaring: evaluate, realize, certify and decompose from the command line.

#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Noncommutative rational functions, pencil realizations and Waring decompositions"};
  app.require_subcommand(1);
  ncw::cli::JobSpec spec;

  auto common = [&](CLI::App* c) {
    c->add_option("--expr", spec.exprs, "expression(s), e.g. \"x1*x2-x2*x1\"")->take_all();
    c->add_option("--m", spec.m, "number of variables (default: largest index used)");
    c->add_option("--seed", spec.seed, "random seed");
    c->add_option("--out", spec.out, "write the JSON artifact here");
  };

  auto* eval = app.add_subcommand("eval", "evaluate an expression on a matrix tuple");
  common(eval);
  eval->add_option("--tuple", spec.tuple, "tuple JSON file")->required();
  eval->add_option("--backend", spec.backend)->check(CLI::IsMember({"auto", "exact", "float"}));
  eval->add_flag("--pencil", spec.pencil, "evaluate through the linear representation");

  auto* realize = app.add_subcommand("realize", "build a linear representation and its thresholds");
  common(realize);
  realize->add_flag("--commutator-inverse", spec.commutator_inverse, "realize (x0 r - r x0)^-1 instead");

  auto* witness = app.add_subcommand("witness", "find a tuple whose value has n distinct eigenvalues");
  common(witness);
  witness->add_option("--n", spec.n, "matrix size");
  witness->add_option("--budget", spec.budget, "samples");
  witness->add_option("--box", spec.box, "initial sampling bound B");
  witness->add_option("--glue", spec.glue, "glue blocks of prime sizes p q")->expected(2);
  witness->add_flag("--allow-singular", spec.allow_singular, "do not require a nonzero determinant");
  witness->add_flag("--nonzero-trace", spec.nonzero_trace);
  witness->add_flag("--rational-spectrum", spec.rational_spectrum);
  witness->add_flag("--upper-triangular", spec.upper_triangular, "sample upper triangular tuples");

  auto* decompose = app.add_subcommand("decompose", "write a target matrix through values of the expression(s)");
  common(decompose);
  decompose->add_option("--mode", spec.mode)
      ->required()
      ->check(CLI::IsMember({"difference", "linear2", "linear3", "quotient", "product2", "product3", "product12"}));
  decompose->add_option("--target", spec.target, "target matrix JSON file")->required();
  decompose->add_option("--backend", spec.backend)->check(CLI::IsMember({"auto", "exact", "float"}));
  decompose->add_option("--budget", spec.budget, "witness samples");
  decompose->add_option("--box", spec.box, "initial sampling bound B");
  decompose->add_option("--tol", spec.tol, "relative verification tolerance");
  decompose->add_option("--n0", spec.n0, "operational threshold for product12");

  auto* verify = app.add_subcommand("verify", "replay a decomposition JSON file");
  common(verify);
  verify->add_option("--in", spec.input, "decomposition JSON file")->required();
  verify->add_option("--tol", spec.tol, "relative verification tolerance");

  auto* profile = app.add_subcommand("profile", "sampling evidence for constant or two-point spectra");
  common(profile);
  profile->add_option("--n", spec.n, "matrix size");
  profile->add_option("--budget", spec.budget, "samples");
  profile->add_option("--box", spec.box, "sampling bound B");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  spec.command = app.get_subcommands().front()->get_name();
  if (spec.command == "profile" && profile->count("--budget") == 0) spec.budget = 100;
  return ncw::cli::run(spec, std::cout, std::cerr);
}
