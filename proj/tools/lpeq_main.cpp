#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "lpeq/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"lp/l0 equivalence threshold toolkit"};
  app.set_version_flag("--version", lpeq::kToolVersion);

  lpeq::CommandConfig cfg;
  std::uint64_t seed = lpeq::kDefaultSeed;
  app.add_option("command", cfg.command, "pstar | solve-l0 | solve-lp | nsc | curve | verify | diagnose")
      ->required()
      ->check(CLI::IsMember(lpeq::known_commands()));
  auto* input = app.add_option("--input", cfg.input, "problem file (JSON or CSV)");
  auto* example = app.add_option("--example", cfg.example, "built-in example")->check(CLI::IsMember({1, 2}));
  input->excludes(example);
  app.add_option("--p", cfg.p, "quasi-norm exponent");
  app.add_option("--t", cfg.t, "sparsity level");
  app.add_option("--grid", cfg.grid, "curve lattice: min:max:count[,min:max:count]");
  app.add_option("--seed", seed, "seed for sampled diagnostics");
  app.add_option("--tol-zero", cfg.tol_zero, "relative zero threshold");
  app.add_option("--output", cfg.output, "output path (default: standard output)");
  app.add_option("--format", cfg.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  cfg.seed = seed;

  const lpeq::RunResult result = lpeq::run(cfg);
  if (cfg.output) {
    std::ofstream out(*cfg.output, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << *cfg.output << "\n";
      return 2;
    }
    out << result.body;
  } else {
    std::cout << result.body;
  }
  return result.exit_code;
}
