#include <fstream>
#include <functional>
#include <iostream>

#include <CLI11.hpp>

#include "runner.hpp"

using namespace qrec;
using namespace qrec::cli;

namespace {

struct CommonFlags {
  std::string nodes;
};

void add_common(CLI::App& sub, ExperimentConfig& cfg, CommonFlags& flags) {
  sub.add_option("--type", cfg.type_name, "Lie type, e.g. E6, or a family letter with --rank")->required();
  sub.add_option("--rank", cfg.rank, "rank when --type is a family letter");
  sub.add_option("--node", flags.nodes, "node or comma-separated nodes");
  sub.add_option("--q", cfg.q, "initial values q_1..q_r (raw mode)");
  sub.add_option("--y", cfg.y, "torus point y_1..y_r (character-point mode)");
  sub.add_option("--mode", cfg.mode, "raw | character-point | dimension")
      ->check(CLI::IsMember({"raw", "character-point", "dimension"}));
  sub.add_option("--seed", cfg.seed, "seed for random draws (default $QREC_SEED or 1)");
  sub.add_option("--depth", cfg.depth, "sequence depth (default automatic)");
  sub.add_option("--guard", cfg.guard, "stability guard window (default automatic)");
  sub.add_option("--modular", cfg.modular, "detect modulo N primes and lift");
  sub.add_option("--branching", cfg.branching_file, "JSON decomposition of W_1^(a) into irreducibles");
  sub.add_flag("--timings", cfg.timings, "add wall-clock timings to the report");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Q-system characters and their linear recurrences"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  cfg.seed = default_seed();
  CommonFlags flags;
  std::string out_file;
  app.add_option("--out", out_file, "write the report here instead of stdout");
  app.add_option("--format", cfg.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));

  std::function<Outcome(const ExperimentConfig&)> command;
  auto bind = [&](CLI::App* sub, Outcome (*fn)(const ExperimentConfig&)) {
    add_common(*sub, cfg, flags);
    sub->add_option("--out", out_file, "write the report here instead of stdout");
    sub->add_option("--format", cfg.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    sub->callback([&command, fn] { command = fn; });
    return sub;
  };
  bind(app.add_subcommand("gen", "generate Q_m^(a) tables"), run_generate);
  bind(app.add_subcommand("detect", "detect minimal recurrences"), run_detect);
  bind(app.add_subcommand("verify", "run the checks for a node"), run_verify);
  bind(app.add_subcommand("tables", "predicted orders and growth degrees"), run_tables);
  auto* interp = bind(app.add_subcommand("interpolate", "fit C_k as a polynomial in q"), run_interpolate);
  interp->add_option("--k", cfg.k, "coefficient index");
  interp->add_option("--runs", cfg.runs, "number of random specializations");
  interp->add_option("--degree", cfg.degree, "maximal monomial degree");
  auto* dims = bind(app.add_subcommand("dims", "dimensions and weight systems"), run_dims);
  dims->add_option("--weight", cfg.weight, "highest weight in fundamental coordinates");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_config;
  }

  try {
    if (!flags.nodes.empty()) cfg.nodes = parse_ints(flags.nodes);
    const auto outcome = command(cfg);
    const std::string text = cfg.format == "csv" ? outcome.text : outcome.report.dump(2) + "\n";
    if (out_file.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(out_file);
      if (!out) throw Error(ErrorCode::invalid_input, "cannot write " + out_file);
      out << text;
    }
    return outcome.exit_code;
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_config;
  }
}
