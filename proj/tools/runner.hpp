#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qrec/conjlab.hpp"

namespace qrec::cli {

enum ExitCode { exit_pass = 0, exit_check_failed = 2, exit_config = 3, exit_resource_cap = 4 };

struct ExperimentConfig {
  std::string type_name;
  int rank = 0;
  std::vector<int> nodes;  ///< empty: every node (gen, detect) or node 1 (verify)
  std::string q;           ///< comma-separated, empty for a random draw
  std::string y;
  std::string mode = "raw";
  std::uint64_t seed = 1;
  int depth = 0;  ///< 0 selects the automatic policy
  int guard = 0;
  int modular = 0;  ///< prime count, 0 for rational arithmetic
  std::string branching_file;
  std::string format = "json";
  bool timings = false;

  // interpolate
  int k = 1;
  int runs = 40;
  int degree = 1;

  // dims
  std::string weight;

  LieType type() const;
  nlohmann::json echo() const;
};

struct Outcome {
  nlohmann::json report;
  std::string text;  ///< csv output when requested
  int exit_code = exit_pass;
};

/// Reads QREC_SEED, falling back to 1.
std::uint64_t default_seed();
std::vector<Rational> parse_rationals(const std::string& list);
std::vector<int> parse_ints(const std::string& list);

Outcome run_generate(const ExperimentConfig& cfg);
Outcome run_detect(const ExperimentConfig& cfg);
Outcome run_verify(const ExperimentConfig& cfg);
Outcome run_tables(const ExperimentConfig& cfg);
Outcome run_interpolate(const ExperimentConfig& cfg);
Outcome run_dims(const ExperimentConfig& cfg);

/// Maps library failures to exit codes.
int exit_code_for(const Error& e);

/// Adds "report_digest" over the report minus its timings.
void seal(nlohmann::json& report);

}  // namespace qrec::cli
