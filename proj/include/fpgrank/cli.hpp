#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fpgrank/presentation.hpp"
#include "fpgrank/quotient.hpp"

namespace fpgrank {

enum ExitCode : int {
  exit_ok = 0,
  exit_check_failed = 1,
  exit_config_error = 2,
  exit_input_error = 3,
  exit_budget_exceeded = 4,
};

struct RunConfig {
  std::string command;
  std::string preset;
  std::string presentation_path;
  std::string matrix_path;
  std::string triples_path;
  int k_max = 0;
  std::vector<int> k_list;
  Budget budget;
  std::string format = "csv";
  std::string out_path;
  unsigned jobs = 1;
  std::size_t samples = 100;
  std::uint64_t seed = 1;
  std::string target = "trunc";
};

std::vector<std::string> preset_names();
std::optional<GroupPresentation> preset_presentation(const std::string& name);

/// Throws ConfigError unless exactly one source is set or a k value is below 2.
GroupPresentation load_presentation(const RunConfig& cfg);
std::vector<int> resolve_k_list(const RunConfig& cfg, int default_k_max);

int cmd_rank_approx(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_quotient_info(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_skew_check(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_localize_eval(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses arguments, dispatches and maps errors to exit codes.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fpgrank
