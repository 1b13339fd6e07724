#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "choquard/asymptotics.hpp"
#include "choquard/grid.hpp"
#include "choquard/groundstate.hpp"

namespace choquard::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kInadmissible = 2,
  kNotCertified = 3,  // non-converged solve, failed certificate or campaign failure
  kUnreliableTail = 4,
};

inline constexpr int kSchemaVersion = 1;

struct RunConfig {
  std::string command;
  int dim = 3;
  double alpha = 2.0;
  double p = 2.0;
  /// Unset grid fields fall back to per-regime defaults (see grid_for).
  std::optional<double> r_max;
  std::optional<std::size_t> n;
  std::optional<Spacing> spacing;
  SolverConfig solver;
  std::filesystem::path out = "choquard-out";
  unsigned jobs = 1;
  std::uint64_t seed = 0;
  std::filesystem::path profile;
  std::vector<double> p_list;
  std::vector<double> alpha_list;
  std::size_t trials = 500;
  std::filesystem::path cache;
};

struct GridSpec {
  double r_max;
  std::size_t n;
  Spacing spacing;
};

/// p >= 2: r_max 30, n 3000, uniform; p < 2: r_max 240, n 3000, graded.
/// Explicit fields of the config win.
GridSpec grid_for(const RunConfig& config, double p);

/// Parses argv (flags, optional --config file of `key = value` lines, one
/// subcommand). Returns the exit code to use when parsing ends the run
/// (help or usage error), otherwise fills `config`.
std::optional<int> parse_args(int argc, const char* const* argv, RunConfig& config,
                              std::ostream& out, std::ostream& err);

int run_solve(const RunConfig& config, std::ostream& out);
int run_verify(const RunConfig& config, std::ostream& out);
int run_sweep(const RunConfig& config, std::ostream& out);
int run_polarization_campaign(const RunConfig& config, std::ostream& out);
int run_scaling_audit(const RunConfig& config, std::ostream& out);

/// Full entry point: parse, dispatch, map exceptions to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// One parameter set through solve, verification and decay analysis.
struct PipelineOutcome {
  int exit_code = kOk;
  std::string status;
  nlohmann::json report;
  std::optional<GroundstateResult> result;
  std::optional<DecayReport> decay;
};

PipelineOutcome solve_pipeline(const RunConfig& config, double alpha, double p);

}  // namespace choquard::cli
