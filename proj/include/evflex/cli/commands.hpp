#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "evflex/model/instance.hpp"
#include "evflex/model/settlement.hpp"
#include "evflex/solver/bnb.hpp"

namespace evflex::cli {

namespace fs = std::filesystem;

enum ExitCode : int {
  kExitOk = 0,
  kExitInput = 1,  // I/O, parse or validation failure
  kExitFitRefused = 2,
  kExitSolverLimit = 3,  // limit hit before any incumbent
};

/// Bad command input; maps to kExitInput.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads EVFLEX_LOG (trace, debug, info, warn, error, off) and routes
/// logging to stderr. Unset means info.
void init_logging();

// generate ------------------------------------------------------------------

struct GenerateOptions {
  fs::path records;
  std::optional<fs::path> policy;
  std::uint64_t seed = 1;
  fs::path out;
  /// Defaults to <out stem>.report.json next to the instance.
  std::optional<fs::path> report;
  // flag overrides, applied over the policy file
  std::optional<int> count;
  std::optional<double> power_cap_kw;
  std::optional<double> energy_cap_kwh;
  std::optional<int> kappa;
};

fs::path default_report_path(const fs::path& instance_out);
int cmd_generate(const GenerateOptions& options);

// solve ---------------------------------------------------------------------

struct SolveOptions {
  fs::path instance;
  fs::path out;
  /// Solver settings file: gap, time_limit_seconds, node_limit, branching,
  /// greedy_start, parallel_kernels. Flags below win over it.
  std::optional<fs::path> config;
  std::optional<double> gap;
  std::optional<double> time_limit_seconds;
  std::optional<std::int64_t> node_limit;
  std::optional<bool> greedy_start;
  // cap overrides applied to the loaded instance
  std::optional<double> power_cap_kw;
  std::optional<double> energy_cap_kwh;
};

/// Applies a solver settings document over `base`. Unknown keys throw
/// InputError.
BnbConfig solver_config_from_json(const nlohmann::json& doc, BnbConfig base = {});

struct SolveOutcome {
  SolveResult result;
  /// Present whenever the solver returned a schedule.
  std::optional<SettlementReport> settlement;
};

/// Builds, solves and settles. Throws ValidationError on a bad instance.
SolveOutcome solve_and_settle(const Instance& instance, const BnbConfig& config);

int cmd_solve(const SolveOptions& options);

// sweep ---------------------------------------------------------------------

struct SweepRow {
  double power_cap_kw = 0.0;
  double energy_cap_kwh = 0.0;
};

struct SweepSpec {
  fs::path instance;
  std::vector<SweepRow> rows;
  std::optional<fs::path> out;
  BnbConfig solver;
  /// Rows solved concurrently, one solver each.
  int threads = 1;
};

/// Relative instance and output paths resolve against the sweep file's directory.
SweepSpec load_sweep_spec(const fs::path& path);
SweepSpec sweep_spec_from_json(const nlohmann::json& doc, const fs::path& base_dir);
void check_sweep_spec(const SweepSpec& spec);

struct SweepResult {
  SweepRow caps;
  std::string status;
  /// Empty when the row produced no schedule.
  std::optional<SettlementAggregate> aggregate;
  double wall_seconds = 0.0;
};

std::vector<SweepResult> run_sweep(const Instance& base, const SweepSpec& spec);
void write_sensitivity_csv(const std::vector<SweepResult>& rows, std::ostream& out);

struct SweepOptions {
  fs::path spec;
  std::optional<fs::path> out;
  std::optional<double> gap;
  std::optional<int> threads;
};

int cmd_sweep(const SweepOptions& options);

// report --------------------------------------------------------------------

struct HistogramRow {
  double bin_left = 0.0;
  double bin_right = 0.0;
  double pdf = 0.0;
  double cdf = 0.0;
};

/// Equal-width bins over [min, max]; a constant sample gets a unit-wide
/// range around its value. Needs a non-empty sample and bins >= 1.
std::vector<HistogramRow> histogram(const std::vector<double>& sample, int bins);

struct ReportOptions {
  fs::path in;
  int bins = 40;
  fs::path out;
};

/// File names written by cmd_report, one per distribution.
inline const std::vector<std::string> kReportFiles{"energy_served.csv", "energy_not_served.csv", "compensation.csv",
                                                   "final_cost.csv"};

int cmd_report(const ReportOptions& options);

}  // namespace evflex::cli
