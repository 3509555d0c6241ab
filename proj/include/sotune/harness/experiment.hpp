#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sotune/engine.hpp"
#include "sotune/harness/config.hpp"
#include "sotune/harness/csv.hpp"

namespace sotune::harness {

// Best-so-far curves of one cell across repetitions.
struct ConvergenceTable {
  std::string label;
  std::vector<std::vector<double>> best;  // successful runs x iterations
  std::vector<double> median;
  std::vector<double> q25;
  std::vector<double> q75;
  std::vector<double> run_ms;

  std::size_t iterations() const noexcept { return median.size(); }
  std::vector<SummaryRow> summary() const;

  // Per-iteration median and quartiles of the given rows (all of equal length).
  static ConvergenceTable from_runs(std::string label, std::vector<std::vector<double>> rows,
                                    std::vector<double> run_ms = {});
  static ConvergenceTable from_summary(std::string label, const std::vector<SummaryRow>& rows);
};

// Linear-interpolation quantile of already sorted values, q in [0, 1].
double quantile_sorted(const std::vector<double>& sorted, double q);

struct RunOutcome {
  std::size_t cell = 0;
  std::size_t repetition = 0;
  std::optional<RunTrace> trace;
  std::string error;
};

struct ArmAverage {
  std::string name;
  double mean_fraction;
};

struct CellResult {
  Cell cell;
  ConvergenceTable table;
  std::vector<ArmAverage> arms;  // bandit policies only
  double mean_step_ms = 0.0;
  double mean_run_ms = 0.0;
};

struct ExperimentResult {
  std::vector<CellResult> cells;
  std::vector<RunOutcome> failures;

  bool ok() const noexcept { return failures.empty(); }
};

// Worker count from SOTUNE_WORKERS, else the hardware concurrency (at least 1).
std::size_t worker_count_from_env();

// Executes every (cell, repetition) pair on a bounded pool. Repetition r of every cell
// uses seed base_seed + r, so all policies of a problem share the r-th initial design.
// Outcomes come back in (cell, repetition) order regardless of scheduling.
std::vector<RunOutcome> execute_runs(const ExperimentSpec& spec, std::size_t workers);

// Runs and writes, under spec.output_dir:
//   runs/<cell>/run_<r>.csv, runs/<cell>/design_<r>.csv, summary/<cell>.csv,
//   arms/<cell>.csv (bandit policies), plots/<panel>.svg,
//   timing.csv (record_timing only), failures.csv (when a run failed).
// Failed runs are recorded; the remaining runs still complete.
ExperimentResult run_experiment(const ExperimentSpec& spec, std::size_t workers);

struct SweepRequest {
  ProblemId problem = ProblemId::ackley;
  std::size_t dim = 5;
  std::string hyperparameter;         // lengthscale | radius | beta_t | w_r
  std::vector<std::string> values;    // radius accepts "r-rule"; w_r accepts "a:b:c" cycles
  // Unset: wscore for w_r, ucb for beta_t, otherwise ei.
  std::optional<AcquisitionKind> acquisition;
  std::size_t repetitions = 30;
  std::uint64_t seed = 1;
  OptimizerSettings settings;
  std::filesystem::path output_dir = "sweep";
};

// One fixed-policy cell per listed value (r-rule for radius=r-rule). Every value is
// validated before anything runs; throws ConfigError otherwise.
ExperimentSpec make_sweep_spec(const SweepRequest& request);

}  // namespace sotune::harness
