#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sotune/acquisition.hpp"
#include "sotune/candidates.hpp"
#include "sotune/core.hpp"
#include "sotune/random.hpp"
#include "sotune/surrogate.hpp"
#include "sotune/testbed.hpp"
#include "sotune/tuner.hpp"

namespace sotune {

// Names of the hyperparameters the engine knows how to apply.
inline constexpr std::string_view kLengthscale = "lengthscale";
inline constexpr std::string_view kRadius = "radius";
inline constexpr std::string_view kBetaT = "beta_t";

struct TunedHyperparameter {
  HyperparameterSpec spec;
  double initial = 0.0;
};

// Default tunable ranges: lengthscale [0.05, 2] starting at 0.5, radius [0.01, 1] starting at 0.2.
TunedHyperparameter default_lengthscale();
TunedHyperparameter default_radius();
TunedHyperparameter default_beta_t();

struct RunConfig {
  Problem problem;
  AcquisitionConfig acquisition{};
  KernelConfig kernel{};
  CandidateConfig candidates{};
  PolicyKind policy = PolicyKind::fixed;
  // Hyperparameters driven by the policy; anything absent keeps its kernel/candidate/acquisition value.
  std::vector<TunedHyperparameter> hyperparameters{};
  std::size_t budget = 400;
  std::size_t init_points = 0;  // 0 selects 2(d+1)
  std::size_t lhs_restarts = 50;
  std::uint64_t seed = 1;       // initial design seed; the optimizer stream uses seed + 10^6
  double decay_m0 = 0.25;
  std::size_t grid_levels = 5;
  std::optional<std::size_t> fail_threshold{};
  std::size_t success_threshold = 3;

  // Problem defaults with lengthscale and radius tuned, perturb_prob min(20/d, 1) and
  // the experiment-protocol budget and candidate count for the problem's dimension.
  static RunConfig defaults(Problem problem);

  std::size_t initial_points() const;
  void validate() const;
};

inline constexpr std::uint64_t kOptimizerSeedOffset = 1'000'000;

// Values used by one surrogate step.
struct StepSettings {
  double lengthscale;
  double radius;
  double beta_t;
  double w_r;
};

struct StepResult {
  Point x;
  bool regenerated = false;
  std::size_t candidates_considered = 0;
};

// One surrogate step: fit the GP, discretize around the incumbent (or uniformly), drop
// already-evaluated candidates and pick the acquisition optimum. Throws
// IllConditionedKernel from the fit and EmptyCandidateSet when one regeneration still
// leaves nothing to choose from.
StepResult srg_opt_step(const Archive& archive, const StepSettings& settings, const RunConfig& config,
                        SeededRandom& rng);

struct IterationRecord {
  std::size_t iteration = 0;   // 1-based
  std::size_t eval_count = 0;  // objective calls so far, including the design
  Point x;
  double f = 0.0;
  double best_f = 0.0;
  std::vector<double> trial;     // policy values proposed this iteration
  std::vector<double> accepted;  // policy memory after feedback
  std::optional<std::size_t> arm;
  double lengthscale = 0.0;      // values actually used by the step
  double radius = 0.0;
  double imp = 0.0;
  bool success = false;
  bool regenerated = false;
  double step_ms = 0.0;
};

struct RunTrace {
  std::vector<std::string> hyperparameter_names;
  std::vector<double> initial_config;
  std::vector<Point> design_points;
  std::vector<double> design_values;
  std::vector<IterationRecord> records;
  Point best_x;
  double best_f = 0.0;
  std::vector<ArmSummary> arms;  // final shape parameters (bandit policies only)
  std::size_t evaluations = 0;
  double total_ms = 0.0;
};

using Objective = std::function<double(std::span<const double>)>;

// Full adaptive loop on config.problem. Errors are rethrown as RunError with the iteration.
RunTrace run_optimization(const RunConfig& config);

// Same loop with a caller-supplied objective over config.problem's bounds.
RunTrace run_optimization(const RunConfig& config, const Objective& objective);

}  // namespace sotune
