#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sotune/acquisition.hpp"
#include "sotune/candidates.hpp"
#include "sotune/engine.hpp"
#include "sotune/surrogate.hpp"
#include "sotune/testbed.hpp"
#include "sotune/tuner.hpp"

namespace sotune::harness {

// Optimizer knobs shared by every cell of an experiment.
struct OptimizerSettings {
  std::optional<std::size_t> budget;      // default 400 for d <= 10, else 500
  std::optional<std::size_t> candidates;  // default 1000 for d <= 10, else 4000
  std::optional<std::size_t> init_points; // default 2(d+1)
  std::size_t lhs_restarts = 50;
  Discretization discretization = Discretization::dynamic;
  double lengthscale = 0.5;
  std::pair<double, double> lengthscale_range{0.05, 2.0};
  Scale lengthscale_scale = Scale::linear;
  double radius = 0.2;
  std::pair<double, double> radius_range{0.01, 1.0};
  std::optional<double> perturb_prob;     // default min(20/d, 1)
  double beta_t = 4.0;
  std::pair<double, double> beta_t_range{0.1, 16.0};
  std::vector<double> weight_cycle{0.3, 0.5, 0.8, 0.95};
  MaternNu matern_nu = MaternNu::five_halves;
  double jitter = 1e-8;
  double perm_beta = 0.5;
  std::vector<std::string> arms{"lengthscale", "radius"};
  double decay_m0 = 0.25;
  std::size_t grid_levels = 5;
  std::optional<std::size_t> fail_threshold;
  std::size_t success_threshold = 3;
};

// One (problem, dimension, policy, acquisition) combination, optionally tagged with a
// sweep variant that distinguishes otherwise identical cells.
struct Cell {
  ProblemId problem = ProblemId::ackley;
  std::size_t dim = 5;
  PolicyKind policy = PolicyKind::fixed;
  AcquisitionKind acquisition = AcquisitionKind::ei;
  OptimizerSettings settings;
  std::string variant;

  // e.g. "ackley-5d_ei_hasso-rand" or "ackley-5d_ei_fixed_radius=1"
  std::string name() const;
  // Cells sharing a panel are drawn in the same convergence plot: "ackley-5d_ei".
  std::string panel() const;
  // Legend label inside a panel.
  std::string label() const;
};

struct ExperimentSpec {
  std::vector<Cell> cells;
  std::size_t repetitions = 30;
  std::uint64_t base_seed = 1;
  std::filesystem::path output_dir = "results";
  bool record_timing = false;
};

// Reads a flat "key = value" file (see README for the grammar). Unknown keys,
// duplicates, bad values and unresolvable cells throw ParseError.
ExperimentSpec parse_config(const std::filesystem::path& path);
ExperimentSpec parse_config_text(std::string_view text);

// Every key parse_config accepts.
const std::vector<std::string>& config_keys();

// Fully resolved engine configuration for repetition seed `seed`.
RunConfig make_run_config(const Cell& cell, std::uint64_t seed);

std::string_view to_string(Discretization mode);
Discretization parse_discretization(std::string_view name);
std::string_view to_string(MaternNu nu);
MaternNu parse_matern_nu(std::string_view text);

}  // namespace sotune::harness
