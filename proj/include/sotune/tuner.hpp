#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sotune/candidates.hpp"
#include "sotune/core.hpp"
#include "sotune/random.hpp"

namespace sotune {

// Hyperparameter configuration policies:
//   fixed        values never change
//   r_rule       only the radius follows the streak rule
//   grid         round-robin over a Cartesian grid, remembering the best cell
//   rand         every value redrawn each iteration
//   hasso_rand   Thompson-sampled arm redrawn uniformly, kept only on improvement
//   hasso_decay  Thompson-sampled arm stepped by a shrinking amount, kept only on improvement
enum class PolicyKind { fixed, r_rule, grid, rand, hasso_rand, hasso_decay };

std::string_view to_string(PolicyKind kind);
PolicyKind parse_policy_kind(std::string_view name);
bool is_bandit(PolicyKind kind);

struct PolicyOptions {
  std::size_t budget = 400;             // iterations T; sets the decay rate
  double decay_m0 = 0.25;               // initial step as a fraction of the range
  double decay_final_fraction = 0.05;   // gamma^T
  std::size_t grid_levels = 5;
  std::size_t dim = 1;                  // problem dimension, for the r-rule failure streak
  std::optional<std::size_t> fail_threshold;
  std::size_t success_threshold = 3;
  std::string radius_name = "radius";
};

struct Proposal {
  std::vector<double> trial;          // one value per hyperparameter, in arm order
  std::optional<std::size_t> arm;     // arm modified this iteration (bandit kinds)
};

struct ArmSummary {
  std::string name;
  int alpha;
  int beta;
  double success_fraction;
};

class PolicyState {
 public:
  // A default-constructed state has no arms; proposing from it throws StateError.
  PolicyState() = default;

  // Arms keep the shape parameters they are given (Beta(1, 1) by default).
  // Throws ConfigError for invalid specs, out-of-range initial values or shape
  // parameters below 1, and StateError when a kind needs hyperparameters that are missing.
  static PolicyState make(PolicyKind kind, std::vector<HyperparameterState> hyperparameters,
                          const PolicyOptions& options = {});

  PolicyKind kind() const noexcept { return kind_; }
  const std::vector<HyperparameterState>& arms() const noexcept { return arms_; }
  std::size_t size() const noexcept { return arms_.size(); }
  std::optional<std::size_t> index_of(std::string_view name) const;

  std::vector<double> accepted_config() const;
  const std::vector<double>& trial_config() const noexcept { return trial_; }
  std::optional<std::size_t> last_selected_arm() const noexcept { return selected_; }
  std::size_t clock() const noexcept { return clock_; }
  double decay_rate() const noexcept { return gamma_; }

  // Current decay step for arm j at the current clock.
  double decay_step(std::size_t j) const;

  const RadiusRuleState& radius_rule() const;
  std::size_t grid_cells() const noexcept { return grid_cell_count_; }
  std::size_t grid_cursor() const noexcept { return grid_cursor_; }
  std::vector<double> grid_cell(std::size_t cell) const;
  std::optional<std::size_t> grid_best_cell() const noexcept { return grid_best_; }

  Proposal propose(SeededRandom& rng);

  // Reports the improvement produced by the last proposal. Throws ProtocolError
  // when no proposal is outstanding.
  void feedback(double imp);

  // Throws UnsupportedError for non-bandit kinds.
  std::vector<ArmSummary> arms_summary() const;

 private:
  double redraw(std::size_t j, SeededRandom& rng) const;

  PolicyKind kind_ = PolicyKind::fixed;
  std::vector<HyperparameterState> arms_;
  std::vector<double> trial_;
  std::optional<std::size_t> selected_;
  bool pending_ = false;
  bool initialized_ = false;
  std::size_t clock_ = 0;

  // hasso_decay
  double m0_ = 0.25;
  double gamma_ = 1.0;
  bool last_improved_ = false;

  // r_rule
  std::size_t radius_index_ = 0;
  std::optional<RadiusRuleState> rule_;

  // grid
  std::vector<std::vector<double>> grid_values_;
  std::size_t grid_cell_count_ = 0;
  std::size_t grid_cursor_ = 0;
  std::size_t grid_current_ = 0;
  std::vector<double> grid_gain_;
  std::optional<std::size_t> grid_best_;
  bool grid_cycled_ = false;
};

inline Proposal policy_propose(PolicyState& state, SeededRandom& rng) { return state.propose(rng); }
inline void policy_feedback(PolicyState& state, double imp) { state.feedback(imp); }
inline std::vector<ArmSummary> arms_summary(const PolicyState& state) { return state.arms_summary(); }

}  // namespace sotune
