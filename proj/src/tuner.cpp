#include "sotune/tuner.hpp"

#include <algorithm>
#include <cmath>

namespace sotune {

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::fixed: return "fixed";
    case PolicyKind::r_rule: return "r-rule";
    case PolicyKind::grid: return "grid";
    case PolicyKind::rand: return "rand";
    case PolicyKind::hasso_rand: return "hasso-rand";
    case PolicyKind::hasso_decay: return "hasso-decay";
  }
  return "unknown";
}

PolicyKind parse_policy_kind(std::string_view name) {
  for (auto kind : {PolicyKind::fixed, PolicyKind::r_rule, PolicyKind::grid, PolicyKind::rand,
                    PolicyKind::hasso_rand, PolicyKind::hasso_decay}) {
    if (to_string(kind) == name) return kind;
  }
  throw ConfigError("unknown policy '" + std::string(name) + "'");
}

bool is_bandit(PolicyKind kind) { return kind == PolicyKind::hasso_rand || kind == PolicyKind::hasso_decay; }

PolicyState PolicyState::make(PolicyKind kind, std::vector<HyperparameterState> hyperparameters,
                              const PolicyOptions& options) {
  PolicyState s;
  s.kind_ = kind;
  s.arms_ = std::move(hyperparameters);
  if (s.arms_.empty() && kind != PolicyKind::fixed) {
    throw StateError(std::string(to_string(kind)) + " policy needs at least one hyperparameter");
  }
  for (auto& arm : s.arms_) {
    arm.spec.validate();
    if (!arm.spec.contains(arm.accepted_value)) {
      throw ConfigError("initial value of '" + arm.spec.name + "' lies outside its range");
    }
    if (arm.alpha < 1 || arm.beta < 1) {
      throw ConfigError("Beta shape parameters of '" + arm.spec.name + "' must be at least 1");
    }
  }
  s.trial_ = s.accepted_config();

  switch (kind) {
    case PolicyKind::hasso_decay: {
      if (options.budget == 0) throw ConfigError("decay schedule needs a positive budget");
      if (!(options.decay_m0 > 0.0)) throw ConfigError("decay m0 must be positive");
      if (!(options.decay_final_fraction > 0.0 && options.decay_final_fraction < 1.0)) {
        throw ConfigError("decay final fraction must lie in (0, 1)");
      }
      s.m0_ = options.decay_m0;
      s.gamma_ = std::pow(options.decay_final_fraction, 1.0 / static_cast<double>(options.budget));
      break;
    }
    case PolicyKind::r_rule: {
      const auto idx = s.index_of(options.radius_name);
      if (!idx) throw StateError("r-rule policy needs a '" + options.radius_name + "' hyperparameter");
      s.radius_index_ = *idx;
      const auto& spec = s.arms_[*idx].spec;
      auto rule = RadiusRuleState::initial(s.arms_[*idx].accepted_value, options.dim);
      if (options.fail_threshold) rule.fail_threshold = *options.fail_threshold;
      rule.success_threshold = options.success_threshold;
      rule.r_min = std::max(rule.r_min, spec.lower);
      rule.r_max = std::min(rule.r_max, spec.upper);
      if (rule.fail_threshold == 0 || rule.success_threshold == 0) {
        throw ConfigError("r-rule streak thresholds must be positive");
      }
      s.rule_ = rule;
      break;
    }
    case PolicyKind::grid: {
      if (options.grid_levels < 2) throw ConfigError("grid needs at least two levels per hyperparameter");
      s.grid_cell_count_ = 1;
      for (const auto& arm : s.arms_) {
        std::vector<double> levels(options.grid_levels);
        const double lo = arm.spec.to_internal(arm.spec.lower);
        const double hi = arm.spec.to_internal(arm.spec.upper);
        for (std::size_t g = 0; g < levels.size(); ++g) {
          const double t = static_cast<double>(g) / static_cast<double>(levels.size() - 1);
          levels[g] = g + 1 == levels.size() ? arm.spec.upper : arm.spec.from_internal(lo + t * (hi - lo));
        }
        levels.front() = arm.spec.lower;
        s.grid_values_.push_back(std::move(levels));
        s.grid_cell_count_ *= options.grid_levels;
      }
      s.grid_gain_.assign(s.grid_cell_count_, 0.0);
      break;
    }
    default: break;
  }
  s.initialized_ = true;
  return s;
}

std::optional<std::size_t> PolicyState::index_of(std::string_view name) const {
  for (std::size_t j = 0; j < arms_.size(); ++j) {
    if (arms_[j].spec.name == name) return j;
  }
  return std::nullopt;
}

std::vector<double> PolicyState::accepted_config() const {
  std::vector<double> values(arms_.size());
  for (std::size_t j = 0; j < arms_.size(); ++j) values[j] = arms_[j].accepted_value;
  return values;
}

double PolicyState::decay_step(std::size_t j) const {
  const auto& spec = arms_[j].spec;
  const double width = spec.to_internal(spec.upper) - spec.to_internal(spec.lower);
  return m0_ * width * std::pow(gamma_, static_cast<double>(clock_));
}

const RadiusRuleState& PolicyState::radius_rule() const {
  if (!rule_) throw UnsupportedError("policy has no radius rule");
  return *rule_;
}

std::vector<double> PolicyState::grid_cell(std::size_t cell) const {
  if (kind_ != PolicyKind::grid) throw UnsupportedError("policy has no grid");
  std::vector<double> values(arms_.size());
  // Row-major: the last hyperparameter varies fastest.
  for (std::size_t j = arms_.size(); j-- > 0;) {
    const std::size_t levels = grid_values_[j].size();
    values[j] = grid_values_[j][cell % levels];
    cell /= levels;
  }
  return values;
}

double PolicyState::redraw(std::size_t j, SeededRandom& rng) const {
  const auto& spec = arms_[j].spec;
  return spec.from_internal(rng.uniform(spec.to_internal(spec.lower), spec.to_internal(spec.upper)));
}

Proposal PolicyState::propose(SeededRandom& rng) {
  if (!initialized_ || (is_bandit(kind_) && arms_.empty())) {
    throw StateError("policy proposes before its arms are initialized");
  }
  ++clock_;
  selected_.reset();
  trial_ = accepted_config();

  switch (kind_) {
    case PolicyKind::fixed: break;
    case PolicyKind::r_rule: trial_[radius_index_] = rule_->radius; break;
    case PolicyKind::rand:
      for (std::size_t j = 0; j < arms_.size(); ++j) trial_[j] = redraw(j, rng);
      break;
    case PolicyKind::grid:
      grid_current_ = grid_cursor_;
      trial_ = grid_cell(grid_current_);
      grid_cursor_ = (grid_cursor_ + 1) % grid_cell_count_;
      break;
    case PolicyKind::hasso_rand:
    case PolicyKind::hasso_decay: {
      std::size_t k = 0;
      double best_draw = -1.0;
      for (std::size_t j = 0; j < arms_.size(); ++j) {
        const double u = rng.beta(arms_[j].alpha, arms_[j].beta);
        if (u > best_draw) {
          best_draw = u;
          k = j;
        }
      }
      selected_ = k;
      if (kind_ == PolicyKind::hasso_rand) {
        trial_[k] = redraw(k, rng);
      } else {
        const auto& spec = arms_[k].spec;
        const double sign = spec.exploit_direction == Direction::decrease ? -1.0 : 1.0;
        const double step = last_improved_ ? sign * decay_step(k) : -sign * decay_step(k);
        trial_[k] = spec.from_internal(spec.to_internal(arms_[k].accepted_value) + step);
      }
      break;
    }
  }
  pending_ = true;
  return {trial_, selected_};
}

void PolicyState::feedback(double imp) {
  if (!pending_) throw ProtocolError("policy feedback without an outstanding proposal");
  pending_ = false;
  const bool success = is_success(imp);

  switch (kind_) {
    case PolicyKind::fixed:
    case PolicyKind::rand: break;
    case PolicyKind::r_rule: rule_ = r_rule_update(*rule_, success); break;
    case PolicyKind::grid: {
      if (success) grid_gain_[grid_current_] += imp;
      if (grid_cursor_ == 0) grid_cycled_ = true;
      if (grid_cycled_) {
        std::optional<std::size_t> best;
        for (std::size_t c = 0; c < grid_cell_count_; ++c) {
          if (grid_gain_[c] > 0.0 && (!best || grid_gain_[c] > grid_gain_[*best])) best = c;
        }
        if (best) {
          grid_best_ = best;
          const auto values = grid_cell(*best);
          for (std::size_t j = 0; j < arms_.size(); ++j) arms_[j].accepted_value = values[j];
        }
      }
      break;
    }
    case PolicyKind::hasso_rand:
    case PolicyKind::hasso_decay: {
      const std::size_t k = *selected_;
      if (success) {
        for (std::size_t j = 0; j < arms_.size(); ++j) arms_[j].accepted_value = trial_[j];
        ++arms_[k].alpha;
      } else {
        ++arms_[k].beta;
      }
      last_improved_ = success;
      break;
    }
  }
}

std::vector<ArmSummary> PolicyState::arms_summary() const {
  if (!is_bandit(kind_)) {
    throw UnsupportedError("arm summaries exist only for bandit policies, not " + std::string(to_string(kind_)));
  }
  std::vector<ArmSummary> out;
  out.reserve(arms_.size());
  for (const auto& arm : arms_) {
    out.push_back({arm.spec.name, arm.alpha, arm.beta,
                   static_cast<double>(arm.alpha) / static_cast<double>(arm.alpha + arm.beta)});
  }
  return out;
}

}  // namespace sotune
