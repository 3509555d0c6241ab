#include "sotune/candidates.hpp"

#include <algorithm>
#include <cmath>

namespace sotune {

void CandidateConfig::validate() const {
  if (count == 0) throw ConfigError("candidate count must be at least 1");
  if (!(radius >= 0.0) || !std::isfinite(radius)) throw ConfigError("radius must be non-negative");
  if (!(perturb_prob > 0.0 && perturb_prob <= 1.0)) throw ConfigError("perturb_prob must lie in (0, 1]");
}

double default_perturb_prob(std::size_t dim) {
  return std::min(20.0 / static_cast<double>(dim), 1.0);
}

std::vector<Point> generate_uniform(const CandidateConfig& config, const Bounds& bounds, SeededRandom& rng) {
  config.validate();
  std::vector<Point> out(config.count, Point(bounds.dim()));
  for (auto& p : out) {
    for (std::size_t k = 0; k < bounds.dim(); ++k) p[k] = rng.uniform(bounds.lower(k), bounds.upper(k));
  }
  return out;
}

std::vector<Point> generate_dynamic(std::span<const double> center, const CandidateConfig& config,
                                    const Bounds& bounds, SeededRandom& rng) {
  config.validate();
  const std::size_t dim = bounds.dim();
  if (!bounds.contains(center)) throw DomainError("dynamic search center lies outside the bounds");

  std::vector<Point> out(config.count, Point(center.begin(), center.end()));
  std::vector<bool> mask(dim);
  for (auto& p : out) {
    bool any = false;
    for (std::size_t k = 0; k < dim; ++k) {
      mask[k] = rng.uniform() < config.perturb_prob;
      any = any || mask[k];
    }
    if (!any) mask[rng.index(dim)] = true;
    for (std::size_t k = 0; k < dim; ++k) {
      if (!mask[k]) continue;
      const double step = config.radius * bounds.range(k) * rng.normal();
      p[k] = std::clamp(p[k] + step, bounds.lower(k), bounds.upper(k));
    }
  }
  return out;
}

RadiusRuleState RadiusRuleState::initial(double r0, std::size_t dim) {
  RadiusRuleState s;
  s.radius = r0;
  s.fail_threshold = std::max<std::size_t>(5, dim);
  s.success_threshold = 3;
  s.r_min = r0 / 64.0;
  s.r_max = r0;
  return s;
}

RadiusRuleState r_rule_update(RadiusRuleState state, bool success) {
  if (success) {
    state.consecutive_failures = 0;
    if (++state.consecutive_successes >= state.success_threshold) {
      state.radius = std::min(state.radius * 2.0, state.r_max);
      state.consecutive_successes = 0;
    }
  } else {
    state.consecutive_successes = 0;
    if (++state.consecutive_failures >= state.fail_threshold) {
      state.radius = std::max(state.radius / 2.0, state.r_min);
      state.consecutive_failures = 0;
    }
  }
  return state;
}

}  // namespace sotune
