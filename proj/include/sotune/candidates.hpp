#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sotune/core.hpp"
#include "sotune/random.hpp"

namespace sotune {

enum class Discretization { uniform, dynamic };

struct CandidateConfig {
  std::size_t count = 1000;
  double radius = 0.2;        // perturbation std-dev as a fraction of each dimension's range
  double perturb_prob = 1.0;  // chance that a coordinate is perturbed
  Discretization mode = Discretization::dynamic;

  void validate() const;
};

// Default probability of perturbing a coordinate in d dimensions: min(20/d, 1).
double default_perturb_prob(std::size_t dim);

// count points i.i.d. uniform in the box.
std::vector<Point> generate_uniform(const CandidateConfig& config, const Bounds& bounds, SeededRandom& rng);

// Dynamic coordinate search: every candidate copies the center, perturbs each coordinate
// with probability perturb_prob (forcing one when none is picked) by Gaussian noise with
// std-dev radius * range, and clips to the box.
std::vector<Point> generate_dynamic(std::span<const double> center, const CandidateConfig& config,
                                    const Bounds& bounds, SeededRandom& rng);

// Streak-based radius control: halve after fail_threshold consecutive failures,
// double after success_threshold consecutive successes, clamped to [r_min, r_max].
struct RadiusRuleState {
  double radius = 0.2;
  std::size_t consecutive_failures = 0;
  std::size_t consecutive_successes = 0;
  std::size_t fail_threshold = 5;
  std::size_t success_threshold = 3;
  double r_min = 0.2 / 64.0;
  double r_max = 0.2;

  // Conventional defaults for a d-dimensional problem starting from r0:
  // fail_threshold max(5, d), success_threshold 3, r_min r0 / 2^6, r_max r0.
  static RadiusRuleState initial(double r0, std::size_t dim);
};

RadiusRuleState r_rule_update(RadiusRuleState state, bool success);

}  // namespace sotune
