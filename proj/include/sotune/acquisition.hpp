#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "sotune/core.hpp"

namespace sotune {

enum class AcquisitionKind { ei, ucb, wscore };
enum class Orientation { maximize, minimize };

std::string_view to_string(AcquisitionKind kind);
AcquisitionKind parse_acquisition_kind(std::string_view name);

// Direction in which scores of this kind are optimized.
Orientation orientation_of(AcquisitionKind kind);

struct AcquisitionConfig {
  AcquisitionKind kind = AcquisitionKind::ei;
  double beta_t = 4.0;
  // Exploitation weights w_r visited cyclically by the weighted score.
  std::vector<double> weight_cycle{0.3, 0.5, 0.8, 0.95};
  std::size_t cycle_position = 0;

  void validate() const;
  double current_weight() const { return weight_cycle[cycle_position % weight_cycle.size()]; }
  void advance() { cycle_position = (cycle_position + 1) % weight_cycle.size(); }
};

double normal_pdf(double z);
double normal_cdf(double z);

// Expected improvement below f_best for a N(mu, sigma^2) prediction; max(0, f_best - mu) at sigma = 0.
double expected_improvement(double mu, double sigma, double f_best);

// Lower confidence bound mu - sqrt(beta_t) * sigma, minimized over candidates.
double confidence_bound(double mu, double sigma, double beta_t);

// W = (1 - w_r) * V_d + w_r * V_r where V_r min-max scales the predictions (lowest -> 0)
// and V_d min-max scales the negated nearest-point distances (farthest -> 0).
// Constant inputs scale to zeros. Lower W is better.
std::vector<double> weighted_score(std::span<const double> pred_values, std::span<const double> min_distances,
                                   double w_r);

struct ScoredCandidates {
  std::vector<Point> candidates;
  std::vector<double> scores;
  Orientation orientation = Orientation::maximize;
};

// Index of the best score; ties go to the lowest index. Throws DomainError on empty input.
std::size_t select_candidate(std::span<const double> scores, Orientation orientation);
std::size_t select_candidate(const ScoredCandidates& scored);

}  // namespace sotune
