#include "sotune/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace sotune {

std::string_view to_string(AcquisitionKind kind) {
  switch (kind) {
    case AcquisitionKind::ei: return "ei";
    case AcquisitionKind::ucb: return "ucb";
    case AcquisitionKind::wscore: return "wscore";
  }
  return "unknown";
}

AcquisitionKind parse_acquisition_kind(std::string_view name) {
  if (name == "ei") return AcquisitionKind::ei;
  if (name == "ucb") return AcquisitionKind::ucb;
  if (name == "wscore") return AcquisitionKind::wscore;
  throw ConfigError("unknown acquisition '" + std::string(name) + "'");
}

Orientation orientation_of(AcquisitionKind kind) {
  return kind == AcquisitionKind::ei ? Orientation::maximize : Orientation::minimize;
}

void AcquisitionConfig::validate() const {
  if (!(beta_t > 0.0) || !std::isfinite(beta_t)) throw ConfigError("beta_t must be positive");
  if (weight_cycle.empty()) throw ConfigError("weight cycle must not be empty");
  for (double w : weight_cycle) {
    if (!(w >= 0.0 && w <= 1.0)) throw ConfigError("weight cycle entries must lie in [0, 1]");
  }
}

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double expected_improvement(double mu, double sigma, double f_best) {
  const double delta = f_best - mu;
  if (!(sigma > 0.0)) return std::max(0.0, delta);
  const double z = delta / sigma;
  return std::max(0.0, delta * normal_cdf(z) + sigma * normal_pdf(z));
}

double confidence_bound(double mu, double sigma, double beta_t) { return mu - std::sqrt(beta_t) * sigma; }

namespace {

// Affine map of values onto [0, 1] with the smallest value at 0.
std::vector<double> min_max(std::span<const double> values, bool negate) {
  std::vector<double> out(values.size());
  if (values.empty()) return out;
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = negate ? -*hi_it : *lo_it;
  const double hi = negate ? -*lo_it : *hi_it;
  const double span = hi - lo;
  if (!(span > 0.0)) return out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = negate ? -values[i] : values[i];
    out[i] = (v - lo) / span;
  }
  return out;
}

}  // namespace

std::vector<double> weighted_score(std::span<const double> pred_values, std::span<const double> min_distances,
                                   double w_r) {
  if (pred_values.size() != min_distances.size() || pred_values.empty()) {
    throw DomainError("weighted score needs equal-length, non-empty inputs");
  }
  if (!(w_r >= 0.0 && w_r <= 1.0)) throw DomainError("w_r must lie in [0, 1]");
  const auto v_r = min_max(pred_values, false);
  const auto v_d = min_max(min_distances, true);
  std::vector<double> w(pred_values.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = (1.0 - w_r) * v_d[i] + w_r * v_r[i];
  return w;
}

std::size_t select_candidate(std::span<const double> scores, Orientation orientation) {
  if (scores.empty()) throw DomainError("cannot select from an empty candidate list");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    const bool better = orientation == Orientation::maximize ? scores[i] > scores[best] : scores[i] < scores[best];
    if (better) best = i;
  }
  return best;
}

std::size_t select_candidate(const ScoredCandidates& scored) {
  if (scored.candidates.size() != scored.scores.size()) {
    throw DomainError("candidate and score lists differ in length");
  }
  return select_candidate(scored.scores, scored.orientation);
}

}  // namespace sotune
