#include "sotune/core.hpp"

#include <cmath>
#include <string>

namespace sotune {

Bounds::Bounds(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.empty()) throw DomainError("bounds must have at least one dimension");
  if (lower_.size() != upper_.size()) throw DomainError("lower and upper bounds differ in length");
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (!std::isfinite(lower_[i]) || !std::isfinite(upper_[i]) || !(lower_[i] < upper_[i])) {
      throw DomainError("bounds require lower < upper in dimension " + std::to_string(i));
    }
  }
}

Bounds Bounds::cube(std::size_t dim, double lower, double upper) {
  return Bounds(std::vector<double>(dim, lower), std::vector<double>(dim, upper));
}

bool Bounds::contains(std::span<const double> x) const noexcept {
  if (x.size() != dim()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= lower_[i] && x[i] <= upper_[i])) return false;
  }
  return true;
}

Point Bounds::to_unit(std::span<const double> x) const {
  if (x.size() != dim()) throw DomainError("point dimension does not match bounds");
  Point u(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) u[i] = (x[i] - lower_[i]) / range(i);
  return u;
}

Point Bounds::from_unit(std::span<const double> u) const {
  if (u.size() != dim()) throw DomainError("point dimension does not match bounds");
  Point x(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) x[i] = lower_[i] + u[i] * range(i);
  return x;
}

void Archive::insert(std::span<const double> point, double value) {
  if (!std::isfinite(value)) throw RejectedEvaluation("objective returned a non-finite value");
  if (point.size() != dim()) throw DomainError("point dimension does not match archive bounds");
  if (!bounds_.contains(point)) throw DomainError("point lies outside the archive bounds");

  points_.emplace_back(point.begin(), point.end());
  values_.push_back(value);
  if (values_.size() == 1 || value < values_[best_]) best_ = values_.size() - 1;
}

std::size_t Archive::best_index() const {
  if (empty()) throw EmptyArchiveError("archive is empty");
  return best_;
}

double Archive::best_value() const { return values_[best_index()]; }

BestPoint best_of(const Archive& archive) {
  const std::size_t i = archive.best_index();
  return {archive.point(i), archive.value(i)};
}

void HyperparameterSpec::validate() const {
  if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper)) {
    throw ConfigError("hyperparameter '" + name + "' needs lower < upper");
  }
  if (scale == Scale::logarithmic && !(lower > 0.0)) {
    throw ConfigError("hyperparameter '" + name + "' on a log scale needs a positive lower bound");
  }
}

double HyperparameterSpec::clamp(double value) const noexcept {
  return value < lower ? lower : (value > upper ? upper : value);
}

double HyperparameterSpec::to_internal(double value) const {
  return scale == Scale::logarithmic ? std::log(value) : value;
}

double HyperparameterSpec::from_internal(double t) const {
  return clamp(scale == Scale::logarithmic ? std::exp(t) : t);
}

}  // namespace sotune
