#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sotune/errors.hpp"

namespace sotune {

using Point = std::vector<double>;

// Axis-aligned box [lower_i, upper_i] for i < dim.
class Bounds {
 public:
  Bounds(std::vector<double> lower, std::vector<double> upper);

  // Same interval on every axis.
  static Bounds cube(std::size_t dim, double lower, double upper);

  std::size_t dim() const noexcept { return lower_.size(); }
  const std::vector<double>& lower() const noexcept { return lower_; }
  const std::vector<double>& upper() const noexcept { return upper_; }
  double lower(std::size_t i) const { return lower_[i]; }
  double upper(std::size_t i) const { return upper_[i]; }
  double range(std::size_t i) const { return upper_[i] - lower_[i]; }

  bool contains(std::span<const double> x) const noexcept;

  // Min-max maps between the box and [0,1]^d.
  Point to_unit(std::span<const double> x) const;
  Point from_unit(std::span<const double> u) const;

  bool operator==(const Bounds&) const = default;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

// The evaluated set with incremental best-so-far tracking. Ties keep the earliest minimizer.
class Archive {
 public:
  explicit Archive(Bounds bounds) : bounds_(std::move(bounds)) {}

  // Throws RejectedEvaluation for a non-finite value and DomainError for a point
  // of the wrong dimension or outside the bounds.
  void insert(std::span<const double> point, double value);

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  std::size_t dim() const noexcept { return bounds_.dim(); }
  const Bounds& bounds() const noexcept { return bounds_; }

  const std::vector<Point>& points() const noexcept { return points_; }
  const std::vector<double>& values() const noexcept { return values_; }
  const Point& point(std::size_t i) const { return points_[i]; }
  double value(std::size_t i) const { return values_[i]; }

  // Throws EmptyArchiveError when nothing has been inserted.
  std::size_t best_index() const;
  double best_value() const;

 private:
  Bounds bounds_;
  std::vector<Point> points_;
  std::vector<double> values_;
  std::size_t best_ = 0;
};

struct BestPoint {
  Point point;
  double value;
};

BestPoint best_of(const Archive& archive);

// Decrease of the best observed value between consecutive iterations (minimization).
constexpr double improvement(double prev_best_value, double new_best_value) noexcept {
  return prev_best_value - new_best_value;
}

// Zero improvement is a failure.
constexpr bool is_success(double imp) noexcept { return imp > 0.0; }

enum class Scale { linear, logarithmic };

// Direction of change that makes the optimizer more exploitative.
enum class Direction { decrease, increase };

struct HyperparameterSpec {
  std::string name;
  double lower = 0.0;
  double upper = 1.0;
  Scale scale = Scale::linear;
  Direction exploit_direction = Direction::decrease;

  // Throws ConfigError when lower >= upper or a log scale has lower <= 0.
  void validate() const;
  bool contains(double value) const noexcept { return value >= lower && value <= upper; }
  double clamp(double value) const noexcept;

  // Coordinates in which uniform draws, grid spacing and decay steps are taken.
  double to_internal(double value) const;
  double from_internal(double t) const;
};

struct HyperparameterState {
  HyperparameterSpec spec;
  double accepted_value = 0.0;
  int alpha = 1;
  int beta = 1;
};

}  // namespace sotune
