#include "sotune/doe.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "sotune/simd.hpp"

namespace sotune {

namespace {

// Keeps v in stratum k of n over [lo, hi] despite rounding at the stratum edges.
double snap_to_stratum(double v, std::size_t k, std::size_t n, double lo, double hi) {
  const double width = hi - lo;
  const auto stratum = [&](double x) {
    return static_cast<long long>(std::floor(static_cast<double>(n) * (x - lo) / width));
  };
  const auto target = static_cast<long long>(k);
  while (stratum(v) > target) v = std::nextafter(v, lo);
  while (stratum(v) < target && v < hi) v = std::nextafter(v, hi);
  return v;
}

}  // namespace

std::vector<Point> latin_hypercube(std::size_t n, const Bounds& bounds, SeededRandom& rng) {
  const std::size_t dim = bounds.dim();
  std::vector<Point> points(n, Point(dim));
  std::vector<std::size_t> perm(n);
  const double nd = static_cast<double>(n);
  for (std::size_t k = 0; k < dim; ++k) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    rng.shuffle(perm.begin(), perm.end());
    const double lo = bounds.lower(k);
    const double hi = bounds.upper(k);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = (static_cast<double>(perm[i]) + rng.uniform()) / nd;
      points[i][k] = snap_to_stratum(lo + t * (hi - lo), perm[i], n, lo, hi);
    }
  }
  return points;
}

Design lhs_maximin(std::size_t n, const Bounds& bounds, std::size_t n_restarts, SeededRandom& rng) {
  if (n == 0) throw DomainError("design needs at least one point");
  if (n_restarts == 0) throw DomainError("design needs at least one restart");

  Design design{{}, bounds, {}, 0};
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < n_restarts; ++r) {
    auto points = latin_hypercube(n, bounds, rng);
    const double score = n >= 2 ? min_pairwise_distance(points) : 0.0;
    design.restart_scores.push_back(score);
    if (score > best_score) {
      best_score = score;
      design.points = std::move(points);
      design.chosen_restart = r;
    }
  }
  return design;
}

double min_pairwise_distance(std::span<const Point> points) {
  if (points.size() < 2) throw DomainError("min pairwise distance needs at least two points");
  const std::size_t dim = points.front().size();
  const simd::PointColumns columns(points, dim);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    best = std::min(best, simd::min_squared_distance(points[i], columns.view().tail(i + 1)));
  }
  return std::sqrt(best);
}

}  // namespace sotune
