#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sotune/core.hpp"
#include "sotune/random.hpp"

namespace sotune {

// A Latin hypercube design: per dimension, one point in each of the n equal-width strata.
struct Design {
  std::vector<Point> points;
  Bounds bounds;
  // Maximin score (min pairwise distance) of every restart, and which one was kept.
  std::vector<double> restart_scores;
  std::size_t chosen_restart = 0;
};

// One random Latin hypercube with points placed uniformly inside their strata.
std::vector<Point> latin_hypercube(std::size_t n, const Bounds& bounds, SeededRandom& rng);

// Best of n_restarts independent Latin hypercubes under the maximin criterion;
// the earliest restart wins ties. Throws DomainError when n or n_restarts is zero.
Design lhs_maximin(std::size_t n, const Bounds& bounds, std::size_t n_restarts, SeededRandom& rng);

// Smallest Euclidean distance over all pairs. Throws DomainError for fewer than two points.
double min_pairwise_distance(std::span<const Point> points);

// Number of initial evaluations used by the experiment protocol.
constexpr std::size_t default_init_points(std::size_t dim) noexcept { return 2 * (dim + 1); }

}  // namespace sotune
