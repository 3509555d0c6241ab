#include <algorithm>
#include <limits>

#include "sotune/simd.hpp"

namespace sotune::simd::scalar {

void squared_distances(std::span<const double> query, ColumnView points, std::span<double> out) {
  const std::size_t n = points.count;
  std::fill_n(out.begin(), n, 0.0);
  for (std::size_t k = 0; k < points.dim; ++k) {
    const double q = query[k];
    const double* col = points.data + k * points.stride;
    for (std::size_t i = 0; i < n; ++i) {
      const double diff = col[i] - q;
      out[i] += diff * diff;
    }
  }
}

double min_squared_distance(std::span<const double> query, ColumnView points) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.count; ++i) {
    double sum = 0.0;
    for (std::size_t k = 0; k < points.dim; ++k) {
      const double diff = points.data[k * points.stride + i] - query[k];
      sum += diff * diff;
    }
    best = std::min(best, sum);
  }
  return best;
}

}  // namespace sotune::simd::scalar
