#include <arm_neon.h>

#include <algorithm>
#include <limits>

#include "sotune/simd.hpp"

namespace sotune::simd::neon {

namespace {
constexpr std::size_t kLanes = 2;
}

void squared_distances(std::span<const double> query, ColumnView points, std::span<double> out) {
  const std::size_t n = points.count;
  const std::size_t dim = points.dim;
  const std::size_t blocked = n - n % kLanes;

  for (std::size_t i = 0; i < blocked; i += kLanes) {
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t k = 0; k < dim; ++k) {
      const float64x2_t diff =
          vsubq_f64(vld1q_f64(points.data + k * points.stride + i), vdupq_n_f64(query[k]));
      acc = vaddq_f64(acc, vmulq_f64(diff, diff));
    }
    vst1q_f64(out.data() + i, acc);
  }
  for (std::size_t i = blocked; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double diff = points.data[k * points.stride + i] - query[k];
      sum += diff * diff;
    }
    out[i] = sum;
  }
}

double min_squared_distance(std::span<const double> query, ColumnView points) {
  const std::size_t n = points.count;
  const std::size_t dim = points.dim;
  const std::size_t blocked = n - n % kLanes;

  float64x2_t best_v = vdupq_n_f64(std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < blocked; i += kLanes) {
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t k = 0; k < dim; ++k) {
      const float64x2_t diff =
          vsubq_f64(vld1q_f64(points.data + k * points.stride + i), vdupq_n_f64(query[k]));
      acc = vaddq_f64(acc, vmulq_f64(diff, diff));
    }
    best_v = vminq_f64(best_v, acc);
  }
  double best = vminvq_f64(best_v);
  for (std::size_t i = blocked; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double diff = points.data[k * points.stride + i] - query[k];
      sum += diff * diff;
    }
    best = std::min(best, sum);
  }
  return best;
}

}  // namespace sotune::simd::neon
