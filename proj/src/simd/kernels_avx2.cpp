// Compiled with -mavx2 only; callers must check the CPU before entering.
#include <immintrin.h>

#include <algorithm>
#include <limits>

#include "sotune/simd.hpp"

namespace sotune::simd::avx2 {

namespace {

constexpr std::size_t kLanes = 4;

double horizontal_min(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_min_pd(lo, hi);
  return std::min(_mm_cvtsd_f64(m), _mm_cvtsd_f64(_mm_unpackhi_pd(m, m)));
}

}  // namespace

void squared_distances(std::span<const double> query, ColumnView points, std::span<double> out) {
  const std::size_t n = points.count;
  const std::size_t dim = points.dim;
  const std::size_t blocked = n - n % kLanes;

  for (std::size_t i = 0; i < blocked; i += kLanes) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < dim; ++k) {
      const __m256d col = _mm256_loadu_pd(points.data + k * points.stride + i);
      const __m256d diff = _mm256_sub_pd(col, _mm256_set1_pd(query[k]));
      acc = _mm256_add_pd(acc, _mm256_mul_pd(diff, diff));
    }
    _mm256_storeu_pd(out.data() + i, acc);
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

  __m256d best_v = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < blocked; i += kLanes) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < dim; ++k) {
      const __m256d col = _mm256_loadu_pd(points.data + k * points.stride + i);
      const __m256d diff = _mm256_sub_pd(col, _mm256_set1_pd(query[k]));
      acc = _mm256_add_pd(acc, _mm256_mul_pd(diff, diff));
    }
    best_v = _mm256_min_pd(best_v, acc);
  }
  double best = horizontal_min(best_v);
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

}  // namespace sotune::simd::avx2
