#pragma once

// Distance kernels over column-major point sets, with a scalar reference and
// vectorized variants chosen once at runtime.
//
// All variants accumulate per-point sums in the same coordinate order without
// fused multiply-add, so their results are bitwise identical to the scalar path.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace sotune::simd {

// Coordinate k of point i lives at data[k * stride + i].
struct ColumnView {
  const double* data = nullptr;
  std::size_t stride = 0;
  std::size_t count = 0;
  std::size_t dim = 0;

  // Points [first, count).
  ColumnView tail(std::size_t first) const {
    return {data + first, stride, first < count ? count - first : 0, dim};
  }
};

// Owning column-major copy of a point set.
class PointColumns {
 public:
  PointColumns() = default;
  PointColumns(std::span<const std::vector<double>> points, std::size_t dim);

  std::size_t size() const noexcept { return count_; }
  std::size_t dim() const noexcept { return dim_; }
  double at(std::size_t point, std::size_t coord) const { return data_[coord * count_ + point]; }
  ColumnView view() const noexcept { return {data_.data(), count_, count_, dim_}; }

 private:
  std::vector<double> data_;
  std::size_t count_ = 0;
  std::size_t dim_ = 0;
};

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa);

// Variants compiled into this binary and runnable on this CPU.
std::vector<Isa> available_isas();

// Variant used by the dispatching entry points. Picked on first use from the
// best available ISA, or from SOTUNE_SIMD=scalar|avx2|neon when set.
Isa active_isa();

// out[i] = ||query - points[i]||^2.
void squared_distances(std::span<const double> query, ColumnView points, std::span<double> out);

// min_i ||query - points[i]||^2, +inf for an empty set.
double min_squared_distance(std::span<const double> query, ColumnView points);

// Explicit variants, exposed for equivalence testing.
namespace scalar {
void squared_distances(std::span<const double> query, ColumnView points, std::span<double> out);
double min_squared_distance(std::span<const double> query, ColumnView points);
}  // namespace scalar

#if defined(SOTUNE_HAVE_AVX2)
namespace avx2 {
void squared_distances(std::span<const double> query, ColumnView points, std::span<double> out);
double min_squared_distance(std::span<const double> query, ColumnView points);
}  // namespace avx2
#endif

#if defined(SOTUNE_HAVE_NEON)
namespace neon {
void squared_distances(std::span<const double> query, ColumnView points, std::span<double> out);
double min_squared_distance(std::span<const double> query, ColumnView points);
}  // namespace neon
#endif

}  // namespace sotune::simd
