#include <cstdlib>
#include <string>

#include "sotune/errors.hpp"
#include "sotune/simd.hpp"

namespace sotune::simd {

PointColumns::PointColumns(std::span<const std::vector<double>> points, std::size_t dim)
    : data_(points.size() * dim), count_(points.size()), dim_(dim) {
  for (std::size_t i = 0; i < count_; ++i) {
    if (points[i].size() != dim) throw DomainError("point dimension mismatch");
    for (std::size_t k = 0; k < dim; ++k) data_[k * count_ + i] = points[i][k];
  }
}

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

std::vector<Isa> available_isas() {
  std::vector<Isa> isas{Isa::scalar};
#if defined(SOTUNE_HAVE_AVX2)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2")) isas.push_back(Isa::avx2);
#endif
#if defined(SOTUNE_HAVE_NEON)
  isas.push_back(Isa::neon);
#endif
  return isas;
}

namespace {

using SquaredDistancesFn = void (*)(std::span<const double>, ColumnView, std::span<double>);
using MinSquaredDistanceFn = double (*)(std::span<const double>, ColumnView);

struct KernelTable {
  Isa isa;
  SquaredDistancesFn squared_distances;
  MinSquaredDistanceFn min_squared_distance;
};

KernelTable table_for(Isa isa) {
  switch (isa) {
#if defined(SOTUNE_HAVE_AVX2)
    case Isa::avx2: return {isa, &avx2::squared_distances, &avx2::min_squared_distance};
#endif
#if defined(SOTUNE_HAVE_NEON)
    case Isa::neon: return {isa, &neon::squared_distances, &neon::min_squared_distance};
#endif
    default: return {Isa::scalar, &scalar::squared_distances, &scalar::min_squared_distance};
  }
}

KernelTable select_table() {
  const auto isas = available_isas();
  if (const char* env = std::getenv("SOTUNE_SIMD"); env != nullptr && *env != '\0') {
    const std::string wanted(env);
    for (Isa isa : isas) {
      if (to_string(isa) == wanted) return table_for(isa);
    }
    // An unavailable or unknown request falls back to the reference path.
    return table_for(Isa::scalar);
  }
  return table_for(isas.back());
}

const KernelTable& table() {
  static const KernelTable t = select_table();
  return t;
}

}  // namespace

Isa active_isa() { return table().isa; }

void squared_distances(std::span<const double> query, ColumnView points, std::span<double> out) {
  table().squared_distances(query, points, out);
}

double min_squared_distance(std::span<const double> query, ColumnView points) {
  return table().min_squared_distance(query, points);
}

}  // namespace sotune::simd
