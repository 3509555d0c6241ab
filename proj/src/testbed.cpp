#include "sotune/testbed.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace sotune {

namespace {

void check_dim(std::span<const double> x, std::size_t dim) {
  if (x.size() != dim) {
    throw DomainError("expected a " + std::to_string(dim) + "-d point, got " +
                      std::to_string(x.size()));
  }
}

const std::array<CatalogEntry, 5>& catalog_table() {
  static const std::array<CatalogEntry, 5> table{{
      {ProblemId::ackley, "ackley", 1, 0, 5, "[-32.768, 32.768]^d", 0.0, 0.5},
      {ProblemId::rosenbrock, "rosenbrock", 2, 0, 10, "[-5, 10]^d", 0.0, 0.5},
      {ProblemId::rastrigin, "rastrigin", 1, 0, 10, "[-5.12, 5.12]^d", 0.0, 0.5},
      {ProblemId::perm, "perm", 1, 0, 10, "[-d, d]^d", 0.0, 0.5},
      {ProblemId::shubert, "shubert", 2, 2, 2, "[-10, 10]^2", kShubertMinimum, 0.5},
  }};
  return table;
}

}  // namespace

std::string_view to_string(ProblemId id) { return catalog_entry(id).name; }

ProblemId parse_problem_id(std::string_view name) {
  for (const auto& entry : catalog_table()) {
    if (entry.name == name) return entry.id;
  }
  throw ConfigError("unknown problem '" + std::string(name) + "'");
}

const CatalogEntry& catalog_entry(ProblemId id) {
  for (const auto& entry : catalog_table()) {
    if (entry.id == id) return entry;
  }
  throw ConfigError("unknown problem id");
}

std::vector<CatalogEntry> problem_catalog() {
  return {catalog_table().begin(), catalog_table().end()};
}

Problem Problem::make(ProblemId id, std::size_t dim, double perm_beta) {
  const auto& entry = catalog_entry(id);
  if (dim < entry.min_dim || (entry.max_dim != 0 && dim > entry.max_dim)) {
    throw UnsupportedError(entry.name + " does not support dimension " + std::to_string(dim));
  }
  if (!(perm_beta > 0.0)) throw ConfigError("perm beta must be positive");

  switch (id) {
    case ProblemId::ackley:
      return Problem(id, Bounds::cube(dim, -32.768, 32.768), perm_beta, entry.known_optimum);
    case ProblemId::rosenbrock:
      return Problem(id, Bounds::cube(dim, -5.0, 10.0), perm_beta, entry.known_optimum);
    case ProblemId::rastrigin:
      return Problem(id, Bounds::cube(dim, -5.12, 5.12), perm_beta, entry.known_optimum);
    case ProblemId::perm: {
      const double d = static_cast<double>(dim);
      return Problem(id, Bounds::cube(dim, -d, d), perm_beta, entry.known_optimum);
    }
    case ProblemId::shubert:
      return Problem(id, Bounds::cube(dim, -10.0, 10.0), perm_beta, entry.known_optimum);
  }
  throw ConfigError("unknown problem id");
}

std::string Problem::name() const { return std::string(to_string(id_)); }

std::optional<Point> Problem::known_minimizer() const {
  const std::size_t d = dim();
  switch (id_) {
    case ProblemId::ackley:
    case ProblemId::rastrigin: return Point(d, 0.0);
    case ProblemId::rosenbrock: return Point(d, 1.0);
    case ProblemId::perm: {
      Point x(d);
      for (std::size_t j = 0; j < d; ++j) x[j] = 1.0 / static_cast<double>(j + 1);
      return x;
    }
    case ProblemId::shubert: return std::nullopt;  // 18 global minimizers, none in closed form
  }
  return std::nullopt;
}

double Problem::evaluate(std::span<const double> x) const {
  check_dim(x, dim());
  switch (id_) {
    case ProblemId::ackley: return ackley(x);
    case ProblemId::rosenbrock: return rosenbrock(x);
    case ProblemId::rastrigin: return rastrigin(x);
    case ProblemId::perm: return perm(x, perm_beta_);
    case ProblemId::shubert: return shubert(x);
  }
  throw ConfigError("unknown problem id");
}

double ackley(std::span<const double> x) {
  constexpr double a = 20.0;
  constexpr double b = 0.2;
  constexpr double c = 2.0 * std::numbers::pi;
  const double n = static_cast<double>(x.size());
  double sum_sq = 0.0;
  double sum_cos = 0.0;
  for (double xi : x) {
    sum_sq += xi * xi;
    sum_cos += std::cos(c * xi);
  }
  return -a * std::exp(-b * std::sqrt(sum_sq / n)) - std::exp(sum_cos / n) + a + std::numbers::e;
}

double rosenbrock(std::span<const double> x) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double valley = x[i + 1] - x[i] * x[i];
    const double offset = x[i] - 1.0;
    sum += 100.0 * valley * valley + offset * offset;
  }
  return sum;
}

double rastrigin(std::span<const double> x) {
  double sum = 10.0 * static_cast<double>(x.size());
  for (double xi : x) sum += xi * xi - 10.0 * std::cos(2.0 * std::numbers::pi * xi);
  return sum;
}

double perm(std::span<const double> x, double beta) {
  const std::size_t d = x.size();
  double outer = 0.0;
  for (std::size_t i = 1; i <= d; ++i) {
    const double power = static_cast<double>(i);
    double inner = 0.0;
    for (std::size_t j = 1; j <= d; ++j) {
      const double jd = static_cast<double>(j);
      inner += (jd + beta) * (std::pow(x[j - 1], power) - 1.0 / std::pow(jd, power));
    }
    outer += inner * inner;
  }
  return outer;
}

double shubert(std::span<const double> x) {
  double product = 1.0;
  for (double xi : x) {
    double sum = 0.0;
    for (int k = 1; k <= 5; ++k) sum += k * std::cos((k + 1) * xi + k);
    product *= sum;
  }
  return product;
}

}  // namespace sotune
