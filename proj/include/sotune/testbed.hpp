#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sotune/core.hpp"

namespace sotune {

enum class ProblemId { ackley, rosenbrock, rastrigin, perm, shubert };

std::string_view to_string(ProblemId id);

// Accepts the lowercase ids used by the CLI; throws ConfigError otherwise.
ProblemId parse_problem_id(std::string_view name);

// A global-optimization test problem on its standard domain.
class Problem {
 public:
  // Throws UnsupportedError for a dimension the problem does not support and
  // ConfigError for a non-positive Perm beta.
  static Problem make(ProblemId id, std::size_t dim, double perm_beta = 0.5);

  ProblemId id() const noexcept { return id_; }
  std::size_t dim() const noexcept { return bounds_.dim(); }
  const Bounds& bounds() const noexcept { return bounds_; }
  double perm_beta() const noexcept { return perm_beta_; }
  std::string name() const;

  std::optional<double> known_optimum() const noexcept { return known_optimum_; }
  // A global minimizer when it is known in closed form.
  std::optional<Point> known_minimizer() const;

  // Throws DomainError on a dimension mismatch.
  double evaluate(std::span<const double> x) const;

 private:
  Problem(ProblemId id, Bounds bounds, double perm_beta, std::optional<double> known_optimum)
      : id_(id), bounds_(std::move(bounds)), perm_beta_(perm_beta), known_optimum_(known_optimum) {}

  ProblemId id_;
  Bounds bounds_;
  double perm_beta_;
  std::optional<double> known_optimum_;
};

double ackley(std::span<const double> x);
double rosenbrock(std::span<const double> x);
double rastrigin(std::span<const double> x);
double perm(std::span<const double> x, double beta);
double shubert(std::span<const double> x);

// Literature value of the 2-d Shubert global minimum.
inline constexpr double kShubertMinimum = -186.7309088310239;

struct CatalogEntry {
  ProblemId id;
  std::string name;
  std::size_t min_dim;
  std::size_t max_dim;  // 0 = no upper limit
  std::size_t default_dim;
  std::string domain;  // human-readable default bounds rule
  std::optional<double> known_optimum;
  double default_perm_beta;  // only meaningful for perm
};

std::vector<CatalogEntry> problem_catalog();

const CatalogEntry& catalog_entry(ProblemId id);

}  // namespace sotune
