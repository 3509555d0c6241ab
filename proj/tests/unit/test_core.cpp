#include <doctest.h>

#include <cmath>
#include <limits>

#include "sotune/core.hpp"
#include "sotune/errors.hpp"
#include "sotune/random.hpp"

using namespace sotune;

TEST_CASE("bounds reject empty, mismatched and inverted boxes") {
  CHECK_THROWS_AS(Bounds({}, {}), DomainError);
  CHECK_THROWS_AS(Bounds({0.0}, {1.0, 2.0}), DomainError);
  CHECK_THROWS_AS(Bounds({1.0}, {1.0}), DomainError);
  CHECK_THROWS_AS(Bounds({2.0}, {1.0}), DomainError);
  CHECK_THROWS_AS(Bounds({0.0}, {std::numeric_limits<double>::infinity()}), DomainError);
}

TEST_CASE("unit mapping round trips") {
  const Bounds b({-5.0, 0.0}, {10.0, 2.0});
  const Point x{2.5, 0.5};
  const Point u = b.to_unit(x);
  CHECK(u[0] == doctest::Approx(0.5));
  CHECK(u[1] == doctest::Approx(0.25));
  const Point back = b.from_unit(u);
  CHECK(back[0] == doctest::Approx(x[0]));
  CHECK(back[1] == doctest::Approx(x[1]));
  CHECK(b.contains(x));
  CHECK_FALSE(b.contains(Point{11.0, 0.0}));
  CHECK_FALSE(b.contains(Point{1.0}));
}

TEST_CASE("archive tracks the earliest minimizer") {
  Archive a(Bounds::cube(2, 0.0, 1.0));
  CHECK_THROWS_AS(a.best_index(), EmptyArchiveError);
  CHECK_THROWS_AS(a.best_value(), EmptyArchiveError);
  a.insert(Point{0.1, 0.1}, 3.0);
  a.insert(Point{0.2, 0.2}, 1.0);
  a.insert(Point{0.3, 0.3}, 1.0);
  a.insert(Point{0.4, 0.4}, 2.0);
  CHECK(a.size() == 4);
  CHECK(a.best_index() == 1);
  CHECK(a.best_value() == 1.0);
  const auto best = best_of(a);
  CHECK(best.point == Point{0.2, 0.2});
}

TEST_CASE("archive rejects bad evaluations without changing state") {
  Archive a(Bounds::cube(1, 0.0, 1.0));
  a.insert(Point{0.5}, 1.0);
  CHECK_THROWS_AS(a.insert(Point{0.2}, std::nan("")), RejectedEvaluation);
  CHECK_THROWS_AS(a.insert(Point{0.2}, std::numeric_limits<double>::infinity()), RejectedEvaluation);
  CHECK_THROWS_AS(a.insert(Point{1.5}, 0.0), DomainError);
  CHECK_THROWS_AS(a.insert(Point{0.1, 0.1}, 0.0), DomainError);
  CHECK(a.size() == 1);
}

TEST_CASE("best value is monotone under random inserts") {
  SeededRandom rng(7);
  Archive a(Bounds::cube(3, -1.0, 1.0));
  double prev = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 1000; ++i) {
    a.insert(Point{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)}, rng.normal());
    CHECK(a.best_value() <= prev);
    prev = a.best_value();
  }
}

TEST_CASE("improvement and success") {
  CHECK(improvement(5.0, 3.0) == 2.0);
  CHECK(improvement(3.0, 3.0) == 0.0);
  CHECK(is_success(2.0));
  CHECK_FALSE(is_success(0.0));
  CHECK_FALSE(is_success(-1.0));
}

TEST_CASE("hyperparameter spec validation and log scale") {
  HyperparameterSpec bad{"x", 1.0, 1.0};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  HyperparameterSpec neg_log{"x", -1.0, 1.0, Scale::logarithmic};
  CHECK_THROWS_AS(neg_log.validate(), ConfigError);

  HyperparameterSpec s{"lengthscale", 0.01, 1.0, Scale::logarithmic};
  s.validate();
  CHECK(s.to_internal(0.1) == doctest::Approx(std::log(0.1)));
  CHECK(s.from_internal(s.to_internal(0.3)) == doctest::Approx(0.3));
  CHECK(s.from_internal(10.0) == 1.0);
  CHECK(s.clamp(-3.0) == 0.01);
  CHECK(s.contains(0.5));
  CHECK_FALSE(s.contains(2.0));
}

TEST_CASE("seeded streams are reproducible and uniform stays in [0, 1)") {
  SeededRandom a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    differs |= x != c.uniform();
  }
  CHECK(differs);
}
