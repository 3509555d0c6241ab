#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "oracles.hpp"
#include "sotune/candidates.hpp"
#include "sotune/doe.hpp"
#include "sotune/engine.hpp"
#include "sotune/errors.hpp"
#include "sotune/surrogate.hpp"

using namespace sotune;

namespace {

RunConfig small_config(ProblemId id, std::size_t dim, PolicyKind policy, std::size_t budget = 20) {
  RunConfig c = RunConfig::defaults(Problem::make(id, dim));
  c.policy = policy;
  c.budget = budget;
  c.candidates.count = 200;
  c.lhs_restarts = 5;
  c.seed = 3;
  return c;
}

Archive design_archive(const RunConfig& c) {
  SeededRandom rng(c.seed);
  const Design d = lhs_maximin(c.initial_points(), c.problem.bounds(), c.lhs_restarts, rng);
  Archive a(c.problem.bounds());
  for (const auto& p : d.points) a.insert(p, c.problem.evaluate(p));
  return a;
}

}  // namespace

TEST_CASE("defaults follow the experiment protocol") {
  const RunConfig c10 = RunConfig::defaults(Problem::make(ProblemId::rosenbrock, 10));
  CHECK(c10.budget == 400);
  CHECK(c10.candidates.count == 1000);
  CHECK(c10.initial_points() == 22);
  CHECK(c10.candidates.perturb_prob == 1.0);
  CHECK(c10.hyperparameters.size() == 2);
  CHECK(c10.hyperparameters[0].spec.name == kLengthscale);
  CHECK(c10.hyperparameters[1].spec.name == kRadius);
  const RunConfig c30 = RunConfig::defaults(Problem::make(ProblemId::rastrigin, 30));
  CHECK(c30.budget == 500);
  CHECK(c30.candidates.count == 4000);
  CHECK(c30.candidates.perturb_prob == doctest::Approx(20.0 / 30.0));
}

TEST_CASE("every policy satisfies the loop contract") {
  for (auto policy : {PolicyKind::fixed, PolicyKind::r_rule, PolicyKind::grid, PolicyKind::rand,
                      PolicyKind::hasso_rand, PolicyKind::hasso_decay}) {
    for (auto acq : {AcquisitionKind::ei, AcquisitionKind::ucb, AcquisitionKind::wscore}) {
      CAPTURE(to_string(policy));
      CAPTURE(to_string(acq));
      RunConfig c = small_config(ProblemId::ackley, 3, policy);
      c.acquisition.kind = acq;
      const RunTrace t = run_optimization(c);
      const auto problem = oracle::validate_trace(t, c);
      CHECK_MESSAGE(!problem, problem.value_or(""));
      CHECK(t.arms.size() == (is_bandit(policy) ? 2u : 0u));
    }
  }
}

TEST_CASE("the objective is called exactly n + T times") {
  for (std::size_t d : {2u, 10u}) {
    RunConfig c = small_config(ProblemId::rosenbrock, d, PolicyKind::hasso_rand, 15);
    std::size_t calls = 0;
    std::size_t calls_before_loop = 0;
    const RunTrace t = run_optimization(c, [&](std::span<const double> x) {
      ++calls;
      return c.problem.evaluate(x);
    });
    calls_before_loop = t.design_values.size();
    CHECK(calls == 2 * (d + 1) + 15);
    CHECK(calls_before_loop == 2 * (d + 1));
    CHECK(t.records.front().eval_count == 2 * (d + 1) + 1);
    CHECK(t.records.back().eval_count == calls);
    CHECK(t.evaluations == calls);
  }
}

TEST_CASE("fixed policy keeps its configuration") {
  const RunConfig c = small_config(ProblemId::rastrigin, 4, PolicyKind::fixed);
  const RunTrace t = run_optimization(c);
  for (const auto& r : t.records) {
    CHECK(r.trial == std::vector<double>{0.5, 0.2});
    CHECK(r.lengthscale == 0.5);
    CHECK(r.radius == 0.2);
  }
}

TEST_CASE("runs are reproducible and share designs across policies") {
  const RunConfig a = small_config(ProblemId::perm, 4, PolicyKind::hasso_decay);
  const RunTrace t1 = run_optimization(a);
  const RunTrace t2 = run_optimization(a);
  REQUIRE(t1.records.size() == t2.records.size());
  for (std::size_t i = 0; i < t1.records.size(); ++i) {
    CHECK(t1.records[i].x == t2.records[i].x);
    CHECK(t1.records[i].f == t2.records[i].f);
    CHECK(t1.records[i].trial == t2.records[i].trial);
  }
  RunConfig b = a;
  b.policy = PolicyKind::grid;
  const RunTrace t3 = run_optimization(b);
  CHECK(t3.design_points == t1.design_points);
  RunConfig other_seed = a;
  other_seed.seed = 4;
  CHECK(run_optimization(other_seed).design_points != t1.design_points);
}

TEST_CASE("pure exploitation picks the lowest posterior mean") {
  RunConfig c = small_config(ProblemId::ackley, 2, PolicyKind::fixed);
  c.acquisition.kind = AcquisitionKind::wscore;
  const Archive archive = design_archive(c);
  const StepSettings settings{0.3, 0.2, 4.0, 1.0};

  SeededRandom rng(123), replay(123);
  const StepResult step = srg_opt_step(archive, settings, c, rng);

  CandidateConfig cand = c.candidates;
  cand.radius = settings.radius;
  const auto cands = generate_dynamic(archive.point(archive.best_index()), cand, archive.bounds(), replay);
  KernelConfig k = c.kernel;
  k.lengthscale = settings.lengthscale;
  const GpModel m = fit_gp(archive, k);
  double best_mu = std::numeric_limits<double>::infinity();
  Point best;
  for (const auto& x : cands) {
    const double mu = m.predict(x).mu;
    if (mu < best_mu) {
      best_mu = mu;
      best = x;
    }
  }
  CHECK(step.x == best);
  CHECK_FALSE(step.regenerated);

  SeededRandom again(123);
  CHECK(srg_opt_step(archive, settings, c, again).x == step.x);
}

TEST_CASE("zero radius exhausts the candidate set") {
  RunConfig c = small_config(ProblemId::ackley, 2, PolicyKind::fixed);
  const Archive archive = design_archive(c);
  SeededRandom rng(1);
  CHECK_THROWS_AS(srg_opt_step(archive, StepSettings{0.5, 0.0, 4.0, 0.5}, c, rng), EmptyCandidateSet);

  c.candidates.radius = 0.0;
  c.hyperparameters.clear();
  try {
    run_optimization(c);
    FAIL("expected a run error");
  } catch (const RunError& e) {
    CHECK(e.iteration() == 1);
  }
}

TEST_CASE("objective failures carry the iteration") {
  RunConfig c = small_config(ProblemId::ackley, 2, PolicyKind::fixed, 10);
  std::size_t calls = 0;
  const std::size_t n = c.initial_points();
  try {
    run_optimization(c, [&](std::span<const double> x) {
      return ++calls == n + 4 ? std::nan("") : c.problem.evaluate(x);
    });
    FAIL("expected a run error");
  } catch (const RunError& e) {
    CHECK(e.iteration() == 4);
  }
  calls = 0;
  try {
    run_optimization(c, [&](std::span<const double>) -> double { throw std::runtime_error("boom"); });
    FAIL("expected a run error");
  } catch (const RunError& e) {
    CHECK(e.iteration() == 0);
  }
}

TEST_CASE("config validation") {
  RunConfig c = small_config(ProblemId::ackley, 2, PolicyKind::hasso_rand);
  c.budget = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.budget = 5;
  c.init_points = 1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.init_points = 0;
  c.hyperparameters.clear();
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.hyperparameters = {default_lengthscale(), default_lengthscale()};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.hyperparameters = {default_beta_t()};
  c.hyperparameters[0].initial = 100.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("beta_t can be tuned") {
  RunConfig c = small_config(ProblemId::ackley, 3, PolicyKind::rand);
  c.acquisition.kind = AcquisitionKind::ucb;
  c.hyperparameters = {default_beta_t()};
  const RunTrace t = run_optimization(c);
  bool varied = false;
  for (const auto& r : t.records) varied |= r.trial[0] != 4.0;
  CHECK(varied);
  CHECK(t.records.front().lengthscale == 0.5);
}
