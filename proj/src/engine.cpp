#include "sotune/engine.hpp"

#include <chrono>
#include <cmath>

#include "sotune/doe.hpp"
#include "sotune/simd.hpp"

namespace sotune {

namespace {

constexpr double kEvaluatedSqDistance = 1e-18;  // (1e-9)^2 on the unit cube

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

HyperparameterSpec make_spec(std::string_view name, double lo, double hi, Direction exploit) {
  return {std::string(name), lo, hi, Scale::linear, exploit};
}

}  // namespace

TunedHyperparameter default_lengthscale() {
  return {make_spec(kLengthscale, 0.05, 2.0, Direction::decrease), 0.5};
}

TunedHyperparameter default_radius() {
  return {make_spec(kRadius, 0.01, 1.0, Direction::decrease), 0.2};
}

TunedHyperparameter default_beta_t() {
  return {make_spec(kBetaT, 0.1, 16.0, Direction::decrease), 4.0};
}

RunConfig RunConfig::defaults(Problem problem) {
  const std::size_t dim = problem.dim();
  RunConfig config{.problem = std::move(problem)};
  config.hyperparameters = {default_lengthscale(), default_radius()};
  config.kernel.lengthscale = config.hyperparameters[0].initial;
  config.candidates.radius = config.hyperparameters[1].initial;
  config.candidates.perturb_prob = default_perturb_prob(dim);
  config.budget = dim <= 10 ? 400 : 500;
  config.candidates.count = dim <= 10 ? 1000 : 4000;
  return config;
}

std::size_t RunConfig::initial_points() const {
  return init_points == 0 ? default_init_points(problem.dim()) : init_points;
}

void RunConfig::validate() const {
  acquisition.validate();
  kernel.validate();
  candidates.validate();
  if (budget == 0) throw ConfigError("budget must be at least 1");
  if (initial_points() < 2) throw ConfigError("at least two initial points are required");
  if (lhs_restarts == 0) throw ConfigError("lhs_restarts must be at least 1");
  for (std::size_t i = 0; i < hyperparameters.size(); ++i) {
    const auto& hp = hyperparameters[i];
    if (hp.spec.name != kLengthscale && hp.spec.name != kRadius && hp.spec.name != kBetaT) {
      throw ConfigError("unknown tunable hyperparameter '" + hp.spec.name + "'");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (hyperparameters[j].spec.name == hp.spec.name) {
        throw ConfigError("hyperparameter '" + hp.spec.name + "' listed twice");
      }
    }
    hp.spec.validate();
    if (!hp.spec.contains(hp.initial)) {
      throw ConfigError("initial value of '" + hp.spec.name + "' lies outside its range");
    }
  }
  if (policy != PolicyKind::fixed && hyperparameters.empty()) {
    throw ConfigError(std::string(to_string(policy)) + " policy needs tunable hyperparameters");
  }
}

StepResult srg_opt_step(const Archive& archive, const StepSettings& settings, const RunConfig& config,
                        SeededRandom& rng) {
  const Bounds& bounds = archive.bounds();
  KernelConfig kernel = config.kernel;
  kernel.lengthscale = settings.lengthscale;
  const GpModel model = fit_gp(archive, kernel);

  CandidateConfig cand = config.candidates;
  cand.radius = settings.radius;

  std::vector<Point> unit_archive;
  unit_archive.reserve(archive.size());
  for (const auto& p : archive.points()) unit_archive.push_back(bounds.to_unit(p));
  const simd::PointColumns evaluated(unit_archive, bounds.dim());

  StepResult result;
  std::vector<Point> candidates;
  std::vector<double> distances;
  for (int attempt = 0; attempt < 2 && candidates.empty(); ++attempt) {
    result.regenerated = attempt > 0;
    auto raw = cand.mode == Discretization::dynamic
                   ? generate_dynamic(archive.point(archive.best_index()), cand, bounds, rng)
                   : generate_uniform(cand, bounds, rng);
    for (auto& c : raw) {
      const double sq = simd::min_squared_distance(bounds.to_unit(c), evaluated.view());
      if (sq < kEvaluatedSqDistance) continue;
      candidates.push_back(std::move(c));
      distances.push_back(std::sqrt(sq));
    }
  }
  if (candidates.empty()) {
    throw EmptyCandidateSet("every candidate coincides with an evaluated point, even after regeneration");
  }
  result.candidates_considered = candidates.size();

  const auto kind = config.acquisition.kind;
  std::vector<double> mu(candidates.size());
  std::vector<double> sigma(kind == AcquisitionKind::wscore ? 0 : candidates.size());
  model.predict_batch(candidates, mu, sigma);

  std::vector<double> scores(candidates.size());
  switch (kind) {
    case AcquisitionKind::ei: {
      const double f_best = archive.best_value();
      for (std::size_t i = 0; i < scores.size(); ++i) scores[i] = expected_improvement(mu[i], sigma[i], f_best);
      break;
    }
    case AcquisitionKind::ucb:
      for (std::size_t i = 0; i < scores.size(); ++i) scores[i] = confidence_bound(mu[i], sigma[i], settings.beta_t);
      break;
    case AcquisitionKind::wscore: scores = weighted_score(mu, distances, settings.w_r); break;
  }

  result.x = std::move(candidates[select_candidate(scores, orientation_of(kind))]);
  return result;
}

RunTrace run_optimization(const RunConfig& config) {
  const Problem& problem = config.problem;
  return run_optimization(config, [&problem](std::span<const double> x) { return problem.evaluate(x); });
}

RunTrace run_optimization(const RunConfig& config, const Objective& objective) {
  config.validate();
  const auto run_start = Clock::now();
  const Bounds& bounds = config.problem.bounds();

  RunTrace trace;
  Archive archive(bounds);

  try {
    SeededRandom design_rng(config.seed);
    const Design design = lhs_maximin(config.initial_points(), bounds, config.lhs_restarts, design_rng);
    for (const auto& p : design.points) {
      const double f = objective(p);
      archive.insert(p, f);
      trace.design_points.push_back(p);
      trace.design_values.push_back(f);
    }
  } catch (const std::exception& e) {
    throw RunError(0, e.what());
  }

  std::vector<HyperparameterState> states;
  for (const auto& hp : config.hyperparameters) {
    states.push_back({hp.spec, hp.initial, 1, 1});
    trace.hyperparameter_names.push_back(hp.spec.name);
  }
  PolicyOptions options;
  options.budget = config.budget;
  options.decay_m0 = config.decay_m0;
  options.grid_levels = config.grid_levels;
  options.dim = bounds.dim();
  options.fail_threshold = config.fail_threshold;
  options.success_threshold = config.success_threshold;
  options.radius_name = std::string(kRadius);

  PolicyState policy;
  try {
    policy = PolicyState::make(config.policy, std::move(states), options);
  } catch (const std::exception& e) {
    throw RunError(0, e.what());
  }
  trace.initial_config = policy.accepted_config();

  const auto lookup = [&](std::span<const double> values, std::string_view name, double fallback) {
    const auto idx = policy.index_of(name);
    return idx ? values[*idx] : fallback;
  };

  SeededRandom rng(config.seed + kOptimizerSeedOffset);
  AcquisitionConfig acquisition = config.acquisition;
  trace.records.reserve(config.budget);

  for (std::size_t t = 1; t <= config.budget; ++t) {
    try {
      const auto step_start = Clock::now();
      const double prev_best = archive.best_value();
      Proposal proposal = policy.propose(rng);

      StepSettings settings{lookup(proposal.trial, kLengthscale, config.kernel.lengthscale),
                            lookup(proposal.trial, kRadius, config.candidates.radius),
                            lookup(proposal.trial, kBetaT, config.acquisition.beta_t),
                            acquisition.current_weight()};
      StepResult step = srg_opt_step(archive, settings, config, rng);

      const double f = objective(step.x);
      archive.insert(step.x, f);
      const double imp = improvement(prev_best, archive.best_value());
      policy.feedback(imp);
      acquisition.advance();

      IterationRecord rec;
      rec.iteration = t;
      rec.eval_count = archive.size();
      rec.x = std::move(step.x);
      rec.f = f;
      rec.best_f = archive.best_value();
      rec.trial = std::move(proposal.trial);
      rec.accepted = policy.accepted_config();
      rec.arm = proposal.arm;
      rec.lengthscale = settings.lengthscale;
      rec.radius = settings.radius;
      rec.imp = imp;
      rec.success = is_success(imp);
      rec.regenerated = step.regenerated;
      rec.step_ms = elapsed_ms(step_start);
      trace.records.push_back(std::move(rec));
    } catch (const std::exception& e) {
      throw RunError(t, e.what());
    }
  }

  const auto best = best_of(archive);
  trace.best_x = best.point;
  trace.best_f = best.value;
  if (is_bandit(config.policy)) trace.arms = policy.arms_summary();
  trace.evaluations = archive.size();
  trace.total_ms = elapsed_ms(run_start);
  return trace;
}

}  // namespace sotune
