// Acceptance criteria AC1-AC9. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sotune/acquisition.hpp"
#include "sotune/doe.hpp"
#include "sotune/engine.hpp"
#include "sotune/harness/config.hpp"
#include "sotune/harness/experiment.hpp"
#include "sotune/surrogate.hpp"
#include "sotune/testbed.hpp"
#include "sotune/tuner.hpp"

namespace fs = std::filesystem;
using namespace sotune;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), f, static_cast<double>(args)...);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// ---------------------------------------------------------------------------

Outcome ac1_ground_truth() {
  Outcome o;
  for (std::size_t d : {2u, 5u, 10u, 30u}) {
    o.require(std::abs(rosenbrock(std::vector<double>(d, 1.0))) < 1e-9, "rosenbrock(1..1) != 0");
    o.require(std::abs(rastrigin(std::vector<double>(d, 0.0))) < 1e-9, "rastrigin(0) != 0");
    o.require(std::abs(rastrigin(std::vector<double>(d, 1.0)) - static_cast<double>(d)) < 1e-9, "rastrigin(1) != d");
    o.require(std::abs(ackley(std::vector<double>(d, 0.0))) < 1e-9, "ackley(0) != 0");
    std::vector<double> inv(d);
    for (std::size_t j = 0; j < d; ++j) inv[j] = 1.0 / static_cast<double>(j + 1);
    o.require(std::abs(perm(inv, 0.5)) < 1e-9, "perm(1/j) != 0");
  }
  const double oracle_min = oracle::shubert_minimum();
  const auto known = Problem::make(ProblemId::shubert, 2).known_optimum();
  o.require(known && std::abs(*known - oracle_min) < 1e-3, "shubert optimum differs from the grid oracle");
  if (o.pass) o.detail = fmt("shubert oracle %.10f, catalog %.10f", oracle_min, known.value_or(NAN));
  return o;
}

Outcome ac2_gp() {
  Outcome o;
  SeededRandom rng(20240601);
  double worst_mu = 0, worst_sigma = 0, worst_interp = 0, worst_interp_wide = 0, worst_var = -1;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t dim = 1 + trial % 2;
    const std::size_t n = 2 + rng.index(14);
    const Bounds b = Bounds::cube(dim, -3.0, 2.0);
    std::vector<Point> xs;
    std::vector<double> ys;
    Archive archive(b);
    for (std::size_t i = 0; i < n; ++i) {
      Point p(dim);
      for (auto& v : p) v = rng.uniform(-3.0, 2.0);
      double y = 0;
      for (double v : p) y += std::cos(3 * v) + 0.5 * v;
      xs.push_back(p);
      ys.push_back(y);
      archive.insert(p, y);
    }
    KernelConfig wide;
    wide.lengthscale = rng.uniform(0.05, 1.0);
    for (int pass = 0; pass < 2; ++pass) {
      const bool is_default = pass == 0;
      const KernelConfig cfg = is_default ? KernelConfig{} : wide;
      const GpModel m = fit_gp(archive, cfg);
      const oracle::DenseGp g(xs, ys, b.lower(), b.upper(), cfg.lengthscale, cfg.amplitude, 5, m.jitter_used());
      for (int k = 0; k < 1000; ++k) {
        Point x(dim);
        for (auto& v : x) v = rng.uniform(-3.0, 2.0);
        const auto p = m.predict(x);
        if (k < 50) {
          const auto q = g.predict(x);
          worst_mu = std::max(worst_mu, std::abs(p.mu - q.mu));
          worst_sigma = std::max(worst_sigma, std::abs(p.sigma - q.sigma));
        }
        const double s = p.sigma / m.target_scale();
        worst_var = std::max(worst_var, s * s - cfg.amplitude);
      }
      // Residual at a training point is jitter * weight, for this model and the oracle alike.
      double& interp = is_default ? worst_interp : worst_interp_wide;
      for (std::size_t i = 0; i < n; ++i) {
        interp = std::max(interp, std::abs(m.predict(xs[i]).mu - ys[i]) / m.target_scale());
      }
    }
  }
  o.require(worst_mu <= 1e-8, fmt("mu deviates from the dense solve by %.3g", worst_mu));
  o.require(worst_sigma <= 1e-8, fmt("sigma deviates from the dense solve by %.3g", worst_sigma));
  o.require(worst_interp <= 1e-4 && worst_interp_wide <= 1e-4,
            fmt("interpolation error %.3g target scales (default lengthscale), %.3g (random lengthscale)",
                worst_interp, worst_interp_wide));
  o.require(worst_var <= 1e-9, fmt("posterior variance exceeds the prior by %.3g", worst_var));
  const std::string measured = fmt("max |dmu| %.2g, max |dsigma| %.2g, interp %.2g (random lengthscale %.2g), "
                                   "var excess %.2g", worst_mu, worst_sigma, worst_interp, worst_interp_wide, worst_var);
  o.detail = o.pass ? measured : o.detail + " | " + measured;
  return o;
}

// Standard normal quantile by Newton iteration on the erfc-based CDF.
double normal_quantile(double u) {
  double z = 0;
  for (int i = 0; i < 100; ++i) {
    const double err = oracle::normal_cdf(z) - u;
    const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2 * std::numbers::pi);
    const double step = err / std::max(pdf, 1e-300);
    z -= std::clamp(step, -1.0, 1.0);
    if (std::abs(step) < 1e-14) break;
  }
  return z;
}

Outcome ac3_ei() {
  Outcome o;
  constexpr std::size_t kSamples = 1000000;
  // Stratified standard-normal sample: one draw per equal-probability stratum.
  SeededRandom rng(314159);
  std::vector<double> z(kSamples);
  for (std::size_t i = 0; i < kSamples; ++i) z[i] = normal_quantile((i + rng.uniform()) / kSamples);

  double worst_ratio = 0;
  for (int t = 0; t < 100; ++t) {
    const double mu = rng.uniform(-3, 3);
    const double sigma = rng.uniform(0.01, 3);
    const double f_best = rng.uniform(-3, 3);
    double sum = 0;
    for (double zi : z) sum += std::max(0.0, f_best - (mu + sigma * zi));
    const double mc = sum / kSamples;
    const double ei = expected_improvement(mu, sigma, f_best);
    const double tol = std::max(1e-2 * std::abs(mc), 1e-4);
    worst_ratio = std::max(worst_ratio, std::abs(ei - mc) / tol);
    o.require(std::abs(ei - mc) <= tol, fmt("mu %.3f sigma %.3f f_best %.3f: EI %.6g vs MC %.6g", mu, sigma, f_best,
                                            ei) + fmt(" (MC %.6g)", mc));
  }
  for (int t = 0; t < 100000; ++t) {
    const double ei = expected_improvement(rng.uniform(-1e3, 1e3), rng.uniform(0, 1e2), rng.uniform(-1e3, 1e3));
    o.require(ei >= 0.0, "negative EI");
  }
  if (o.pass) o.detail = fmt("worst |EI - MC| / tolerance %.3f over 100 triples; EI >= 0 on 1e5 draws", worst_ratio);
  return o;
}

HyperparameterState arm(const char* name, double lo, double hi, double init, int a, int b) {
  HyperparameterState s;
  s.spec = {name, lo, hi, Scale::linear, Direction::decrease};
  s.accepted_value = init;
  s.alpha = a;
  s.beta = b;
  return s;
}

Outcome ac4_thompson() {
  Outcome o;
  const double exact = oracle::beta_win_probability(8, 4, 3, 9);
  auto frequency = [](PolicyState p, std::uint64_t seed) {
    SeededRandom rng(seed);
    std::size_t first = 0;
    for (int i = 0; i < 100000; ++i) first += *p.propose(rng).arm == 0;
    return first / 100000.0;
  };
  const double f84 = frequency(PolicyState::make(PolicyKind::hasso_rand, {arm("lengthscale", 0.05, 2, 0.5, 8, 4),
                                                                           arm("radius", 0.01, 1, 0.2, 3, 9)}),
                               1);
  const double f11 = frequency(PolicyState::make(PolicyKind::hasso_rand, {arm("lengthscale", 0.05, 2, 0.5, 1, 1),
                                                                           arm("radius", 0.01, 1, 0.2, 1, 1)}),
                               2);
  o.require(std::abs(f84 - exact) <= 0.02, fmt("Beta(8,4) vs Beta(3,9): %.4f vs oracle %.4f", f84, exact));
  o.require(std::abs(f11 - 0.5) <= 0.02, fmt("fresh arms: %.4f", f11));

  for (auto kind : {PolicyKind::hasso_rand, PolicyKind::hasso_decay}) {
    SeededRandom rng(3);
    auto p = PolicyState::make(kind, {arm("lengthscale", 0.05, 2, 0.5, 1, 1), arm("radius", 0.01, 1, 0.2, 1, 1)});
    for (int t = 0; t < 2000; ++t) {
      const auto before = p.arms();
      const auto k = *p.propose(rng).arm;
      const bool win = rng.uniform() < 0.3;
      p.feedback(win ? 1.0 : 0.0);
      int moved = 0;
      for (std::size_t j = 0; j < 2; ++j) {
        const int da = p.arms()[j].alpha - before[j].alpha;
        const int db = p.arms()[j].beta - before[j].beta;
        moved += da + db;
        if (j != k) o.require(da == 0 && db == 0, "a non-selected arm changed");
        if (j == k) o.require(win ? (da == 1 && db == 0) : (da == 0 && db == 1), "selected arm updated wrongly");
      }
      o.require(moved == 1, "more than one shape parameter moved");
    }
  }
  if (o.pass) o.detail = fmt("P(arm 1) %.4f vs oracle %.4f; fresh arms %.4f", f84, exact, f11);
  return o;
}

Outcome ac5_replay() {
  Outcome o;
  std::string detail;
  for (auto kind : {PolicyKind::hasso_rand, PolicyKind::hasso_decay}) {
    harness::Cell cell;
    cell.problem = ProblemId::ackley;
    cell.dim = 5;
    cell.policy = kind;
    cell.settings.budget = 100;
    const RunConfig cfg = harness::make_run_config(cell, 1);
    const RunTrace trace = run_optimization(cfg);
    const auto problem = oracle::validate_trace(trace, cfg);
    o.require(!problem, std::string(to_string(kind)) + ": " + problem.value_or(""));
    std::size_t successes = 0;
    for (const auto& r : trace.records) successes += r.success;
    detail += std::string(detail.empty() ? "" : "; ") + std::string(to_string(kind)) + ": " +
              std::to_string(trace.evaluations) + " evaluations, " + std::to_string(successes) + " accepted trials";
  }
  if (o.pass) o.detail = detail;
  return o;
}

Outcome ac6_lhs() {
  Outcome o;
  for (std::size_t n : {4u, 22u, 62u}) {
    for (std::size_t d : {1u, 2u, 10u, 30u}) {
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        SeededRandom rng(seed);
        const Bounds b = Bounds::cube(d, -32.768, 32.768);
        const Design design = lhs_maximin(n, b, 20, rng);
        for (std::size_t j = 0; j < d; ++j) {
          std::vector<int> hits(n, 0);
          for (const auto& p : design.points) {
            const auto s = static_cast<std::size_t>(std::floor(n * (p[j] - b.lower(j)) / b.range(j)));
            if (s < n) ++hits[s];
          }
          o.require(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }),
                    "stratum count != 1 at n=" + std::to_string(n));
        }
        // Replay the restarts and confirm the kept design maximizes the minimum distance.
        SeededRandom replay(seed);
        double best = -1;
        for (std::size_t r = 0; r < 20; ++r) {
          const auto pts = latin_hypercube(n, b, replay);
          double m = INFINITY;
          for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = i + 1; k < n; ++k) {
              double s = 0;
              for (std::size_t j = 0; j < d; ++j) s += (pts[i][j] - pts[k][j]) * (pts[i][j] - pts[k][j]);
              m = std::min(m, std::sqrt(s));
            }
          }
          if (m > best) {
            best = m;
            o.require(pts == design.points || r != design.chosen_restart, "kept design is not the replayed one");
          }
          if (r == design.chosen_restart) o.require(pts == design.points, "kept design is not the replayed one");
        }
        const double kept = min_pairwise_distance(design.points);
        o.require(std::abs(kept - best) <= 1e-12 * best, "kept design is not the maximin restart");
      }
    }
  }
  if (o.pass) o.detail = "n in {4, 22, 62}, d in {1, 2, 10, 30}, 5 seeds each";
  return o;
}

// Empty budget/candidates fall back to the harness defaults for the dimension.
std::vector<double> final_bests(ProblemId problem, std::size_t dim, PolicyKind policy, std::size_t seeds,
                                std::optional<std::size_t> budget, std::optional<std::size_t> candidates) {
  harness::Cell cell;
  cell.problem = problem;
  cell.dim = dim;
  cell.policy = policy;
  cell.settings.budget = budget;
  cell.settings.candidates = candidates;
  std::vector<double> out;
  for (std::size_t r = 0; r < seeds; ++r) out.push_back(run_optimization(harness::make_run_config(cell, 1 + r)).best_f);
  return out;
}

// P(X >= k) for X ~ Binomial(m, 1/2).
double binomial_upper_tail(int m, int k) {
  double p = 0;
  for (int i = k; i <= m; ++i) p += oracle::binomial(m, i);
  return p / std::pow(2.0, m);
}

Outcome ac7_direction() {
  Outcome o;
  const auto fixed = final_bests(ProblemId::ackley, 5, PolicyKind::fixed, 20, 150, 500);
  const auto hasso = final_bests(ProblemId::ackley, 5, PolicyKind::hasso_rand, 20, 150, 500);
  const double med_fixed = median(fixed);
  const double med_hasso = median(hasso);
  int fixed_wins = 0, hasso_wins = 0;
  for (std::size_t r = 0; r < 20; ++r) {
    fixed_wins += fixed[r] < hasso[r];
    hasso_wins += hasso[r] < fixed[r];
  }
  const double p = binomial_upper_tail(fixed_wins + hasso_wins, fixed_wins);
  o.require(med_hasso <= med_fixed, fmt("ackley-5d median: hasso-rand %.4f > fixed %.4f", med_hasso, med_fixed));
  o.require(p >= 0.05, fmt("sign test rejects (fixed better in %.0f of %.0f pairs, p = %.4f)", fixed_wins,
                           fixed_wins + hasso_wins, p));

  // The reduced budget is stated for Ackley only; Perm runs at the full 10-d protocol (T = 400, |C| = 1000).
  const auto prand = final_bests(ProblemId::perm, 10, PolicyKind::hasso_rand, 20, std::nullopt, std::nullopt);
  const auto pdecay = final_bests(ProblemId::perm, 10, PolicyKind::hasso_decay, 20, std::nullopt, std::nullopt);
  const double med_rand = median(prand);
  const double med_decay = median(pdecay);
  o.require(med_decay <= 1.1 * med_rand,
            fmt("perm-10d median: hasso-decay %.4g exceeds 1.1 x hasso-rand %.4g", med_decay, med_rand));
  o.detail = fmt("ackley-5d median hasso-rand %.4f vs fixed %.4f; sign test fixed wins %.0f/20 (p = %.3f)", med_hasso,
                 med_fixed, fixed_wins, p) +
             fmt("; perm-10d median hasso-decay %.4g vs hasso-rand %.4g (ratio %.3f)", med_decay, med_rand,
                 med_decay / med_rand) + (o.pass ? "" : " | " + o.detail);
  return o;
}

Outcome ac8_timing() {
  Outcome o;
  harness::Cell cell;
  cell.problem = ProblemId::rosenbrock;
  cell.dim = 10;
  cell.settings.budget = 200;
  double total[2] = {0, 0};
  std::size_t count[2] = {0, 0};
  double grid_total = 0;
  std::size_t grid_count = 0;
  const PolicyKind kinds[2] = {PolicyKind::fixed, PolicyKind::hasso_rand};
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    // Alternate the order so drift in machine load hits both policies alike.
    for (int k = 0; k < 2; ++k) {
      const int which = seed % 2 ? k : 1 - k;
      cell.policy = kinds[which];
      const RunTrace t = run_optimization(harness::make_run_config(cell, seed));
      for (const auto& r : t.records) total[which] += r.step_ms;
      count[which] += t.records.size();
    }
  }
  cell.policy = PolicyKind::grid;
  const RunTrace g = run_optimization(harness::make_run_config(cell, 1));
  for (const auto& r : g.records) grid_total += r.step_ms;
  grid_count = g.records.size();
  const double fixed_ms = total[0] / count[0];
  const double hasso_ms = total[1] / count[1];
  const double ratio = hasso_ms / fixed_ms;
  o.require(ratio <= 1.10, fmt("hasso-rand %.3f ms/iteration vs fixed %.3f (ratio %.3f)", hasso_ms, fixed_ms, ratio));
  if (o.pass) {
    o.detail = fmt("ms/iteration: fixed %.3f, hasso-rand %.3f (ratio %.3f), grid %.3f", fixed_ms, hasso_ms, ratio,
                   grid_total / grid_count);
  }
  return o;
}

std::map<std::string, std::string> read_tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    out[fs::relative(e.path(), root).string()] = ss.str();
  }
  return out;
}

Outcome ac9_determinism() {
  Outcome o;
  harness::ExperimentSpec spec = harness::parse_config_text(
      "problem = ackley, perm\n"
      "dim = 4\n"
      "policy = fixed, r-rule, grid, rand, hasso-rand, hasso-decay\n"
      "acquisition = ei, wscore\n"
      "repetitions = 3\n"
      "budget = 15\n"
      "candidates = 200\n"
      "lhs_restarts = 10\n");
  const fs::path base = fs::current_path() / "acceptance_ac9";
  fs::remove_all(base);
  std::vector<std::map<std::string, std::string>> trees;
  for (std::size_t workers : {1u, 1u, 8u}) {
    spec.output_dir = base / ("run" + std::to_string(trees.size()));
    harness::run_experiment(spec, workers);
    trees.push_back(read_tree(spec.output_dir));
  }
  o.require(trees[0] == trees[1], "two serial runs differ");
  o.require(trees[0] == trees[2], "serial and 8-worker runs differ");
  if (o.pass) o.detail = std::to_string(trees[0].size()) + " files identical across serial, serial and 8 workers";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"AC1", "test-function ground truth", 1, ac1_ground_truth},
      {"AC2", "GP matches the dense-solve oracle", 10, ac2_gp},
      {"AC3", "EI matches Monte-Carlo", 30, ac3_ei},
      {"AC4", "Thompson-sampling mechanics", 5, ac4_thompson},
      {"AC5", "adaptive-loop trace replay", 60, ac5_replay},
      {"AC6", "LHS stratification and maximin", 5, ac6_lhs},
      {"AC7", "directional reproduction", 900, ac7_direction},
      {"AC8", "timing overhead of hasso-rand", 600, ac8_timing},
      {"AC9", "determinism", 600, ac9_determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.limit_s) {
      o.pass = false;
      o.detail += fmt(" | runtime %.1f s exceeds %.0f s", secs, c.limit_s);
    }
    failures += !o.pass;
    std::printf("%s %s  %s [%.2f s]: %s\n", c.id, o.pass ? "PASS" : "FAIL", c.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
