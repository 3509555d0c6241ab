#include "sotune/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <thread>

#include "sotune/harness/svg.hpp"

namespace sotune::harness {

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw DomainError("quantile of an empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

ConvergenceTable ConvergenceTable::from_runs(std::string label, std::vector<std::vector<double>> rows,
                                             std::vector<double> run_ms) {
  ConvergenceTable table;
  table.label = std::move(label);
  table.best = std::move(rows);
  table.run_ms = std::move(run_ms);
  if (table.best.empty()) return table;
  const std::size_t t_max = table.best.front().size();
  std::vector<double> column(table.best.size());
  for (std::size_t t = 0; t < t_max; ++t) {
    for (std::size_t r = 0; r < table.best.size(); ++r) {
      if (table.best[r].size() != t_max) throw DomainError("convergence rows differ in length");
      column[r] = table.best[r][t];
    }
    std::sort(column.begin(), column.end());
    table.median.push_back(quantile_sorted(column, 0.5));
    table.q25.push_back(quantile_sorted(column, 0.25));
    table.q75.push_back(quantile_sorted(column, 0.75));
  }
  return table;
}

ConvergenceTable ConvergenceTable::from_summary(std::string label, const std::vector<SummaryRow>& rows) {
  ConvergenceTable table;
  table.label = std::move(label);
  for (const auto& r : rows) {
    table.median.push_back(r.median);
    table.q25.push_back(r.q25);
    table.q75.push_back(r.q75);
  }
  return table;
}

std::vector<SummaryRow> ConvergenceTable::summary() const {
  std::vector<SummaryRow> rows;
  for (std::size_t t = 0; t < median.size(); ++t) rows.push_back({t + 1, median[t], q25[t], q75[t]});
  return rows;
}

std::size_t worker_count_from_env() {
  if (const char* env = std::getenv("SOTUNE_WORKERS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<RunOutcome> execute_runs(const ExperimentSpec& spec, std::size_t workers) {
  std::vector<RunOutcome> outcomes;
  for (std::size_t c = 0; c < spec.cells.size(); ++c) {
    for (std::size_t r = 0; r < spec.repetitions; ++r) outcomes.push_back({c, r, std::nullopt, {}});
  }

  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < outcomes.size(); i = next++) {
      auto& out = outcomes[i];
      try {
        const auto config = make_run_config(spec.cells[out.cell], spec.base_seed + out.repetition);
        out.trace = run_optimization(config);
      } catch (const std::exception& e) {
        out.error = e.what();
      }
    }
  };

  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(outcomes.size(), 1));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return outcomes;
}

namespace {

std::string run_file(std::size_t r, std::string_view stem) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "_%03zu.csv", r);
  return std::string(stem) + buf;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec, std::size_t workers) {
  auto outcomes = execute_runs(spec, workers);
  const auto& root = spec.output_dir;

  ExperimentResult result;
  std::string timing = "cell,run_id,total_ms,mean_step_ms\n";
  std::string failures = "cell,run_id,message\n";

  for (std::size_t c = 0; c < spec.cells.size(); ++c) {
    const Cell& cell = spec.cells[c];
    const std::string name = cell.name();
    const std::string policy(to_string(cell.policy));

    std::vector<std::vector<double>> rows;
    std::vector<double> run_ms;
    std::map<std::string, std::pair<double, std::size_t>> arm_totals;
    std::vector<std::string> arm_order;
    std::string arms_csv = "run_id,arm,alpha,beta,fraction\n";
    double step_total = 0.0;
    std::size_t step_count = 0;

    for (auto& out : outcomes) {
      if (out.cell != c) continue;
      if (!out.trace) {
        std::string message = out.error;
        std::replace(message.begin(), message.end(), '"', '\'');
        std::replace(message.begin(), message.end(), '\n', ' ');
        failures += name + ',' + std::to_string(out.repetition) + ",\"" + message + "\"\n";
        result.failures.push_back(out);
        continue;
      }
      const RunTrace& trace = *out.trace;
      write_text_file(root / "runs" / name / run_file(out.repetition, "run"),
                      run_csv(trace, out.repetition, policy, spec.record_timing));
      write_text_file(root / "runs" / name / run_file(out.repetition, "design"), design_csv(trace));

      std::vector<double> row;
      double run_steps = 0.0;
      for (const auto& rec : trace.records) {
        row.push_back(rec.best_f);
        run_steps += rec.step_ms;
      }
      rows.push_back(std::move(row));
      run_ms.push_back(trace.total_ms);
      step_total += run_steps;
      step_count += trace.records.size();
      if (spec.record_timing) {
        timing += name + ',' + std::to_string(out.repetition) + ',' + format_double(trace.total_ms) + ',' +
                  format_double(trace.records.empty() ? 0.0 : run_steps / static_cast<double>(trace.records.size())) +
                  '\n';
      }
      for (const auto& arm : trace.arms) {
        arms_csv += std::to_string(out.repetition) + ',' + arm.name + ',' + std::to_string(arm.alpha) + ',' +
                    std::to_string(arm.beta) + ',' + format_double(arm.success_fraction) + '\n';
        if (!arm_totals.count(arm.name)) arm_order.push_back(arm.name);
        auto& total = arm_totals[arm.name];
        total.first += arm.success_fraction;
        ++total.second;
      }
      out.trace.reset();
    }

    CellResult cr{cell, ConvergenceTable::from_runs(cell.label(), std::move(rows), std::move(run_ms)), {}, 0.0, 0.0};
    if (step_count > 0) cr.mean_step_ms = step_total / static_cast<double>(step_count);
    if (!cr.table.run_ms.empty()) {
      double sum = 0.0;
      for (double v : cr.table.run_ms) sum += v;
      cr.mean_run_ms = sum / static_cast<double>(cr.table.run_ms.size());
    }
    for (const auto& arm : arm_order) {
      const auto& total = arm_totals[arm];
      cr.arms.push_back({arm, total.first / static_cast<double>(total.second)});
    }
    if (!cr.table.median.empty()) write_text_file(root / "summary" / (name + ".csv"), summary_csv(cr.table.summary()));
    if (is_bandit(cell.policy) && !arm_order.empty()) write_text_file(root / "arms" / (name + ".csv"), arms_csv);
    result.cells.push_back(std::move(cr));
  }

  // One plot per panel, curves in cell order.
  std::vector<std::string> panels;
  for (const auto& cr : result.cells) {
    if (std::find(panels.begin(), panels.end(), cr.cell.panel()) == panels.end()) panels.push_back(cr.cell.panel());
  }
  for (const auto& panel : panels) {
    std::vector<ConvergenceTable> tables;
    for (const auto& cr : result.cells) {
      if (cr.cell.panel() == panel && !cr.table.median.empty()) tables.push_back(cr.table);
    }
    if (!tables.empty()) render_convergence(tables, root / "plots" / (panel + ".svg"), {panel});
  }

  if (spec.record_timing) write_text_file(root / "timing.csv", timing);
  if (!result.failures.empty()) write_text_file(root / "failures.csv", failures);
  return result;
}

ExperimentSpec make_sweep_spec(const SweepRequest& request) {
  if (request.values.empty()) throw ConfigError("sweep needs at least one value");
  if (request.repetitions == 0) throw ConfigError("sweep needs at least one repetition");
  const auto& hp = request.hyperparameter;
  if (hp != "lengthscale" && hp != "radius" && hp != "beta_t" && hp != "w_r") {
    throw ConfigError("unknown sweep hyperparameter '" + hp + "' (expected lengthscale, radius, beta_t or w_r)");
  }

  const auto number = [&](const std::string& text) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) throw ConfigError(hp + " value '" + text + "' is not a number");
    return v;
  };

  // w_r only matters to the weighted score and beta_t only to the confidence bound.
  AcquisitionKind acquisition = AcquisitionKind::ei;
  if (hp == "w_r") acquisition = AcquisitionKind::wscore;
  if (hp == "beta_t") acquisition = AcquisitionKind::ucb;
  if (request.acquisition) {
    if ((hp == "w_r" || hp == "beta_t") && *request.acquisition != acquisition) {
      throw ConfigError(hp + " sweeps need acquisition " + std::string(to_string(acquisition)));
    }
    acquisition = *request.acquisition;
  }

  ExperimentSpec spec;
  spec.repetitions = request.repetitions;
  spec.base_seed = request.seed;
  spec.output_dir = request.output_dir;

  for (const auto& value : request.values) {
    Cell cell{request.problem, request.dim, PolicyKind::fixed, acquisition, request.settings,
              hp + "=" + value};
    auto& s = cell.settings;
    s.arms.clear();
    if (hp == "lengthscale") {
      const double v = number(value);
      if (v < s.lengthscale_range.first || v > s.lengthscale_range.second) {
        throw ConfigError("lengthscale " + value + " lies outside [" + format_double(s.lengthscale_range.first) +
                          ", " + format_double(s.lengthscale_range.second) + "]");
      }
      s.lengthscale = v;
    } else if (hp == "radius") {
      if (value == "r-rule") {
        cell.policy = PolicyKind::r_rule;
        s.arms = {std::string(kRadius)};
      } else {
        const double v = number(value);
        if (v < s.radius_range.first || v > s.radius_range.second) {
          throw ConfigError("radius " + value + " lies outside [" + format_double(s.radius_range.first) + ", " +
                            format_double(s.radius_range.second) + "]");
        }
        s.radius = v;
      }
    } else if (hp == "beta_t") {
      const double v = number(value);
      if (!(v > 0.0) || v < s.beta_t_range.first || v > s.beta_t_range.second) {
        throw ConfigError("beta_t " + value + " lies outside [" + format_double(s.beta_t_range.first) + ", " +
                          format_double(s.beta_t_range.second) + "]");
      }
      s.beta_t = v;
    } else {
      std::vector<double> cycle;
      std::size_t start = 0;
      while (true) {
        const auto colon = value.find(':', start);
        const double w = number(value.substr(start, colon == std::string::npos ? std::string::npos : colon - start));
        if (!(w >= 0.0 && w <= 1.0)) throw ConfigError("w_r " + value + " must lie in [0, 1]");
        cycle.push_back(w);
        if (colon == std::string::npos) break;
        start = colon + 1;
      }
      s.weight_cycle = std::move(cycle);
    }
    for (const auto& existing : spec.cells) {
      if (existing.name() == cell.name()) throw ConfigError(hp + " value " + value + " listed twice");
    }
    make_run_config(cell, spec.base_seed).validate();
    spec.cells.push_back(std::move(cell));
  }
  return spec;
}

}  // namespace sotune::harness
