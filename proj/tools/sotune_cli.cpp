// sotune: experiment runner for the surrogate optimizer.
//   sotune run --config exp.cfg
//   sotune sweep --problem ackley --dim 5 --hp radius --values 1.0,r-rule
//   sotune plot --input results --out curves.svg
//   sotune bench-timing --config timing.cfg
//   sotune catalog

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "sotune/errors.hpp"
#include "sotune/harness/config.hpp"
#include "sotune/harness/csv.hpp"
#include "sotune/harness/experiment.hpp"
#include "sotune/harness/svg.hpp"
#include "sotune/simd.hpp"

namespace fs = std::filesystem;
using namespace sotune;
using namespace sotune::harness;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRunFailed = 1;
constexpr int kExitConfig = 2;

void print_arms(const ExperimentResult& result) {
  bool header = false;
  for (const auto& cell : result.cells) {
    if (cell.arms.empty()) continue;
    if (!header) {
      std::printf("\nmean alpha/(alpha+beta) at the end of each run\n");
      header = true;
    }
    std::printf("  %-40s", cell.cell.name().c_str());
    for (const auto& arm : cell.arms) std::printf("  %s=%.3f", arm.name.c_str(), arm.mean_fraction);
    std::printf("\n");
  }
}

void print_finals(const ExperimentResult& result) {
  std::printf("%-40s %14s %14s %14s\n", "cell", "median", "q25", "q75");
  for (const auto& cell : result.cells) {
    const auto& t = cell.table;
    if (t.iterations() == 0) {
      std::printf("%-40s %14s\n", cell.cell.name().c_str(), "(no runs)");
      continue;
    }
    std::printf("%-40s %14.6g %14.6g %14.6g\n", cell.cell.name().c_str(), t.median.back(), t.q25.back(),
                t.q75.back());
  }
}

void print_failures(const ExperimentResult& result, const ExperimentSpec& spec) {
  for (const auto& failure : result.failures) {
    std::fprintf(stderr, "run failed: %s rep %zu: %s\n", spec.cells[failure.cell].name().c_str(), failure.repetition,
                 failure.error.c_str());
  }
}

int finish(const ExperimentResult& result, const ExperimentSpec& spec) {
  print_finals(result);
  print_arms(result);
  print_failures(result, spec);
  std::printf("\noutputs written to %s\n", spec.output_dir.string().c_str());
  return result.ok() ? kExitOk : kExitRunFailed;
}

int cmd_run(const std::string& config, std::optional<fs::path> out) {
  ExperimentSpec spec = parse_config(config);
  if (out) spec.output_dir = *out;
  const auto result = run_experiment(spec, worker_count_from_env());
  return finish(result, spec);
}

int cmd_bench(const std::string& config, std::optional<fs::path> out) {
  ExperimentSpec spec = parse_config(config);
  if (out) spec.output_dir = *out;
  spec.record_timing = true;
  // Timing is only comparable when runs do not compete for cores.
  const auto result = run_experiment(spec, 1);
  std::map<std::string, double> fixed_step;
  for (const auto& cell : result.cells) {
    if (cell.cell.policy == PolicyKind::fixed) fixed_step[cell.cell.panel()] = cell.mean_step_ms;
  }
  std::printf("%-40s %14s %14s %12s\n", "cell", "ms/iteration", "ms/run", "vs fixed");
  for (const auto& cell : result.cells) {
    const auto it = fixed_step.find(cell.cell.panel());
    std::string ratio = "-";
    if (it != fixed_step.end() && it->second > 0.0) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%+.1f%%", 100.0 * (cell.mean_step_ms / it->second - 1.0));
      ratio = buf;
    }
    std::printf("%-40s %14.3f %14.1f %12s\n", cell.cell.name().c_str(), cell.mean_step_ms, cell.mean_run_ms,
                ratio.c_str());
  }
  print_failures(result, spec);
  return result.ok() ? kExitOk : kExitRunFailed;
}

std::vector<fs::path> summary_files(const fs::path& input) {
  fs::path dir = input;
  if (fs::is_directory(input / "summary")) dir = input / "summary";
  std::vector<fs::path> files;
  if (fs::is_regular_file(input)) {
    files.push_back(input);
  } else if (fs::is_directory(dir)) {
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

int cmd_plot(const fs::path& input, const fs::path& out, const std::string& title, bool log_y) {
  const auto files = summary_files(input);
  if (files.empty()) throw ConfigError("no summary CSV files under " + input.string());
  std::vector<ConvergenceTable> tables;
  for (const auto& file : files) tables.push_back(ConvergenceTable::from_summary(file.stem().string(), read_summary_csv(file)));
  RenderOptions options;
  options.title = title.empty() ? input.filename().string() : title;
  options.log_y = log_y;
  render_convergence(tables, out, options);
  std::printf("wrote %s (%zu curves)\n", out.string().c_str(), tables.size());
  return kExitOk;
}

int cmd_catalog() {
  std::printf("%-12s %-10s %-8s %-22s %s\n", "problem", "dims", "default", "domain", "known minimum");
  for (const auto& e : problem_catalog()) {
    std::string dims = std::to_string(e.min_dim) + ".." + (e.max_dim == 0 ? std::string("") : std::to_string(e.max_dim));
    if (e.min_dim == e.max_dim) dims = std::to_string(e.min_dim);
    const std::string optimum = e.known_optimum ? format_double(*e.known_optimum) : "unknown";
    std::printf("%-12s %-10s %-8zu %-22s %s\n", e.name.c_str(), dims.c_str(), e.default_dim, e.domain.c_str(),
                optimum.c_str());
  }
  std::printf("\ndistance kernels: %s\n", std::string(to_string(simd::active_isa())).c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Surrogate optimization benchmark runner"};
  app.require_subcommand(1);

  std::string config;
  std::string out;

  auto* run = app.add_subcommand("run", "Run every cell of an experiment config");
  run->add_option("--config", config, "Experiment config file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "Override the output directory");

  auto* bench = app.add_subcommand("bench-timing", "Run a config serially with timing and compare per-iteration cost");
  bench->add_option("--config", config, "Experiment config file")->required()->check(CLI::ExistingFile);
  bench->add_option("--out", out, "Override the output directory");

  std::string problem = "ackley";
  std::size_t dim = 0;
  std::string hp;
  std::vector<std::string> values;
  std::string acquisition;
  std::size_t reps = 30;
  std::uint64_t seed = 1;
  std::optional<std::size_t> budget;
  std::optional<std::size_t> candidates;
  auto* sweep = app.add_subcommand("sweep", "Fixed-policy runs for each value of one hyperparameter");
  sweep->add_option("--problem", problem, "Problem id")->required();
  sweep->add_option("--dim", dim, "Dimension (default from the catalog)");
  sweep->add_option("--hp", hp, "lengthscale | radius | beta_t | w_r")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required()->delimiter(',');
  sweep->add_option("--acquisition", acquisition, "ei | ucb | wscore (default follows --hp)");
  sweep->add_option("--reps", reps, "Repetitions")->check(CLI::PositiveNumber);
  sweep->add_option("--seed", seed, "Base seed");
  sweep->add_option("--budget", budget, "Iterations per run");
  sweep->add_option("--candidates", candidates, "Candidates per iteration");
  sweep->add_option("--out", out, "Output directory");

  std::string input;
  std::string title;
  bool log_y = false;
  auto* plot = app.add_subcommand("plot", "Render summary CSVs as a convergence SVG");
  plot->add_option("--input", input, "Experiment directory, summary directory or one summary CSV")->required();
  plot->add_option("--out", out, "SVG path")->required();
  plot->add_option("--title", title, "Plot title");
  plot->add_flag("--log-y", log_y, "Logarithmic value axis");

  auto* catalog = app.add_subcommand("catalog", "List the test problems");

  CLI11_PARSE(app, argc, argv);

  const std::optional<fs::path> out_dir = out.empty() ? std::nullopt : std::optional<fs::path>(out);
  try {
    if (run->parsed()) return cmd_run(config, out_dir);
    if (bench->parsed()) return cmd_bench(config, out_dir);
    if (plot->parsed()) return cmd_plot(input, out, title, log_y);
    if (catalog->parsed()) return cmd_catalog();
    if (sweep->parsed()) {
      SweepRequest request;
      request.problem = parse_problem_id(problem);
      request.dim = dim == 0 ? catalog_entry(request.problem).default_dim : dim;
      request.hyperparameter = hp;
      request.values = values;
      if (!acquisition.empty()) request.acquisition = parse_acquisition_kind(acquisition);
      request.repetitions = reps;
      request.seed = seed;
      request.settings.budget = budget;
      request.settings.candidates = candidates;
      request.output_dir = out.empty() ? fs::path("sweep") : fs::path(out);
      const ExperimentSpec spec = make_sweep_spec(request);
      return finish(run_experiment(spec, worker_count_from_env()), spec);
    }
  } catch (const ParseError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRunFailed;
  }
  return kExitOk;
}
