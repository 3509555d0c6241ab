#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "sotune/engine.hpp"

namespace sotune::harness {

// Shortest text that parses back to the same double.
std::string format_double(double v);

// Per-run CSV header for a d-dimensional problem:
// run_id,iteration,eval_count,x0..x{d-1},f,best_f,policy,arm,trial_lengthscale,trial_radius,imp,success,step_ms
std::string run_csv_header(std::size_t dim);

// step_ms is left empty unless record_timing is set, so untimed output is reproducible.
std::string run_csv(const RunTrace& trace, std::size_t run_id, std::string_view policy, bool record_timing);

// eval_count,x0..x{d-1},f for the initial design.
std::string design_csv(const RunTrace& trace);

struct SummaryRow {
  std::size_t iteration;
  double median;
  double q25;
  double q75;
};

std::string summary_csv(const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& path);

// Splits one CSV line on commas (no quoting is ever emitted).
std::vector<std::string> split_csv_line(std::string_view line);

void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace sotune::harness
