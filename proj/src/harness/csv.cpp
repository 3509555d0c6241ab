#include "sotune/harness/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace sotune::harness {

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw Error("failed to format a number");
  return std::string(buf, ptr);
}

std::string run_csv_header(std::size_t dim) {
  std::string h = "run_id,iteration,eval_count";
  for (std::size_t k = 0; k < dim; ++k) h += ",x" + std::to_string(k);
  h += ",f,best_f,policy,arm,trial_lengthscale,trial_radius,imp,success,step_ms\n";
  return h;
}

std::string run_csv(const RunTrace& trace, std::size_t run_id, std::string_view policy, bool record_timing) {
  const std::size_t dim = trace.design_points.empty() ? 0 : trace.design_points.front().size();
  std::string out = run_csv_header(dim);
  for (const auto& rec : trace.records) {
    out += std::to_string(run_id);
    out += ',' + std::to_string(rec.iteration);
    out += ',' + std::to_string(rec.eval_count);
    for (double x : rec.x) out += ',' + format_double(x);
    out += ',' + format_double(rec.f);
    out += ',' + format_double(rec.best_f);
    out += ',';
    out += policy;
    out += ',';
    if (rec.arm) out += trace.hyperparameter_names[*rec.arm];
    out += ',' + format_double(rec.lengthscale);
    out += ',' + format_double(rec.radius);
    out += ',' + format_double(rec.imp);
    out += rec.success ? ",1," : ",0,";
    if (record_timing) out += format_double(rec.step_ms);
    out += '\n';
  }
  return out;
}

std::string design_csv(const RunTrace& trace) {
  const std::size_t dim = trace.design_points.empty() ? 0 : trace.design_points.front().size();
  std::string out = "eval_count";
  for (std::size_t k = 0; k < dim; ++k) out += ",x" + std::to_string(k);
  out += ",f\n";
  for (std::size_t i = 0; i < trace.design_points.size(); ++i) {
    out += std::to_string(i + 1);
    for (double x : trace.design_points[i]) out += ',' + format_double(x);
    out += ',' + format_double(trace.design_values[i]) + '\n';
  }
  return out;
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::string out = "iteration,median,q25,q75\n";
  for (const auto& r : rows) {
    out += std::to_string(r.iteration) + ',' + format_double(r.median) + ',' + format_double(r.q25) + ',' +
           format_double(r.q75) + '\n';
  }
  return out;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.emplace_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

namespace {

double parse_double(const std::string& s, const std::filesystem::path& path, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError(line, path.string() + ": '" + s + "' is not a number");
  }
  return v;
}

}  // namespace

std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path.string() + "'");
  std::string line;
  std::getline(in, line);
  if (line != "iteration,median,q25,q75") {
    throw ParseError(1, path.string() + ": not a summary CSV");
  }
  std::vector<SummaryRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 4) throw ParseError(line_no, path.string() + ": expected 4 fields");
    rows.push_back({static_cast<std::size_t>(parse_double(f[0], path, line_no)), parse_double(f[1], path, line_no),
                    parse_double(f[2], path, line_no), parse_double(f[3], path, line_no)});
  }
  return rows;
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

}  // namespace sotune::harness
