#include "sotune/harness/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "sotune/harness/csv.hpp"
#include "sotune/harness/experiment.hpp"

namespace sotune::harness {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string escape_xml(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

}  // namespace

std::string convergence_svg(std::span<const ConvergenceTable> tables, const RenderOptions& options) {
  if (tables.empty()) throw DomainError("nothing to plot");

  bool log_y = options.log_y;
  std::size_t t_max = 0;
  double y_lo = std::numeric_limits<double>::infinity();
  double y_hi = -std::numeric_limits<double>::infinity();
  for (const auto& table : tables) {
    if (table.median.empty()) throw DomainError("cannot plot an empty convergence table");
    t_max = std::max(t_max, table.median.size());
    for (std::size_t t = 0; t < table.median.size(); ++t) {
      for (double v : {table.median[t], table.q25[t], table.q75[t]}) {
        y_lo = std::min(y_lo, v);
        y_hi = std::max(y_hi, v);
      }
    }
  }
  if (log_y && !(y_lo > 0.0)) log_y = false;
  const auto ty = [log_y](double v) { return log_y ? std::log10(v) : v; };
  double lo = ty(y_lo);
  double hi = ty(y_hi);
  if (!(hi > lo)) {
    const double pad = std::max(1.0, std::abs(lo)) * 0.05;
    lo -= pad;
    hi += pad;
  }
  const double x_lo = 1.0;
  const double x_hi = t_max > 1 ? static_cast<double>(t_max) : 2.0;

  const double left = 80.0;
  const double right = 190.0;
  const double top = 40.0;
  const double bottom = 60.0;
  const double plot_w = options.width - left - right;
  const double plot_h = options.height - top - bottom;
  const double sx = plot_w / (x_hi - x_lo);
  const double sy = plot_h / (hi - lo);
  // Data (t, y) -> pixel (left + (t - x_lo) sx, top + plot_h - (y - lo) sy).
  const double tx = left - x_lo * sx;
  const double tyy = top + plot_h + lo * sy;
  const auto px = [&](double t) { return left + (t - x_lo) * sx; };
  const auto py = [&](double y) { return top + plot_h - (y - lo) * sy; };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(options.width) + "\" height=\"" +
         std::to_string(options.height) + "\" viewBox=\"0 0 " + std::to_string(options.width) + " " +
         std::to_string(options.height) + "\">\n";
  svg += "  <rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "  <text x=\"" + format_double(left + plot_w / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
         escape_xml(options.title) + "</text>\n";

  // Axes and ticks.
  svg += "  <g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
  svg += "    <line x1=\"" + format_double(left) + "\" y1=\"" + format_double(top + plot_h) + "\" x2=\"" +
         format_double(left + plot_w) + "\" y2=\"" + format_double(top + plot_h) + "\"/>\n";
  svg += "    <line x1=\"" + format_double(left) + "\" y1=\"" + format_double(top) + "\" x2=\"" + format_double(left) +
         "\" y2=\"" + format_double(top + plot_h) + "\"/>\n";
  svg += "  </g>\n";
  svg += "  <g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int i = 0; i <= 5; ++i) {
    const double t = x_lo + (x_hi - x_lo) * i / 5.0;
    const double y = lo + (hi - lo) * i / 5.0;
    svg += "    <text x=\"" + format_double(px(t)) + "\" y=\"" + format_double(top + plot_h + 16) +
           "\" text-anchor=\"middle\">" + tick_label(std::round(t)) + "</text>\n";
    svg += "    <text x=\"" + format_double(left - 6) + "\" y=\"" + format_double(py(y) + 4) +
           "\" text-anchor=\"end\">" + tick_label(log_y ? std::pow(10.0, y) : y) + "</text>\n";
  }
  svg += "  </g>\n";
  svg += "  <text x=\"" + format_double(left + plot_w / 2) + "\" y=\"" + format_double(options.height - 18.0) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">iteration</text>\n";
  svg += "  <text transform=\"translate(18," + format_double(top + plot_h / 2) +
         ") rotate(-90)\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
         std::string(log_y ? "best value (log scale)" : "best value") + "</text>\n";

  // Curves in data coordinates.
  svg += "  <g id=\"curves\" data-y-scale=\"" + std::string(log_y ? "log10" : "linear") + "\" transform=\"matrix(" +
         format_double(sx) + " 0 0 " + format_double(-sy) + " " + format_double(tx) + " " + format_double(tyy) +
         ")\">\n";
  for (std::size_t i = 0; i < tables.size(); ++i) {
    const auto& table = tables[i];
    const std::string color = kPalette[i % std::size(kPalette)];
    std::string band;
    for (std::size_t t = 0; t < table.q75.size(); ++t) {
      band += format_double(static_cast<double>(t + 1)) + "," + format_double(ty(table.q75[t])) + " ";
    }
    for (std::size_t t = table.q25.size(); t-- > 0;) {
      band += format_double(static_cast<double>(t + 1)) + "," + format_double(ty(table.q25[t])) + " ";
    }
    band.pop_back();
    svg += "    <polygon class=\"iqr\" fill=\"" + color + "\" fill-opacity=\"0.18\" stroke=\"none\" points=\"" + band +
           "\"/>\n";
    std::string line;
    for (std::size_t t = 0; t < table.median.size(); ++t) {
      line += format_double(static_cast<double>(t + 1)) + "," + format_double(ty(table.median[t])) + " ";
    }
    line.pop_back();
    svg += "    <polyline class=\"median\" data-label=\"" + escape_xml(table.label) + "\" fill=\"none\" stroke=\"" +
           color + "\" stroke-width=\"2\" vector-effect=\"non-scaling-stroke\" points=\"" + line + "\"/>\n";
  }
  svg += "  </g>\n";

  // Legend.
  svg += "  <g font-family=\"sans-serif\" font-size=\"12\">\n";
  for (std::size_t i = 0; i < tables.size(); ++i) {
    const double y = top + 10.0 + 20.0 * static_cast<double>(i);
    const double x = left + plot_w + 16.0;
    const std::string color = kPalette[i % std::size(kPalette)];
    svg += "    <line x1=\"" + format_double(x) + "\" y1=\"" + format_double(y) + "\" x2=\"" + format_double(x + 22) +
           "\" y2=\"" + format_double(y) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    svg += "    <text x=\"" + format_double(x + 28) + "\" y=\"" + format_double(y + 4) + "\">" +
           escape_xml(tables[i].label) + "</text>\n";
  }
  svg += "  </g>\n";
  svg += "</svg>\n";
  return svg;
}

void render_convergence(std::span<const ConvergenceTable> tables, const std::filesystem::path& path,
                        const RenderOptions& options) {
  write_text_file(path, convergence_svg(tables, options));
}

}  // namespace sotune::harness
