#pragma once

#include <filesystem>
#include <span>
#include <string>

namespace sotune::harness {

struct ConvergenceTable;

struct RenderOptions {
  std::string title;
  bool log_y = false;  // ignored unless every plotted value is positive
  int width = 820;
  int height = 520;
};

// Median best value against iteration for each table, with a shaded interquartile
// band, axes and a legend. Curves are drawn in data coordinates inside a
// transformed group, so polyline y-values are the medians themselves (or their
// log10 when the log axis is active).
std::string convergence_svg(std::span<const ConvergenceTable> tables, const RenderOptions& options);

// Throws DomainError for an empty table list and Error on I/O failure.
void render_convergence(std::span<const ConvergenceTable> tables, const std::filesystem::path& path,
                        const RenderOptions& options);

}  // namespace sotune::harness
