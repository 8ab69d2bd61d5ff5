#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace bhlab {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
  std::string annotation;  // drawn verbatim in the top-left corner
};

/// Axes switch to log scale when the plotted positive values span more than two decades.
bool wants_log_axis(const std::vector<double>& values);

/// Standalone SVG document for a line chart.
std::string render_svg(const LinePlot& plot);

/// Builds the standard figures from the lab's CSV outputs (sweep.csv, attenuation.csv,
/// linearization.csv, bound_overlay.csv, recognised by header) and writes one SVG per CSV
/// into out_dir. Returns the written paths.
std::vector<std::filesystem::path> emit_plots(const std::vector<std::filesystem::path>& csv_files,
                                              const std::filesystem::path& out_dir);

}  // namespace bhlab
