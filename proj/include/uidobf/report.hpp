#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "uidobf/evaluate.hpp"

namespace uidobf {

/// Similarity on x, UID on y; selected and original points are highlighted.
std::string scatter_svg(const std::vector<ScatterPoint>& points, const std::string& title);

struct HistogramSeries {
  std::string name;
  FiveWayHistogram before{};
  FiveWayHistogram after{};
};

/// Grouped before/after bars over the five-way labels, one panel per series.
std::string label_shift_svg(const std::vector<HistogramSeries>& series, const std::string& title);

/// Renders every plots/*.csv and the label-shift table into charts_dir.
/// Missing inputs are skipped.
void render_charts(const std::filesystem::path& plots_dir, const std::filesystem::path& label_shift_csv,
                   const std::filesystem::path& charts_dir);

}  // namespace uidobf
