#include "uidobf/report.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

#include "uidobf/error.hpp"
#include "uidobf/io.hpp"
#include "uidobf/text.hpp"

namespace uidobf {
namespace {

namespace fs = std::filesystem;

constexpr double kWidth = 480;
constexpr double kHeight = 320;
constexpr double kMargin = 48;

std::string escape(std::string_view s) {
  std::string out;
  for (const char c : s) {
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

std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
  return std::string(buf, res.ptr);
}

double to_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{}) throw LoadError("not a number: " + s, 0);
  return v;
}

void header(std::ostringstream& os, double w, double h, const std::string& title) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w) << "\" height=\"" << num(h)
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << num(w / 2) << "\" y=\"18\" text-anchor=\"middle\" font-size=\"13\">" << escape(title)
     << "</text>\n";
}

}  // namespace

std::string scatter_svg(const std::vector<ScatterPoint>& points, const std::string& title) {
  double x0 = 1.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  if (!points.empty()) {
    const auto [xmin, xmax] = std::minmax_element(points.begin(), points.end(),
                                                  [](auto& a, auto& b) { return a.similarity < b.similarity; });
    const auto [ymin, ymax] =
        std::minmax_element(points.begin(), points.end(), [](auto& a, auto& b) { return a.uid < b.uid; });
    x0 = xmin->similarity;
    x1 = xmax->similarity;
    y0 = ymin->uid;
    y1 = ymax->uid;
  }
  if (x1 - x0 < 1e-9) x0 = x1 - 0.05;
  if (y1 - y0 < 1e-9) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  const double pw = kWidth - 2 * kMargin;
  const double ph = kHeight - 2 * kMargin;
  auto px = [&](double x) { return kMargin + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return kHeight - kMargin - (y - y0) / (y1 - y0) * ph; };

  std::ostringstream os;
  header(os, kWidth, kHeight, title);
  os << "<rect x=\"" << num(kMargin) << "\" y=\"" << num(kMargin) << "\" width=\"" << num(pw) << "\" height=\""
     << num(ph) << "\" fill=\"none\" stroke=\"#888\"/>\n";
  os << "<text x=\"" << num(kMargin) << "\" y=\"" << num(kHeight - kMargin + 16) << "\">" << num(x0) << "</text>\n"
     << "<text x=\"" << num(kWidth - kMargin) << "\" y=\"" << num(kHeight - kMargin + 16)
     << "\" text-anchor=\"end\">" << num(x1) << "</text>\n"
     << "<text x=\"" << num(kWidth / 2) << "\" y=\"" << num(kHeight - 8)
     << "\" text-anchor=\"middle\">cosine similarity</text>\n"
     << "<text x=\"" << num(kMargin - 4) << "\" y=\"" << num(kHeight - kMargin) << "\" text-anchor=\"end\">"
     << num(y0) << "</text>\n"
     << "<text x=\"" << num(kMargin - 4) << "\" y=\"" << num(kMargin + 4) << "\" text-anchor=\"end\">" << num(y1)
     << "</text>\n";
  for (const auto& p : points) {
    const char* fill = p.flag == PointFlag::original   ? "#d62728"
                       : p.flag == PointFlag::selected ? "#2ca02c"
                                                       : "#1f77b4";
    const double r = p.flag == PointFlag::candidate ? 3.5 : 5.5;
    os << "<circle cx=\"" << num(px(p.similarity)) << "\" cy=\"" << num(py(p.uid)) << "\" r=\"" << num(r)
       << "\" fill=\"" << fill << "\"><title>" << to_string(p.flag) << "</title></circle>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string label_shift_svg(const std::vector<HistogramSeries>& series, const std::string& title) {
  const double panel_h = 200;
  const double height = 40 + panel_h * static_cast<double>(std::max<std::size_t>(series.size(), 1));
  std::ostringstream os;
  header(os, kWidth, height, title);

  const double slot = (kWidth - 2 * kMargin) / static_cast<double>(kFiveWayCount);
  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& hist = series[s];
    const double top = 40 + panel_h * static_cast<double>(s);
    const double base = top + panel_h - 40;
    std::size_t peak = 1;
    for (std::size_t l = 0; l < kFiveWayCount; ++l) peak = std::max({peak, hist.before[l], hist.after[l]});
    const double scale = (panel_h - 70) / static_cast<double>(peak);

    os << "<text x=\"" << num(kMargin) << "\" y=\"" << num(top + 14) << "\">" << escape(hist.name) << "</text>\n";
    for (std::size_t l = 0; l < kFiveWayCount; ++l) {
      const double x = kMargin + slot * static_cast<double>(l);
      const double bw = slot * 0.35;
      const double hb = scale * static_cast<double>(hist.before[l]);
      const double ha = scale * static_cast<double>(hist.after[l]);
      os << "<rect x=\"" << num(x + slot * 0.1) << "\" y=\"" << num(base - hb) << "\" width=\"" << num(bw)
         << "\" height=\"" << num(hb) << "\" fill=\"#9ecae1\"><title>before " << hist.before[l]
         << "</title></rect>\n";
      os << "<rect x=\"" << num(x + slot * 0.1 + bw) << "\" y=\"" << num(base - ha) << "\" width=\"" << num(bw)
         << "\" height=\"" << num(ha) << "\" fill=\"#3182bd\"><title>after " << hist.after[l]
         << "</title></rect>\n";
      os << "<text x=\"" << num(x + slot / 2) << "\" y=\"" << num(base + 14) << "\" text-anchor=\"middle\">"
         << to_string(static_cast<FiveWay>(l)) << "</text>\n";
    }
    os << "<line x1=\"" << num(kMargin) << "\" y1=\"" << num(base) << "\" x2=\"" << num(kWidth - kMargin)
       << "\" y2=\"" << num(base) << "\" stroke=\"#888\"/>\n";
  }
  os << "<text x=\"" << num(kWidth - kMargin) << "\" y=\"34\" text-anchor=\"end\">light: before, dark: after</text>\n";
  os << "</svg>\n";
  return os.str();
}

void render_charts(const fs::path& plots_dir, const fs::path& label_shift_csv, const fs::path& charts_dir) {
  fs::remove_all(charts_dir);

  if (fs::is_directory(plots_dir)) {
    std::vector<fs::path> inputs;
    for (const auto& e : fs::directory_iterator(plots_dir)) {
      if (e.path().extension() == ".csv") inputs.push_back(e.path());
    }
    std::sort(inputs.begin(), inputs.end());
    for (const auto& path : inputs) {
      const auto rows = io::read_csv(path);
      std::vector<ScatterPoint> points;
      for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.size() != 4) throw LoadError(path.filename().string() + ": expected 4 columns", i + 1);
        ScatterPoint p;
        p.similarity = to_double(r[0]);
        p.uid = to_double(r[1]);
        p.flag = r[2] == "original" ? PointFlag::original
                 : r[2] == "selected" ? PointFlag::selected
                                      : PointFlag::candidate;
        points.push_back(p);
      }
      io::write_text(charts_dir / (path.stem().string() + ".svg"), scatter_svg(points, path.stem().string()));
    }
  }

  if (fs::exists(label_shift_csv)) {
    // (detector, subset) -> truth -> histogram
    std::map<std::pair<std::string, std::string>, std::map<std::string, HistogramSeries>> groups;
    const auto rows = io::read_csv(label_shift_csv);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto& r = rows[i];
      if (r.size() != 6) throw LoadError("label_shift.csv: expected 6 columns", i + 1);
      auto& h = groups[{r[0], r[1]}][r[2]];
      h.name = r[2];
      const auto l = static_cast<std::size_t>(parse_five_way(r[3]));
      h.before[l] = static_cast<std::size_t>(to_double(r[4]));
      h.after[l] = static_cast<std::size_t>(to_double(r[5]));
    }
    for (const auto& [key, by_truth] : groups) {
      std::vector<HistogramSeries> series;
      for (const auto& [truth, h] : by_truth) series.push_back(h);
      const std::string stem = "label_shift_" + key.first + "_" + key.second;
      io::write_text(charts_dir / (stem + ".svg"), label_shift_svg(series, key.first + ": " + key.second));
    }
  }
}

}  // namespace uidobf
