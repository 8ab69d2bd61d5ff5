#include "bhlab/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "bhlab/csv.hpp"
#include "bhlab/errors.hpp"

namespace bhlab {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 80, kRight = 160, kTop = 40, kBottom = 60;
const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Axis {
  double lo = 0, hi = 1;
  bool log = false;
  double map(double v, double p0, double p1) const {
    const double a = log ? std::log10(lo) : lo;
    const double b = log ? std::log10(hi) : hi;
    const double t = ((log ? std::log10(v) : v) - a) / (b - a);
    return p0 + t * (p1 - p0);
  }
  std::vector<double> ticks() const {
    std::vector<double> out;
    if (log) {
      for (double e = std::floor(std::log10(lo)); e <= std::ceil(std::log10(hi)); e += 1) {
        const double v = std::pow(10.0, e);
        if (v >= lo * (1 - 1e-12) && v <= hi * (1 + 1e-12)) out.push_back(v);
      }
      if (out.size() < 2) out = {lo, hi};
    } else {
      for (int i = 0; i <= 5; ++i) out.push_back(lo + (hi - lo) * i / 5.0);
    }
    return out;
  }
};

Axis make_axis(const std::vector<double>& values) {
  Axis ax;
  ax.log = wants_log_axis(values);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : values) {
    if (!std::isfinite(v) || (ax.log && v <= 0)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!std::isfinite(lo)) lo = 0, hi = 1;
  if (lo == hi) {
    const double pad = lo == 0 ? 1 : std::abs(lo) * 0.1;
    lo = ax.log ? lo / 2 : lo - pad;
    hi = ax.log ? hi * 2 : hi + pad;
  }
  ax.lo = lo;
  ax.hi = hi;
  return ax;
}

}  // namespace

bool wants_log_axis(const std::vector<double>& values) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (double v : values) {
    if (!(v > 0) || !std::isfinite(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return std::isfinite(lo) && hi / lo > 100.0;
}

std::string render_svg(const LinePlot& plot) {
  std::vector<double> xs, ys;
  for (const auto& s : plot.series) {
    xs.insert(xs.end(), s.x.begin(), s.x.end());
    ys.insert(ys.end(), s.y.begin(), s.y.end());
  }
  const Axis ax = make_axis(xs), ay = make_axis(ys);
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(plot.title)
     << "</text>\n";
  os << "<rect x=\"" << x0 << "\" y=\"" << y1 << "\" width=\"" << x1 - x0 << "\" height=\"" << y0 - y1
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : ax.ticks()) {
    const double px = ax.map(t, x0, x1);
    os << "<line x1=\"" << px << "\" y1=\"" << y0 << "\" x2=\"" << px << "\" y2=\"" << y0 + 5 << "\" stroke=\"black\"/>";
    os << "<text x=\"" << px << "\" y=\"" << y0 + 18 << "\" text-anchor=\"middle\">" << num(t) << "</text>\n";
  }
  for (double t : ay.ticks()) {
    const double py = ay.map(t, y0, y1);
    os << "<line x1=\"" << x0 - 5 << "\" y1=\"" << py << "\" x2=\"" << x0 << "\" y2=\"" << py << "\" stroke=\"black\"/>";
    os << "<text x=\"" << x0 - 8 << "\" y=\"" << py + 4 << "\" text-anchor=\"end\">" << num(t) << "</text>\n";
  }
  os << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">"
     << escape(plot.x_label + (ax.log ? " (log)" : "")) << "</text>\n";
  os << "<text transform=\"translate(18," << (y0 + y1) / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
     << escape(plot.y_label + (ay.log ? " (log)" : "")) << "</text>\n";

  for (std::size_t i = 0; i < plot.series.size(); ++i) {
    const auto& s = plot.series[i];
    const char* color = kPalette[i % std::size(kPalette)];
    os << "<polyline class=\"series\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t j = 0; j < s.x.size(); ++j) {
      if ((ax.log && s.x[j] <= 0) || (ay.log && s.y[j] <= 0)) continue;
      os << (j ? " " : "") << ax.map(s.x[j], x0, x1) << "," << ay.map(s.y[j], y0, y1);
    }
    os << "\"/>\n";
    for (std::size_t j = 0; j < s.x.size(); ++j) {
      if ((ax.log && s.x[j] <= 0) || (ay.log && s.y[j] <= 0)) continue;
      os << "<circle cx=\"" << ax.map(s.x[j], x0, x1) << "\" cy=\"" << ay.map(s.y[j], y0, y1) << "\" r=\"3\" fill=\""
         << color << "\"/>";
    }
    os << "\n<text x=\"" << x1 + 12 << "\" y=\"" << y1 + 16 * (i + 1) << "\" fill=\"" << color << "\">"
       << escape(s.label) << "</text>\n";
  }
  if (!plot.annotation.empty())
    os << "<text class=\"annotation\" x=\"" << x0 + 8 << "\" y=\"" << y1 + 16 << "\">" << escape(plot.annotation)
       << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

namespace {

bool has_header(const CsvTable& t, const std::vector<std::string>& h) { return t.header == h; }

LinePlot sweep_plot(const CsvTable& t, bool attenuation) {
  const auto rows = sweep_rows_from(t);
  if (rows.empty()) throw InvalidInput("plot: sweep CSV has no data rows");
  // mean err_Hminus_s per (series key, x)
  std::map<std::pair<double, double>, std::map<double, std::pair<double, int>>> acc;
  for (const auto& r : rows) {
    const std::pair<double, double> key = attenuation ? std::make_pair(r.k, r.delta) : std::make_pair(r.b, r.delta);
    auto& cell = acc[key][attenuation ? r.b : r.k];
    cell.first += r.err_h_minus_s;
    cell.second += 1;
  }
  std::map<double, int> distinct_b;
  for (const auto& r : rows) distinct_b[r.b]++;
  LinePlot p;
  p.title = attenuation ? "Reconstruction error vs attenuation" : "Reconstruction error vs wavenumber";
  p.x_label = attenuation ? "b" : "k";
  p.y_label = "mean relative H^-s error";
  for (const auto& [key, pts] : acc) {
    PlotSeries s;
    std::ostringstream label;
    if (attenuation) label << "k=" << key.first << ", delta=" << key.second;
    else if (distinct_b.size() > 1) label << "b=" << key.first << ", delta=" << key.second;
    else label << "delta=" << key.second;
    s.label = label.str();
    for (const auto& [x, sum] : pts) {
      s.x.push_back(x);
      s.y.push_back(sum.first / sum.second);
    }
    p.series.push_back(std::move(s));
  }
  return p;
}

LinePlot linearization_plot(const CsvTable& t) {
  if (t.rows.empty()) throw InvalidInput("plot: linearization CSV has no data rows");
  LinePlot p;
  p.title = "Linearisation residual vs amplitude";
  p.x_label = "amplitude";
  p.y_label = "||u - u0 - u1|| / ||u0||";
  PlotSeries s{"residual", {}, {}};
  const auto ca = t.column("amplitude"), cr = t.column("residual_ratio"), cs = t.column("fit_slope");
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    s.x.push_back(t.number(i, ca));
    s.y.push_back(t.number(i, cr));
  }
  t.number(0, cs);
  p.annotation = "fitted slope = " + t.rows[0][cs];
  p.series.push_back(std::move(s));
  return p;
}

LinePlot bound_plot(const CsvTable& t) {
  if (t.rows.empty()) throw InvalidInput("plot: bound CSV has no data rows");
  LinePlot p;
  p.title = "Stability bound overlay";
  p.x_label = "k";
  p.y_label = "bound";
  PlotSeries s{"bound", {}, {}};
  const auto ck = t.column("k"), cb = t.column("bound_value");
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    s.x.push_back(t.number(i, ck));
    s.y.push_back(t.number(i, cb));
  }
  p.series.push_back(std::move(s));
  return p;
}

}  // namespace

std::vector<std::filesystem::path> emit_plots(const std::vector<std::filesystem::path>& csv_files,
                                              const std::filesystem::path& out_dir) {
  std::vector<std::filesystem::path> written;
  for (const auto& path : csv_files) {
    const CsvTable t = read_csv(path);
    LinePlot plot;
    if (has_header(t, kSweepHeader)) {
      plot = sweep_plot(t, path.stem() == "attenuation");
    } else if (has_header(t, kLinearizationHeader)) {
      plot = linearization_plot(t);
    } else if (has_header(t, kBoundHeader)) {
      plot = bound_plot(t);
    } else {
      throw InvalidInput("plot: " + path.filename().string() + " does not match a known CSV schema");
    }
    const auto target = out_dir / (path.stem().string() + ".svg");
    std::ofstream os(target, std::ios::binary);
    if (!os) throw InvalidInput("plot: cannot write " + target.string());
    os << render_svg(plot);
    written.push_back(target);
  }
  return written;
}

}  // namespace bhlab
