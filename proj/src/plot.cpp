// SPDX-License-Identifier: Apache-2.0
#include "mcflow/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "mcflow/error.hpp"

namespace mcf {
namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 90, kRight = 20, kTop = 40, kBottom = 50;

struct Range {
  double lo, hi;
};

Range padded(const std::vector<double>& v) {
  double lo = *std::min_element(v.begin(), v.end());
  double hi = *std::max_element(v.begin(), v.end());
  if (hi - lo <= 1e-12 * std::max(std::abs(lo), std::abs(hi))) {
    const double pad = std::max(std::abs(lo), 1.0) * 0.05;
    return {lo - pad, hi + pad};
  }
  return {lo, hi};
}

double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  return (f < 1.5 ? 1.0 : f < 3.0 ? 2.0 : f < 7.0 ? 5.0 : 10.0) * mag;
}

std::vector<double> ticks(Range r) {
  const double step = nice_step(r.hi - r.lo, 5);
  std::vector<double> out;
  for (double v = std::ceil(r.lo / step) * step; v <= r.hi + 1e-9 * step; v += step) {
    out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  }
  return out;
}

double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string label(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

struct Frame {
  Range x, y;
  double sx(double v) const { return round3(kLeft + (v - x.lo) / (x.hi - x.lo) * (kWidth - kLeft - kRight)); }
  double sy(double v) const { return round3(kHeight - kBottom - (v - y.lo) / (y.hi - y.lo) * (kHeight - kTop - kBottom)); }
};

Frame frame_of(const PlotSeries& s) { return {padded(s.x), padded(s.y)}; }

}  // namespace

std::vector<std::pair<double, double>> plot_points(const PlotSeries& series) {
  if (series.x.empty() || series.x.size() != series.y.size()) {
    throw validation_error("plot: empty or ragged series");
  }
  const Frame f = frame_of(series);
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < series.x.size(); ++i) out.emplace_back(f.sx(series.x[i]), f.sy(series.y[i]));
  return out;
}

std::string render_plot(const CsvTable& table, std::string_view quantity) {
  const int tcol = table.column("t");
  const int qcol = table.column(quantity);
  if (qcol < 0) throw validation_error("plot: unknown column '" + std::string(quantity) + "'");
  if (tcol < 0) throw validation_error("plot: table has no t column");
  if (table.rows.empty()) throw validation_error("plot: no rows");
  PlotSeries s;
  for (const auto& row : table.rows) {
    s.x.push_back(row[tcol]);
    s.y.push_back(row[qcol]);
  }
  const Frame f = frame_of(s);
  const auto points = plot_points(s);

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
         num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
         "\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">" + escape(quantity) + " vs t</text>\n";
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  svg += "<g stroke=\"black\" stroke-width=\"1\">\n";
  svg += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x1) + "\" y2=\"" + num(y0) + "\"/>\n";
  svg += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x0) + "\" y2=\"" + num(y1) + "\"/>\n";
  svg += "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (double v : ticks(f.x)) {
    const std::string x = num(f.sx(v));
    svg += "<line x1=\"" + x + "\" y1=\"" + num(y0) + "\" x2=\"" + x + "\" y2=\"" + num(y0 + 5) +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + x + "\" y=\"" + num(y0 + 18) + "\" text-anchor=\"middle\">" + label(v) + "</text>\n";
  }
  for (double v : ticks(f.y)) {
    const std::string y = num(f.sy(v));
    svg += "<line x1=\"" + num(x0 - 5) + "\" y1=\"" + y + "\" x2=\"" + num(x0) + "\" y2=\"" + y +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + num(x0 - 8) + "\" y=\"" + y + "\" text-anchor=\"end\" dominant-baseline=\"middle\">" +
           label(v) + "</text>\n";
  }
  svg += "<text x=\"" + num((x0 + x1) / 2) + "\" y=\"" + num(kHeight - 10) + "\" text-anchor=\"middle\">t</text>\n";
  svg += "</g>\n<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i) svg += ' ';
    svg += num(points[i].first) + "," + num(points[i].second);
  }
  svg += "\"/>\n</svg>\n";
  return svg;
}

}  // namespace mcf
