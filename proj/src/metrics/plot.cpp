// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "disfl/metrics/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace disfl {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 160, kTop = 40, kBottom = 60;
const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string escape(const std::string& s) {
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

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

// Tick positions at 1-2-5 steps covering [lo, hi].
std::vector<double> linear_ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) {
      step = m * mag;
      break;
    }
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + step * 1e-9; t += step) ticks.push_back(t);
  return ticks;
}

struct Axis {
  double lo = 0, hi = 1;
  bool log = false;

  double map(double v, double from, double to) const {
    const double a = log ? std::log10(lo) : lo, b = log ? std::log10(hi) : hi;
    const double x = log ? std::log10(v) : v;
    return from + (x - a) / (b - a) * (to - from);
  }
};

Axis fit(std::vector<double> values, bool log) {
  Axis a;
  a.log = log;
  if (log) values.erase(std::remove_if(values.begin(), values.end(), [](double v) { return v <= 0; }), values.end());
  if (values.empty()) {
    a.lo = log ? 0.1 : 0.0;
    a.hi = 1.0;
    return a;
  }
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  a.lo = *mn;
  a.hi = *mx;
  if (log) {
    a.lo = std::pow(10.0, std::floor(std::log10(a.lo)));
    a.hi = std::pow(10.0, std::ceil(std::log10(a.hi)));
    if (a.hi <= a.lo) a.hi = a.lo * 10;
  } else {
    const double pad = a.hi > a.lo ? 0.05 * (a.hi - a.lo) : std::max(std::abs(a.lo) * 0.1, 0.1);
    a.lo -= pad;
    a.hi += pad;
  }
  return a;
}

}  // namespace

std::string render_svg(const PlotSpec& spec) {
  std::vector<double> xs, ys;
  for (const auto& s : spec.series) {
    for (const auto& [x, y] : s.points) {
      xs.push_back(x);
      ys.push_back(y);
    }
  }
  const Axis ax = fit(xs, spec.log_x), ay = fit(ys, false);
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(spec.title)
    << "</text>\n";
  o << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\"" << y0 << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\"" << y1 << "\" stroke=\"black\"/>\n";

  std::vector<double> xticks;
  if (ax.log) {
    for (double t = ax.lo; t <= ax.hi * 1.0001; t *= 10) xticks.push_back(t);
  } else {
    xticks = linear_ticks(ax.lo, ax.hi);
  }
  for (double t : xticks) {
    const double px = ax.map(t, x0, x1);
    o << "<line x1=\"" << px << "\" y1=\"" << y0 << "\" x2=\"" << px << "\" y2=\"" << y0 + 5
      << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << px << "\" y=\"" << y0 + 18 << "\" text-anchor=\"middle\">" << num(t) << "</text>\n";
  }
  for (double t : linear_ticks(ay.lo, ay.hi)) {
    const double py = ay.map(t, y0, y1);
    o << "<line x1=\"" << x0 - 5 << "\" y1=\"" << py << "\" x2=\"" << x1 << "\" y2=\"" << py
      << "\" stroke=\"#ddd\"/>\n";
    o << "<text x=\"" << x0 - 8 << "\" y=\"" << py + 4 << "\" text-anchor=\"end\">" << num(t) << "</text>\n";
  }
  o << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << kHeight - 18 << "\" text-anchor=\"middle\">"
    << escape(spec.x_label) << "</text>\n";
  o << "<text transform=\"translate(18," << (y0 + y1) / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
    << escape(spec.y_label) << "</text>\n";

  for (std::size_t si = 0; si < spec.series.size(); ++si) {
    const auto& s = spec.series[si];
    const char* color = kPalette[si % std::size(kPalette)];
    std::vector<std::size_t> order(s.points.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s.points[a] < s.points[b]; });
    if (order.size() > 1) {
      o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i : order) {
        if (ax.log && s.points[i].first <= 0) continue;
        o << ax.map(s.points[i].first, x0, x1) << ',' << ay.map(s.points[i].second, y0, y1) << ' ';
      }
      o << "\"/>\n";
    }
    for (std::size_t i : order) {
      if (ax.log && s.points[i].first <= 0) continue;
      const double px = ax.map(s.points[i].first, x0, x1), py = ay.map(s.points[i].second, y0, y1);
      o << "<circle cx=\"" << px << "\" cy=\"" << py << "\" r=\"3.5\" fill=\"" << color << "\"/>\n";
      if (i < s.point_labels.size() && !s.point_labels[i].empty()) {
        o << "<text x=\"" << px + 6 << "\" y=\"" << py - 6 << "\" font-size=\"10\">" << escape(s.point_labels[i])
          << "</text>\n";
      }
    }
    const double ly = kTop + 20 + 18 * static_cast<double>(si);
    o << "<rect x=\"" << x1 + 15 << "\" y=\"" << ly - 9 << "\" width=\"12\" height=\"12\" fill=\"" << color
      << "\"/>\n";
    o << "<text x=\"" << x1 + 32 << "\" y=\"" << ly + 1 << "\">" << escape(s.label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

PlotSpec size_vs_f1(std::span<const EvalReport> reports) {
  PlotSpec spec;
  spec.title = "Model size vs F1";
  spec.x_label = "size (MiB)";
  spec.y_label = "F1";
  spec.log_x = true;
  Series s;
  s.label = "models";
  for (const auto& r : reports) {
    if (r.size_mib <= 0) continue;
    s.points.emplace_back(r.size_mib, r.f1);
    s.point_labels.push_back(r.config);
  }
  spec.series.push_back(std::move(s));
  return spec;
}

PlotSpec silver_pct_vs_f1(std::span<const History> runs, const std::string& label) {
  PlotSpec spec;
  spec.title = "Silver data percentage vs F1";
  spec.x_label = "silver data per batch (%)";
  spec.y_label = "dev F1";
  Series s;
  s.label = label;
  for (const auto& h : runs) {
    double pct = 0.0, best = 0.0;
    bool any = false;
    for (const auto& r : h) {
      if (r.silver_pct >= 0.0) pct = r.silver_pct;
      if (r.split == "dev") {
        best = any ? std::max(best, r.f1) : r.f1;
        any = true;
      }
    }
    if (any) s.points.emplace_back(100.0 * pct, best);
  }
  spec.series.push_back(std::move(s));
  return spec;
}

}  // namespace disfl
