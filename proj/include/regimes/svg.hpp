#pragma once

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include "regimes/core.hpp"

namespace regimes {
namespace svg {

namespace detail {

inline void appendf(std::string& s, const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, ap);
  va_end(ap);
  s += buf;
}

inline std::string esc(const std::string& t) {
  std::string o;
  for (char c : t) {
    if (c == '&') o += "&amp;";
    else if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else o += c;
  }
  return o;
}

inline const char* palette(int i) {
  static const char* colors[] = {"#4477aa", "#ee6677", "#228833", "#ccbb44",
                                 "#66ccee", "#aa3377", "#bbbbbb", "#222255"};
  return colors[i % 8];
}

// Tick positions at a 1-2-5 step covering [lo, hi].
inline std::vector<double> nice_ticks(double lo, double hi) {
  if (!(hi > lo)) return {lo};
  const double raw = (hi - lo) / 4.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (mag * m >= raw) { step = mag * m; break; }
  }
  std::vector<double> t;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step)
    t.push_back(std::fabs(v) < 1e-12 * step ? 0.0 : v);
  return t;
}

struct Frame {
  double width, height, left, right, top, bottom;
  double x0, x1, y0, y1;  // data ranges
  double px(double x) const { return left + (x - x0) / (x1 - x0) * (width - left - right); }
  double py(double y) const { return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom); }
};

inline void open_doc(std::string& s, double w, double h) {
  appendf(s, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
             "viewBox=\"0 0 %.0f %.0f\" font-family=\"sans-serif\">\n", w, h, w, h);
  appendf(s, "<rect width=\"%.0f\" height=\"%.0f\" fill=\"white\"/>\n", w, h);
}

inline void axes(std::string& s, const Frame& f, const std::string& x_label,
                 const std::string& y_label) {
  appendf(s, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n",
          f.left, f.height - f.bottom, f.width - f.right, f.height - f.bottom);
  appendf(s, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n",
          f.left, f.top, f.left, f.height - f.bottom);
  for (double v : nice_ticks(f.y0, f.y1)) {
    const double y = f.py(v);
    appendf(s, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n",
            f.left - 4.0, y, f.left, y);
    appendf(s, "<text x=\"%.2f\" y=\"%.2f\" font-size=\"11\" text-anchor=\"end\">%s</text>\n",
            f.left - 7.0, y + 4.0, regimes::detail::fmt_double(v).c_str());
  }
  appendf(s, "<text x=\"%.2f\" y=\"%.2f\" font-size=\"12\" text-anchor=\"middle\">%s</text>\n",
          (f.left + f.width - f.right) / 2.0, f.height - 10.0, esc(x_label).c_str());
  appendf(s, "<text x=\"14\" y=\"%.2f\" font-size=\"12\" text-anchor=\"middle\" "
             "transform=\"rotate(-90 14 %.2f)\">%s</text>\n",
          (f.top + f.height - f.bottom) / 2.0, (f.top + f.height - f.bottom) / 2.0,
          esc(y_label).c_str());
}

inline void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot write " + path);
  out << body;
}

}  // namespace detail

/// Line chart of a metric over integer x positions (cluster counts), with
/// optional symmetric error bars and a dashed marker at the selected x.
inline void write_line_chart(const std::string& path, const std::string& title,
                             const std::string& x_label, const std::string& y_label,
                             const std::vector<int>& xs, const std::vector<double>& ys,
                             const std::vector<double>& se = {}, int selected_x = 0) {
  if (xs.empty() || xs.size() != ys.size()) throw config_error("chart series misaligned");
  detail::Frame f{640, 420, 70, 20, 40, 50, 0, 0, 0, 0};
  f.x0 = xs.front() - 0.5;
  f.x1 = xs.back() + 0.5;
  double lo = ys[0], hi = ys[0];
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double e = i < se.size() ? se[i] : 0.0;
    lo = std::min(lo, ys[i] - e);
    hi = std::max(hi, ys[i] + e);
  }
  const double pad = (hi > lo) ? 0.08 * (hi - lo) : std::max(1.0, std::fabs(hi)) * 0.1;
  f.y0 = lo - pad;
  f.y1 = hi + pad;

  std::string s;
  detail::open_doc(s, f.width, f.height);
  detail::appendf(s, "<text x=\"%.2f\" y=\"24\" font-size=\"14\" text-anchor=\"middle\">%s</text>\n",
                  f.width / 2.0, detail::esc(title).c_str());
  detail::axes(s, f, x_label, y_label);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = f.px(xs[i]);
    detail::appendf(s, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n",
                    x, f.height - f.bottom, x, f.height - f.bottom + 4.0);
    detail::appendf(s, "<text x=\"%.2f\" y=\"%.2f\" font-size=\"11\" text-anchor=\"middle\">%d</text>\n",
                    x, f.height - f.bottom + 16.0, xs[i]);
  }
  if (selected_x != 0) {
    const double x = f.px(selected_x);
    detail::appendf(s, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                       "stroke=\"#aa3377\" stroke-dasharray=\"4 3\"/>\n",
                    x, f.top, x, f.height - f.bottom);
  }
  for (std::size_t i = 0; i < se.size() && i < xs.size(); ++i) {
    if (!(se[i] > 0.0)) continue;
    const double x = f.px(xs[i]);
    const double ytop = f.py(ys[i] + se[i]), ybot = f.py(ys[i] - se[i]);
    detail::appendf(s, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#4477aa\"/>\n",
                    x, ytop, x, ybot);
    detail::appendf(s, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#4477aa\"/>\n",
                    x - 3.0, ytop, x + 3.0, ytop);
    detail::appendf(s, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#4477aa\"/>\n",
                    x - 3.0, ybot, x + 3.0, ybot);
  }
  std::string pts;
  for (std::size_t i = 0; i < xs.size(); ++i)
    detail::appendf(pts, "%.2f,%.2f ", f.px(xs[i]), f.py(ys[i]));
  detail::appendf(s, "<polyline points=\"%s\" fill=\"none\" stroke=\"#4477aa\" stroke-width=\"1.5\"/>\n",
                  pts.c_str());
  for (std::size_t i = 0; i < xs.size(); ++i)
    detail::appendf(s, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"#4477aa\"/>\n",
                    f.px(xs[i]), f.py(ys[i]));
  s += "</svg>\n";
  detail::write_file(path, s);
}

/// Silhouette plot: one horizontal bar per observation, grouped by regime
/// and sorted by width inside each group, with a dashed mean line.
inline void write_silhouette_plot(const std::string& path, const std::string& title,
                                  const std::vector<double>& values,
                                  const std::vector<int>& regime_idx,
                                  const std::vector<std::string>& regime_names, double mean) {
  if (values.size() != regime_idx.size()) throw config_error("silhouette series misaligned");
  const int T = static_cast<int>(values.size());
  const int k = static_cast<int>(regime_names.size());
  std::vector<int> order(static_cast<std::size_t>(T));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (regime_idx[static_cast<std::size_t>(a)] != regime_idx[static_cast<std::size_t>(b)])
      return regime_idx[static_cast<std::size_t>(a)] < regime_idx[static_cast<std::size_t>(b)];
    if (values[static_cast<std::size_t>(a)] != values[static_cast<std::size_t>(b)])
      return values[static_cast<std::size_t>(a)] > values[static_cast<std::size_t>(b)];
    return a < b;
  });

  const double bar = std::max(1.5, std::min(12.0, 360.0 / T));
  detail::Frame f{640, 0, 70, 20, 40, 50, 0, 0, 0, 0};
  f.height = f.top + f.bottom + bar * T + 20.0;
  double lo = 0.0;
  for (double v : values) lo = std::min(lo, v);
  f.x0 = lo - 0.05;
  f.x1 = 1.0;
  f.y0 = 0.0;
  f.y1 = 1.0;

  std::string s;
  detail::open_doc(s, f.width, f.height);
  detail::appendf(s, "<text x=\"%.2f\" y=\"24\" font-size=\"14\" text-anchor=\"middle\">%s</text>\n",
                  f.width / 2.0, detail::esc(title).c_str());
  const double zero_x = f.px(0.0);
  for (int r = 0; r < T; ++r) {
    const int i = order[static_cast<std::size_t>(r)];
    const double v = values[static_cast<std::size_t>(i)];
    const double x = f.px(std::min(v, 0.0));
    const double w = std::fabs(f.px(v) - zero_x);
    detail::appendf(s, "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"%s\"/>\n",
                    x, f.top + 10.0 + bar * r, std::max(w, 0.1), bar * 0.9,
                    detail::palette(regime_idx[static_cast<std::size_t>(i)]));
  }
  for (double v : detail::nice_ticks(f.x0, f.x1)) {
    const double x = f.px(v);
    detail::appendf(s, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n",
                    x, f.height - f.bottom, x, f.height - f.bottom + 4.0);
    detail::appendf(s, "<text x=\"%.2f\" y=\"%.2f\" font-size=\"11\" text-anchor=\"middle\">%s</text>\n",
                    x, f.height - f.bottom + 16.0, regimes::detail::fmt_double(v).c_str());
  }
  detail::appendf(s, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n",
                  f.left, f.height - f.bottom, f.width - f.right, f.height - f.bottom);
  const double mx = f.px(mean);
  detail::appendf(s, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                     "stroke=\"#aa3377\" stroke-dasharray=\"4 3\"/>\n",
                  mx, f.top, mx, f.height - f.bottom);
  for (int c = 0; c < k; ++c) {
    detail::appendf(s, "<rect x=\"%.2f\" y=\"%.2f\" width=\"10\" height=\"10\" fill=\"%s\"/>\n",
                    f.width - f.right - 150.0, f.top + 14.0 * c, detail::palette(c));
    detail::appendf(s, "<text x=\"%.2f\" y=\"%.2f\" font-size=\"11\">%s</text>\n",
                    f.width - f.right - 136.0, f.top + 14.0 * c + 9.0,
                    detail::esc(regime_names[static_cast<std::size_t>(c)]).c_str());
  }
  detail::appendf(s, "<text x=\"%.2f\" y=\"%.2f\" font-size=\"12\" text-anchor=\"middle\">"
                     "silhouette width</text>\n",
                  (f.left + f.width - f.right) / 2.0, f.height - 10.0);
  s += "</svg>\n";
  detail::write_file(path, s);
}

/// Calendar-style regime strip: one row per year, one cell per month. Falls
/// back to a single index strip when the index is not monthly.
inline void write_timeline(const std::string& path, const std::string& title,
                           const std::vector<TimePoint>& times, const std::vector<int>& regime_idx,
                           const std::vector<std::string>& regime_names) {
  if (times.size() != regime_idx.size()) throw config_error("timeline series misaligned");
  if (times.empty()) throw config_error("timeline needs at least one observation");
  const int k = static_cast<int>(regime_names.size());

  bool monthly = true;
  for (std::size_t i = 0; i + 1 < times.size() && monthly; ++i) {
    const int a = times[i].year * 12 + times[i].month;
    const int b = times[i + 1].year * 12 + times[i + 1].month;
    if (b != a + 1) monthly = false;
  }

  std::string s;
  const double legend_h = 18.0 * k + 10.0;
  if (monthly) {
    const int y_first = times.front().year, y_last = times.back().year;
    const int rows = y_last - y_first + 1;
    const double cell = 16.0, left = 64.0, top = 44.0;
    const double w = left + 12 * cell + 170.0;
    const double h = top + rows * cell + 30.0;
    detail::open_doc(s, w, std::max(h, top + legend_h));
    detail::appendf(s, "<text x=\"%.2f\" y=\"24\" font-size=\"14\" text-anchor=\"middle\">%s</text>\n",
                    w / 2.0, detail::esc(title).c_str());
    static const char* mon[] = {"J", "F", "M", "A", "M", "J", "J", "A", "S", "O", "N", "D"};
    for (int m = 0; m < 12; ++m)
      detail::appendf(s, "<text x=\"%.2f\" y=\"%.2f\" font-size=\"10\" text-anchor=\"middle\">%s</text>\n",
                      left + (m + 0.5) * cell, top - 6.0, mon[m]);
    for (std::size_t i = 0; i < times.size(); ++i) {
      const int row = times[i].year - y_first;
      const int col = times[i].month - 1;
      detail::appendf(s, "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" "
                         "fill=\"%s\" stroke=\"white\" stroke-width=\"0.5\"/>\n",
                      left + col * cell, top + row * cell, cell, cell,
                      detail::palette(regime_idx[i]));
    }
    const int year_step = rows > 25 ? 5 : 1;
    for (int r = 0; r < rows; r += year_step)
      detail::appendf(s, "<text x=\"%.2f\" y=\"%.2f\" font-size=\"10\" text-anchor=\"end\">%d</text>\n",
                      left - 6.0, top + (r + 0.8) * cell, y_first + r);
    for (int c = 0; c < k; ++c) {
      detail::appendf(s, "<rect x=\"%.2f\" y=\"%.2f\" width=\"12\" height=\"12\" fill=\"%s\"/>\n",
                      left + 12 * cell + 20.0, top + 18.0 * c, detail::palette(c));
      detail::appendf(s, "<text x=\"%.2f\" y=\"%.2f\" font-size=\"11\">%s</text>\n",
                      left + 12 * cell + 36.0, top + 18.0 * c + 10.0,
                      detail::esc(regime_names[static_cast<std::size_t>(c)]).c_str());
    }
  } else {
    const int T = static_cast<int>(times.size());
    const double left = 20.0, top = 44.0, w = 760.0, strip_h = 40.0;
    const double cw = (w - left - 20.0) / T;
    detail::open_doc(s, w, top + strip_h + legend_h + 40.0);
    detail::appendf(s, "<text x=\"%.2f\" y=\"24\" font-size=\"14\" text-anchor=\"middle\">%s</text>\n",
                    w / 2.0, detail::esc(title).c_str());
    for (int i = 0; i < T; ++i)
      detail::appendf(s, "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"%s\"/>\n",
                      left + i * cw, top, cw + 0.5, strip_h,
                      detail::palette(regime_idx[static_cast<std::size_t>(i)]));
    detail::appendf(s, "<text x=\"%.2f\" y=\"%.2f\" font-size=\"10\">%s</text>\n", left,
                    top + strip_h + 14.0, detail::esc(times.front().str()).c_str());
    detail::appendf(s, "<text x=\"%.2f\" y=\"%.2f\" font-size=\"10\" text-anchor=\"end\">%s</text>\n",
                    w - 20.0, top + strip_h + 14.0, detail::esc(times.back().str()).c_str());
    for (int c = 0; c < k; ++c) {
      detail::appendf(s, "<rect x=\"%.2f\" y=\"%.2f\" width=\"12\" height=\"12\" fill=\"%s\"/>\n",
                      left, top + strip_h + 26.0 + 18.0 * c, detail::palette(c));
      detail::appendf(s, "<text x=\"%.2f\" y=\"%.2f\" font-size=\"11\">%s</text>\n",
                      left + 16.0, top + strip_h + 36.0 + 18.0 * c,
                      detail::esc(regime_names[static_cast<std::size_t>(c)]).c_str());
    }
  }
  s += "</svg>\n";
  detail::write_file(path, s);
}

}  // namespace svg
}  // namespace regimes
