#include "stocap/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace stocap {
namespace {

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void include(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  bool valid() const { return lo <= hi; }
  void widen() {
    if (!valid()) {
      lo = 0.0;
      hi = 1.0;
    } else if (hi == lo) {
      hi = lo + 1.0;
    }
  }
};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string tick_label(double v) {
  if (std::abs(v) >= 100.0 || v == std::floor(v)) return fmt::format("{:.0f}", v);
  return fmt::format("{:.2f}", v);
}

}  // namespace

std::string render_svg(const Chart& chart) {
  const double left = kMarginLeft;
  const double right = chart.width - kMarginRight;
  const double top = kMarginTop + 14.0 * static_cast<double>(chart.notices.size());
  const double bottom = chart.height - kMarginBottom;
  if (right <= left || bottom <= top) throw std::invalid_argument("render_svg: chart too small");

  Range xr, yr;
  bool any_secondary = false;
  for (const auto& s : chart.series) {
    if (s.x.size() != s.y.size())
      throw std::invalid_argument("render_svg: series " + s.name + " has mismatched x and y");
    for (double x : s.x) xr.include(x);
    if (s.secondary_axis) {
      any_secondary = true;
      continue;
    }
    for (double y : s.y) yr.include(y);
  }
  xr.widen();
  if (yr.valid() && yr.lo >= 0.0) yr.lo = 0.0;
  yr.widen();

  auto px = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * (right - left); };
  auto py = [&](double y) { return bottom - (y - yr.lo) / (yr.hi - yr.lo) * (bottom - top); };
  auto py2 = [&](double y) { return bottom - y * (bottom - top); };

  std::string out;
  out += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n",
      chart.width, chart.height);
  if (chart.generated_at) out += fmt::format("<!-- generated {} -->\n", escape(*chart.generated_at));
  out += fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", chart.width, chart.height);
  out += fmt::format("<text x=\"{:.2f}\" y=\"20\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
                     chart.width / 2.0, escape(chart.title));
  for (std::size_t i = 0; i < chart.notices.size(); ++i)
    out += fmt::format(
        "<text class=\"notice\" x=\"{:.2f}\" y=\"{}\" text-anchor=\"middle\" fill=\"#b00\">{}</text>\n",
        chart.width / 2.0, 36 + 14 * static_cast<int>(i), escape(chart.notices[i]));

  out += fmt::format(
      "<path class=\"axes\" d=\"M{0:.2f},{1:.2f} L{0:.2f},{2:.2f} L{3:.2f},{2:.2f}\" fill=\"none\" "
      "stroke=\"black\"/>\n",
      left, top, bottom, right);
  for (int i = 0; i <= 5; ++i) {
    const double fx = xr.lo + (xr.hi - xr.lo) * i / 5.0;
    const double fy = yr.lo + (yr.hi - yr.lo) * i / 5.0;
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n", px(fx),
                       bottom + 16, tick_label(fx));
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{}</text>\n", left - 6,
                       py(fy) + 4, tick_label(fy));
    if (any_secondary)
      out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"start\">{}</text>\n",
                         right + 6, py2(i / 5.0) + 4, tick_label(i / 5.0));
  }
  if (any_secondary)
    out += fmt::format("<path class=\"axes\" d=\"M{0:.2f},{1:.2f} L{0:.2f},{2:.2f}\" stroke=\"black\"/>\n",
                       right, top, bottom);
  out += fmt::format("<text x=\"{:.2f}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
                     (left + right) / 2.0, chart.height - 20, escape(chart.x_label));
  out += fmt::format(
      "<text x=\"18\" y=\"{0:.2f}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {0:.2f})\">{1}</text>\n",
      (top + bottom) / 2.0, escape(chart.y_label));
  if (any_secondary)
    out += fmt::format(
        "<text x=\"{0}\" y=\"{1:.2f}\" text-anchor=\"middle\" transform=\"rotate(90 {0} {1:.2f})\">{2}</text>\n",
        chart.width - 18, (top + bottom) / 2.0, escape(chart.y2_label));

  for (std::size_t si = 0; si < chart.series.size(); ++si) {
    const auto& s = chart.series[si];
    auto ymap = [&](double y) { return s.secondary_axis ? py2(y) : py(y); };
    if (s.style == SeriesStyle::points) {
      out += fmt::format("<g class=\"series\" data-name=\"{}\" fill=\"{}\">\n", escape(s.name), s.color);
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
        out += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\"/>\n", px(s.x[i]), ymap(s.y[i]));
      }
      out += "</g>\n";
    } else {
      std::string d;
      bool pen_down = false;
      double last_y = 0.0;
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
          pen_down = false;
          continue;
        }
        const double x = px(s.x[i]);
        const double y = ymap(s.y[i]);
        if (!pen_down) {
          d += fmt::format("M{:.2f},{:.2f}", x, y);
          pen_down = true;
        } else if (s.style == SeriesStyle::step) {
          d += fmt::format(" L{:.2f},{:.2f} L{:.2f},{:.2f}", x, last_y, x, y);
        } else {
          d += fmt::format(" L{:.2f},{:.2f}", x, y);
        }
        last_y = y;
      }
      out += fmt::format(
          "<path class=\"series\" data-name=\"{}\" d=\"{}\" fill=\"none\" stroke=\"{}\" "
          "stroke-width=\"1.5\"/>\n",
          escape(s.name), d, s.color);
    }
    const double ly = top + 14 + 16 * static_cast<double>(si);
    out += fmt::format(
        "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"10\" height=\"10\" fill=\"{}\"/>"
        "<text x=\"{:.2f}\" y=\"{:.2f}\">{}</text>\n",
        left + 10, ly - 9, s.color, left + 26, ly, escape(s.name));
  }
  out += "</svg>\n";
  return out;
}

}  // namespace stocap
