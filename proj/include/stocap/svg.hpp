#pragma once

#include <optional>
#include <string>
#include <vector>

namespace stocap {

enum class SeriesStyle { line, step, points };

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  SeriesStyle style = SeriesStyle::line;
  std::string color = "#1f77b4";
  bool secondary_axis = false;  // mapped onto [0, 1] on the right-hand axis
};

// Plot area is [margin_left, width - margin_right] x [margin_top, height -
// margin_bottom]; the top margin grows 14 px per notice. x maps linearly
// from [x_min, x_max], the primary y axis from [y_min, y_max] (bottom to
// top) and the secondary axis from [0, 1].
// Ranges come from the data; y_min is 0 when all primary values are >= 0.
struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::string y2_label;
  int width = 720;
  int height = 440;
  std::vector<Series> series;
  std::vector<std::string> notices;  // printed under the title
  std::optional<std::string> generated_at;  // emitted as a comment
};

inline constexpr int kMarginLeft = 70;
inline constexpr int kMarginRight = 70;
inline constexpr int kMarginTop = 50;
inline constexpr int kMarginBottom = 60;

std::string render_svg(const Chart& chart);

}  // namespace stocap
