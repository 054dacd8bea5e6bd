#pragma once

#include <cmath>
#include <vector>

#include "stocap/capacity_models.hpp"
#include "stocap/timestamp.hpp"
#include "stocap/traffic.hpp"

namespace test {

inline stocap::Minute minute_at(int offset) {
  return *stocap::parse_minute("2016-09-14T06:00:00") + std::chrono::minutes{offset};
}

// One width-1 interval per speed; a NaN speed makes an empty minute.
inline std::vector<stocap::FlowInterval> make_minutes(const std::vector<double>& speeds,
                                                      const std::vector<int>& intensities) {
  std::vector<stocap::FlowInterval> out;
  for (std::size_t i = 0; i < speeds.size(); ++i) {
    stocap::FlowInterval m;
    m.start = minute_at(static_cast<int>(i));
    m.intensity = intensities.at(i);
    m.vehicle_count = std::isnan(speeds[i]) ? 0 : intensities.at(i);
    if (!std::isnan(speeds[i])) m.mean_speed = speeds[i];
    out.push_back(m);
  }
  return out;
}

inline std::vector<stocap::FlowInterval> make_minutes(const std::vector<double>& speeds,
                                                      int intensity) {
  return make_minutes(speeds, std::vector<int>(speeds.size(), intensity));
}

// Straightforward prefix sum of r_I F(I), written without the library.
inline std::vector<double> naive_cfb(const stocap::IntensityHistogram& h, double scale,
                                     double shape, int lower, int upper) {
  std::vector<double> out;
  double acc = 0.0;
  for (int level = lower; level <= upper; ++level) {
    const double f = 1.0 - std::exp(-std::pow(level / scale, shape));
    acc += static_cast<double>(h.count(level)) * f;
    out.push_back(acc);
  }
  return out;
}

}  // namespace test
