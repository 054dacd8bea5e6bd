#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>

namespace stocap {

// Record counts r_I per intensity level I (PCE per 3 min). Levels are
// multiples of bin_width; each record lands in floor(I / bin_width) * bin_width.
struct IntensityHistogram {
  int bin_width = 1;
  std::map<int, std::uint64_t> counts;

  void add(int intensity, std::uint64_t n = 1) {
    if (intensity < 0) throw std::invalid_argument("histogram: negative intensity");
    if (n == 0) return;
    counts[(intensity / bin_width) * bin_width] += n;
  }

  std::uint64_t count(int level) const {
    auto it = counts.find(level);
    return it == counts.end() ? 0 : it->second;
  }

  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (const auto& [level, n] : counts) t += n;
    return t;
  }

  bool empty() const { return counts.empty(); }
  int min_level() const { return counts.begin()->first; }
  int max_level() const { return counts.rbegin()->first; }

  bool operator==(const IntensityHistogram&) const = default;
};

IntensityHistogram build_histogram(std::span<const int> intensities, int bin_width = 1);

}  // namespace stocap
