#pragma once

#include <functional>
#include <span>
#include <vector>

#include "stocap/histogram.hpp"
#include "stocap/traffic.hpp"

namespace stocap {

// Weibull capacity distribution W(scale, shape); scale in PCE per 3 min.
class WeibullParams {
 public:
  WeibullParams(double scale, double shape);

  double scale() const { return scale_; }
  double shape() const { return shape_; }

  bool operator==(const WeibullParams&) const = default;

 private:
  double scale_;
  double shape_;
};

// F(I) = 1 - exp(-(I / scale)^shape). Throws on negative intensity.
double weibull_cdf(const WeibullParams& params, double intensity);

// Inverse of weibull_cdf on (0, 1).
double weibull_quantile(const WeibullParams& params, double probability);

// Capacity CDF contract: probability that a record at the given intensity
// breaks down. Weibull is the only shipped model.
using CapacityCdf = std::function<double(double)>;

CapacityCdf weibull_capacity(const WeibullParams& params);

// Inclusive integer intensity range [lower, upper] on which curves live.
struct IntensityBounds {
  int lower = 0;
  int upper = 0;

  void validate() const;
  std::size_t size() const { return static_cast<std::size_t>(upper - lower + 1); }
  std::vector<int> levels() const;

  bool operator==(const IntensityBounds&) const = default;
};

// Record counts r_I on every level of the bounds grid; bins outside are dropped.
std::vector<double> records_on_grid(const IntensityHistogram& hist, const IntensityBounds& bounds);

// Expected breakdown counts b_I = r_I * F(I) on the full grid.
struct BreakdownProfile {
  IntensityBounds bounds;
  std::vector<double> expected;

  std::vector<int> levels() const { return bounds.levels(); }
  double total() const;
};

BreakdownProfile breakdown_profile(const IntensityHistogram& hist, const CapacityCdf& cdf,
                                   const IntensityBounds& bounds);

// Cumulative frequency of breakdowns: values[i] = sum of counts at levels <= levels[i].
struct CfbCurve {
  std::vector<int> levels;
  std::vector<double> values;

  double final_value() const { return values.empty() ? 0.0 : values.back(); }
  bool operator==(const CfbCurve&) const = default;
};

CfbCurve cumulative_frequency(const BreakdownProfile& profile);

// Prefix sums of arbitrary per-level counts on the grid.
CfbCurve cumulate(const IntensityBounds& bounds, std::span<const double> counts);

// Step curve of observed breakdown flows; flows outside the bounds are
// counted at the nearer end.
CfbCurve empirical_cfb(std::span<const BreakdownObservation> breakdowns,
                       const IntensityBounds& bounds);

}  // namespace stocap
