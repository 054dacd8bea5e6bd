#include "stocap/capacity_models.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

namespace stocap {

WeibullParams::WeibullParams(double scale, double shape) : scale_(scale), shape_(shape) {
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw std::invalid_argument(fmt::format("Weibull scale must be positive, got {}", scale));
  if (!(shape > 0.0) || !std::isfinite(shape))
    throw std::invalid_argument(fmt::format("Weibull shape must be positive, got {}", shape));
}

double weibull_cdf(const WeibullParams& params, double intensity) {
  if (intensity < 0.0 || std::isnan(intensity))
    throw std::domain_error(fmt::format("weibull_cdf: negative intensity {}", intensity));
  return -std::expm1(-std::pow(intensity / params.scale(), params.shape()));
}

double weibull_quantile(const WeibullParams& params, double probability) {
  if (!(probability > 0.0 && probability < 1.0))
    throw std::domain_error(fmt::format("weibull_quantile: p must lie in (0,1), got {}", probability));
  return params.scale() * std::pow(-std::log1p(-probability), 1.0 / params.shape());
}

CapacityCdf weibull_capacity(const WeibullParams& params) {
  return [params](double intensity) { return weibull_cdf(params, intensity); };
}

void IntensityBounds::validate() const {
  if (lower < 0 || upper <= lower)
    throw std::invalid_argument(
        fmt::format("invalid intensity bounds [{}, {}]", lower, upper));
}

std::vector<int> IntensityBounds::levels() const {
  std::vector<int> out(size());
  std::iota(out.begin(), out.end(), lower);
  return out;
}

std::vector<double> records_on_grid(const IntensityHistogram& hist, const IntensityBounds& bounds) {
  bounds.validate();
  std::vector<double> r(bounds.size(), 0.0);
  std::uint64_t outside = 0;
  for (const auto& [level, n] : hist.counts) {
    if (level < bounds.lower || level > bounds.upper) {
      outside += n;
      continue;
    }
    r[static_cast<std::size_t>(level - bounds.lower)] = static_cast<double>(n);
  }
  if (outside > 0)
    spdlog::debug("{} records outside [{}, {}] ignored", outside, bounds.lower, bounds.upper);
  return r;
}

double BreakdownProfile::total() const {
  return std::accumulate(expected.begin(), expected.end(), 0.0);
}

BreakdownProfile breakdown_profile(const IntensityHistogram& hist, const CapacityCdf& cdf,
                                   const IntensityBounds& bounds) {
  BreakdownProfile p{bounds, records_on_grid(hist, bounds)};
  if (hist.empty()) spdlog::warn("breakdown_profile: empty histogram, profile is all zero");
  for (std::size_t j = 0; j < p.expected.size(); ++j) {
    if (p.expected[j] == 0.0) continue;
    p.expected[j] *= cdf(static_cast<double>(bounds.lower) + static_cast<double>(j));
  }
  return p;
}

CfbCurve cumulate(const IntensityBounds& bounds, std::span<const double> counts) {
  if (counts.size() != bounds.size())
    throw std::invalid_argument("cumulate: count vector does not match the bounds grid");
  CfbCurve c{bounds.levels(), std::vector<double>(counts.size())};
  double running = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    running += counts[i];
    c.values[i] = running;
  }
  return c;
}

CfbCurve cumulative_frequency(const BreakdownProfile& profile) {
  return cumulate(profile.bounds, profile.expected);
}

CfbCurve empirical_cfb(std::span<const BreakdownObservation> breakdowns,
                       const IntensityBounds& bounds) {
  bounds.validate();
  std::vector<double> counts(bounds.size(), 0.0);
  std::size_t clipped = 0;
  for (const auto& b : breakdowns) {
    int level = b.breakdown_flow;
    if (level < bounds.lower || level > bounds.upper) {
      ++clipped;
      level = level < bounds.lower ? bounds.lower : bounds.upper;
    }
    counts[static_cast<std::size_t>(level - bounds.lower)] += 1.0;
  }
  if (clipped > 0)
    spdlog::warn("empirical_cfb: {} breakdown flows outside [{}, {}] counted at the bound",
                 clipped, bounds.lower, bounds.upper);
  return cumulate(bounds, counts);
}

}  // namespace stocap
