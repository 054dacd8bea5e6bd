#include "stocap/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace stocap {

void GeneratorConfig::validate() const {
  if (!(target_split > 0.0 && target_split <= 1.0))
    throw std::invalid_argument(
        fmt::format("target split must lie in (0, 1], got {}", target_split));
}

SplitCount split_count(double expected, double target_split) {
  if (expected < 0.0 || !std::isfinite(expected))
    throw std::invalid_argument(fmt::format("split_count: bad expected count {}", expected));
  const double n = std::max(1.0, std::ceil(expected / target_split));
  return {static_cast<std::uint64_t>(n), expected / n};
}

std::vector<std::uint64_t> generate_counts(const BreakdownProfile& profile,
                                           const GeneratorConfig& config) {
  config.validate();
  UniformSource uniform(config.seed);
  std::vector<std::uint64_t> counts(profile.expected.size(), 0);
  for (std::size_t j = 0; j < counts.size(); ++j) {
    const auto [trials, p] = split_count(profile.expected[j], config.target_split);
    for (std::uint64_t i = 0; i < trials; ++i)
      if (uniform.next() < p) ++counts[j];
  }
  return counts;
}

PseudoEmpirical generate_pseudo_empirical(const IntensityHistogram& hist,
                                          const WeibullParams& true_params,
                                          const IntensityBounds& bounds,
                                          const GeneratorConfig& config) {
  PseudoEmpirical out;
  out.profile = breakdown_profile(hist, weibull_capacity(true_params), bounds);
  out.counts = generate_counts(out.profile, config);
  std::vector<double> as_real(out.counts.begin(), out.counts.end());
  out.curve = cumulate(bounds, as_real);
  out.total = std::accumulate(out.counts.begin(), out.counts.end(), std::uint64_t{0});
  return out;
}

IntensityHistogram scale_demand(const IntensityHistogram& hist, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor))
    throw std::invalid_argument(fmt::format("scale_demand: factor must be positive, got {}", factor));
  IntensityHistogram out;
  out.bin_width = hist.bin_width;
  for (const auto& [level, n] : hist.counts) {
    const auto scaled = static_cast<std::uint64_t>(std::floor(static_cast<double>(n) * factor + 0.5));
    if (scaled > 0) out.counts[level] = scaled;
  }
  return out;
}

IntensityHistogram synth_demand_profile(std::uint64_t total_records, double peak, double spread,
                                        std::uint64_t seed) {
  if (total_records == 0) throw std::invalid_argument("synth_demand_profile: total must be positive");
  if (!(peak > 0.0) || !(spread > 0.0))
    throw std::invalid_argument("synth_demand_profile: peak and spread must be positive");

  const double top = peak * (1.0 + spread);
  auto cdf = [&](double x) {
    x = std::clamp(x, 0.0, top);
    if (x <= peak) return x * x / (top * peak);
    return 1.0 - (top - x) * (top - x) / (top * (top - peak));
  };

  const int levels = static_cast<int>(std::ceil(top)) + 1;
  std::vector<double> quota(static_cast<std::size_t>(levels));
  for (int i = 0; i < levels; ++i)
    quota[static_cast<std::size_t>(i)] =
        (cdf(i + 0.5) - cdf(i - 0.5)) * static_cast<double>(total_records);

  std::vector<std::uint64_t> counts(quota.size());
  std::uint64_t assigned = 0;
  for (std::size_t i = 0; i < quota.size(); ++i) {
    counts[i] = static_cast<std::uint64_t>(std::floor(quota[i]));
    assigned += counts[i];
  }

  std::vector<std::size_t> order(quota.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> tie(quota.size());
  UniformSource uniform(seed);
  for (auto& t : tie) t = uniform.next();
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ra = quota[a] - std::floor(quota[a]);
    const double rb = quota[b] - std::floor(quota[b]);
    if (ra != rb) return ra > rb;
    return tie[a] < tie[b];
  });
  for (std::size_t k = 0; assigned < total_records; ++k, ++assigned) ++counts[order[k % order.size()]];

  IntensityHistogram h;
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (counts[i] > 0) h.counts[static_cast<int>(i)] = counts[i];
  return h;
}

double expected_breakdowns(const IntensityHistogram& hist, const CapacityCdf& cdf) {
  double total = 0.0;
  for (const auto& [level, n] : hist.counts) total += static_cast<double>(n) * cdf(level);
  return total;
}

CalibratedProfile calibrate_demand_profile(std::uint64_t total_records, double spread,
                                           const WeibullParams& params,
                                           double expected_total, std::uint64_t seed) {
  if (!(expected_total > 0.0) || expected_total >= static_cast<double>(total_records))
    throw std::invalid_argument("calibrate_demand_profile: unreachable breakdown total");
  const auto cdf = weibull_capacity(params);
  auto total_at = [&](double peak) {
    return expected_breakdowns(synth_demand_profile(total_records, peak, spread, seed), cdf);
  };

  double lo = 1.0;
  double hi = 2.0 * params.scale();
  while (total_at(hi) < expected_total) {
    hi *= 2.0;
    if (hi > 1e6) throw std::domain_error("calibrate_demand_profile: no peak reaches the target");
  }
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (total_at(mid) < expected_total ? lo : hi) = mid;
  }
  // Take whichever side of the bracket lands closer to the target.
  const double t_lo = total_at(lo), t_hi = total_at(hi);
  const double peak = std::abs(t_lo - expected_total) <= std::abs(t_hi - expected_total) ? lo : hi;
  CalibratedProfile out{synth_demand_profile(total_records, peak, spread, seed), peak, 0.0};
  out.expected_breakdowns = expected_breakdowns(out.histogram, cdf);
  return out;
}

}  // namespace stocap
