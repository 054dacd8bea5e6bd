#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "stocap/capacity_models.hpp"

namespace stocap {

// Recorded in every artifact that depends on generated numbers.
inline constexpr std::string_view kPrngId = "mt19937_64/top53";

// Uniform doubles on [0, 1) from the top 53 bits of mt19937_64, identical
// on every conforming platform (unlike std::uniform_real_distribution).
class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed) : engine_(seed) {}
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

struct GeneratorConfig {
  std::uint64_t seed = 0;
  double target_split = 0.5;

  void validate() const;
};

struct SplitCount {
  std::uint64_t trials = 1;
  double probability = 0.0;
};

// n = max(1, ceil(expected / target_split)), p = expected / n.
SplitCount split_count(double expected, double target_split = 0.5);

// Binomial draw per level: n Bernoulli(p) trials, success iff U < p.
std::vector<std::uint64_t> generate_counts(const BreakdownProfile& profile,
                                           const GeneratorConfig& config);

struct PseudoEmpirical {
  BreakdownProfile profile;  // theoretical expected counts
  std::vector<std::uint64_t> counts;
  CfbCurve curve;
  std::uint64_t total = 0;
};

PseudoEmpirical generate_pseudo_empirical(const IntensityHistogram& hist,
                                          const WeibullParams& true_params,
                                          const IntensityBounds& bounds,
                                          const GeneratorConfig& config);

// Every count times factor, rounded half up; zero bins are dropped.
IntensityHistogram scale_demand(const IntensityHistogram& hist, double factor);

// Triangular demand profile on [0, peak * (1 + spread)] with its mode at
// peak, discretized to integer levels and apportioned by largest remainder so
// the total is exact. The seed only orders exact remainder ties.
IntensityHistogram synth_demand_profile(std::uint64_t total_records, double peak, double spread,
                                        std::uint64_t seed = 0);

struct CalibratedProfile {
  IntensityHistogram histogram;
  double peak = 0.0;
  double expected_breakdowns = 0.0;
};

// Bisection on the peak so that the expected breakdown total under params
// matches the target.
CalibratedProfile calibrate_demand_profile(std::uint64_t total_records, double spread,
                                           const WeibullParams& params,
                                           double expected_breakdowns, std::uint64_t seed = 0);

// Expected breakdowns over every level of the histogram.
double expected_breakdowns(const IntensityHistogram& hist, const CapacityCdf& cdf);

}  // namespace stocap
