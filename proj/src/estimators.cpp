#include "stocap/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include <fmt/format.h>

namespace stocap {

double PlmCurve::survival_at(double intensity) const {
  auto it = std::lower_bound(levels.begin(), levels.end(), intensity,
                             [](int level, double x) { return static_cast<double>(level) < x; });
  if (it == levels.begin()) return 1.0;
  return survival[static_cast<std::size_t>(it - levels.begin()) - 1];
}

std::vector<double> PlmCurve::cdf_on(const IntensityBounds& bounds) const {
  std::vector<double> out;
  out.reserve(bounds.size());
  for (int level = bounds.lower; level <= bounds.upper; ++level) out.push_back(cdf_at(level));
  return out;
}

PlmCurve plm_estimate(std::span<const PlmRecord> records) {
  std::map<int, PlmRecord> by_level;
  for (const auto& r : records) {
    if (r.censored < 0.0 || r.failures < 0.0 || !std::isfinite(r.censored) ||
        !std::isfinite(r.failures))
      throw std::invalid_argument(
          fmt::format("plm_estimate: negative or non-finite count at level {}", r.level));
    auto& slot = by_level[r.level];
    slot.level = r.level;
    slot.censored += r.censored;
    slot.failures += r.failures;
  }

  PlmCurve c;
  double at_risk = 0.0;
  for (const auto& [level, r] : by_level) at_risk += r.censored + r.failures;

  double s = 1.0;
  for (const auto& [level, r] : by_level) {
    if (r.failures > 0.0) {
      if (at_risk <= 0.0)
        throw std::domain_error(fmt::format("plm_estimate: nobody at risk at level {}", level));
      if (r.failures > at_risk * (1.0 + 1e-12))
        throw std::domain_error(fmt::format(
            "plm_estimate: {} failures exceed {} at risk at level {}", r.failures, at_risk, level));
      s *= std::max(0.0, 1.0 - r.failures / at_risk);
      c.levels.push_back(level);
      c.at_risk.push_back(at_risk);
      c.failures.push_back(r.failures);
      c.survival.push_back(s);
      c.cdf.push_back(1.0 - s);
    }
    at_risk -= r.censored + r.failures;
  }
  return c;
}

PlmCurve plm_estimate(std::span<const FailureCount> failures, const IntensityHistogram& censored) {
  std::vector<PlmRecord> records;
  records.reserve(censored.counts.size() + failures.size());
  for (const auto& [level, n] : censored.counts)
    records.push_back({level, static_cast<double>(n), 0.0});
  for (const auto& f : failures) records.push_back({f.level, 0.0, f.count});
  return plm_estimate(records);
}

CapacityCdf plm_capacity(PlmCurve curve) {
  return [c = std::move(curve)](double intensity) { return c.cdf_at(intensity); };
}

IntensityBounds default_bounds(const IntensityHistogram& hist,
                               std::span<const BreakdownObservation> breakdowns) {
  if (breakdowns.empty())
    throw std::invalid_argument(
        "default_bounds: no breakdowns recorded; supply explicit --imin/--imax bounds");
  int lowest_flow = breakdowns.front().breakdown_flow;
  int highest = hist.empty() ? 0 : hist.max_level();
  for (const auto& b : breakdowns) {
    lowest_flow = std::min(lowest_flow, b.breakdown_flow);
    highest = std::max(highest, b.breakdown_flow);
  }
  IntensityBounds bounds{(3 * lowest_flow) / 4, (11 * highest + 9) / 10};
  bounds.validate();
  return bounds;
}

CfbCurve predict_cfb(const IntensityHistogram& hist, const CapacityCdf& cdf,
                     const IntensityBounds& bounds) {
  return cumulative_frequency(breakdown_profile(hist, cdf, bounds));
}

namespace {

// SSE between target and the Weibull-implied curve; the hot path of the fit.
class CfbObjective {
 public:
  CfbObjective(std::vector<double> records, const IntensityBounds& bounds,
               std::vector<double> target)
      : records_(std::move(records)), target_(std::move(target)) {
    levels_.reserve(records_.size());
    for (int l = bounds.lower; l <= bounds.upper; ++l) levels_.push_back(l);
  }

  double operator()(double scale, double shape) const {
    double cumulative = 0.0;
    double sse = 0.0;
    for (std::size_t i = 0; i < levels_.size(); ++i) {
      if (records_[i] > 0.0)
        cumulative += records_[i] * -std::expm1(-std::pow(levels_[i] / scale, shape));
      const double e = target_[i] - cumulative;
      sse += e * e;
    }
    return sse;
  }

 private:
  std::vector<double> records_;
  std::vector<double> target_;
  std::vector<double> levels_;
};

}  // namespace

FitResult fit_cfb(const IntensityHistogram& hist, const CfbCurve& target,
                  const IntensityBounds& bounds, const FitOptions& options) {
  bounds.validate();
  if (target.levels != bounds.levels() || target.values.size() != target.levels.size())
    throw std::invalid_argument("fit_cfb: target curve is not defined on the bounds grid");
  if (std::all_of(target.values.begin(), target.values.end(), [](double v) { return v == 0.0; }))
    throw std::domain_error("fit_cfb: target curve has no breakdowns to fit");
  auto records = records_on_grid(hist, bounds);
  if (std::all_of(records.begin(), records.end(), [](double v) { return v == 0.0; }))
    throw std::domain_error("fit_cfb: no intensity records inside the bounds");
  if (options.starts_per_axis < 1) throw std::invalid_argument("fit_cfb: need at least one start");

  const CfbObjective objective(records, bounds, target.values);
  const Objective in_logs = [&objective](std::span<const double> x) {
    return objective(std::exp(x[0]), std::exp(x[1]));
  };

  const int k = options.starts_per_axis;
  auto spread = [k](double lo, double hi, int i) {
    return k == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (k - 1);
  };

  std::optional<NelderMeadResult> best;
  int evaluations = 0;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const double scale0 = spread(0.8, 1.2, i) * bounds.upper;
      const double shape0 = spread(3.0, 11.0, j);
      auto run = nelder_mead(in_logs, {std::log(scale0), std::log(shape0)}, options.simplex);
      evaluations += run.evaluations;
      const bool better =
          !best || run.value < best->value ||
          (run.value == best->value &&
           (run.x[0] < best->x[0] || (run.x[0] == best->x[0] && run.x[1] < best->x[1])));
      if (better) best = std::move(run);
    }
  }

  WeibullParams params(std::exp(best->x[0]), std::exp(best->x[1]));
  FitResult result{params,
                   objective(params.scale(), params.shape()),
                   bounds,
                   predict_cfb(hist, weibull_capacity(params), bounds),
                   best->iterations,
                   evaluations,
                   best->converged};
  return result;
}

}  // namespace stocap
