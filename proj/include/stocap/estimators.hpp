#pragma once

#include <span>
#include <vector>

#include "stocap/capacity_models.hpp"
#include "stocap/nelder_mead.hpp"

namespace stocap {

// One intensity level of product-limit input. Counts are real so that
// expected (fractional) breakdown counts can be fed in directly.
struct PlmRecord {
  int level = 0;
  double censored = 0.0;
  double failures = 0.0;
};

struct FailureCount {
  int level = 0;
  double count = 0.0;
};

// Product-limit (Kaplan-Meier) estimate over intensity. levels holds the
// failure levels I_j; survival[j] is the value of S just above I_j.
struct PlmCurve {
  std::vector<int> levels;
  std::vector<double> at_risk;   // n_j: all records with intensity >= I_j
  std::vector<double> failures;  // d_j
  std::vector<double> survival;
  std::vector<double> cdf;       // 1 - survival

  // S(I) = prod over I_j < I of (1 - d_j / n_j).
  double survival_at(double intensity) const;
  double cdf_at(double intensity) const { return 1.0 - survival_at(intensity); }
  std::vector<double> cdf_on(const IntensityBounds& bounds) const;
};

PlmCurve plm_estimate(std::span<const PlmRecord> records);

// Integer-record form: censored records from a histogram plus failure counts.
PlmCurve plm_estimate(std::span<const FailureCount> failures, const IntensityHistogram& censored);

CapacityCdf plm_capacity(PlmCurve curve);

// floor(0.75 * lowest breakdown flow), ceil(1.10 * highest recorded intensity).
IntensityBounds default_bounds(const IntensityHistogram& hist,
                               std::span<const BreakdownObservation> breakdowns);

struct FitOptions {
  int starts_per_axis = 5;  // starts_per_axis^2 simplex starts
  NelderMeadOptions simplex{};
};

struct FitResult {
  WeibullParams params{1.0, 1.0};
  double sse = 0.0;
  IntensityBounds bounds;
  CfbCurve predicted;
  int iterations = 0;   // of the winning start
  int evaluations = 0;  // over all starts
  bool converged = false;
};

// Least-squares fit of the Weibull-implied cumulative breakdown curve to
// target, over every integer level of bounds. Nelder-Mead in (ln scale,
// ln shape) from a grid of starts; ties go to the smaller scale, then shape.
FitResult fit_cfb(const IntensityHistogram& hist, const CfbCurve& target,
                  const IntensityBounds& bounds, const FitOptions& options = {});

// Expected cumulative breakdowns for a capacity CDF on a histogram.
CfbCurve predict_cfb(const IntensityHistogram& hist, const CapacityCdf& cdf,
                     const IntensityBounds& bounds);

}  // namespace stocap
