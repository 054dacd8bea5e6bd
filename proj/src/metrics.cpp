#include "stocap/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace stocap {

CurveErrors curve_errors(std::span<const double> estimate, std::span<const double> reference) {
  if (estimate.size() != reference.size() || estimate.empty())
    throw std::invalid_argument("curve_errors: curves must share a non-empty grid");
  CurveErrors e;
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    const double d = estimate[i] - reference[i];
    e.sse += d * d;
  }
  e.rsse = std::sqrt(e.sse);
  e.mse = e.sse / static_cast<double>(estimate.size());
  e.rmse = std::sqrt(e.mse);
  return e;
}

CurveErrors curve_errors(const CfbCurve& estimate, const CfbCurve& reference) {
  if (estimate.levels != reference.levels)
    throw std::invalid_argument("curve_errors: curves are on different level grids");
  return curve_errors(estimate.values, reference.values);
}

RelativeErrors relative_error_curve(std::span<const double> estimate,
                                    std::span<const double> reference) {
  if (estimate.size() != reference.size())
    throw std::invalid_argument("relative_error_curve: curves must share a grid");
  RelativeErrors re;
  re.values.assign(estimate.size(), 0.0);
  re.included.assign(estimate.size(), false);
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    if (reference[i] == 0.0) {
      ++re.excluded;
      continue;
    }
    re.values[i] = std::abs((estimate[i] - reference[i]) / reference[i]);
    re.included[i] = true;
  }
  if (re.excluded == estimate.size())
    throw std::domain_error("relative_error_curve: reference is zero everywhere");
  return re;
}

double are(const RelativeErrors& re) {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < re.values.size(); ++i) {
    if (!re.included[i]) continue;
    sum += re.values[i];
    ++n;
  }
  if (n == 0) throw std::domain_error("are: no included levels");
  return sum / static_cast<double>(n);
}

double awre(const RelativeErrors& re, std::span<const double> weights) {
  if (weights.size() != re.values.size())
    throw std::invalid_argument("awre: weight vector does not match the grid");
  double weighted = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < re.values.size(); ++i) {
    if (weights[i] < 0.0) throw std::invalid_argument("awre: negative weight");
    if (!re.included[i]) continue;
    weighted += weights[i] * re.values[i];
    total += weights[i];
  }
  if (!(total > 0.0)) throw std::domain_error("awre: total weight is zero");
  return weighted / total;
}

ErrorReport error_report(const CfbCurve& estimate_cfb, std::span<const double> estimate_cdf,
                         const CfbCurve& reference_cfb, std::span<const double> reference_cdf,
                         std::span<const double> weights, ReferenceKind kind) {
  const auto abs_errors = curve_errors(estimate_cfb, reference_cfb);
  const auto re_cf = relative_error_curve(estimate_cfb.values, reference_cfb.values);
  const auto re_cdf = relative_error_curve(estimate_cdf, reference_cdf);
  return {abs_errors.sse, abs_errors.rsse, abs_errors.mse, abs_errors.rmse,
          are(re_cf),     awre(re_cf, weights), are(re_cdf), awre(re_cdf, weights),
          kind};
}

std::string error_report_csv_header() {
  return "sse_cf,rsse_cf,mse_cf,rmse_cf,are_cf,awre_cf,are_cdf,awre_cdf";
}

std::string error_report_csv_row(const ErrorReport& r) {
  return fmt::format("{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}", r.sse, r.rsse,
                     r.mse, r.rmse, r.are_cf, r.awre_cf, r.are_cdf, r.awre_cdf);
}

std::string to_string(ReferenceKind kind) {
  return kind == ReferenceKind::empirical ? "empirical" : "theoretical";
}

}  // namespace stocap
