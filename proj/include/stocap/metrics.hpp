#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "stocap/capacity_models.hpp"

namespace stocap {

struct CurveErrors {
  double sse = 0.0;
  double rsse = 0.0;
  double mse = 0.0;
  double rmse = 0.0;
};

CurveErrors curve_errors(std::span<const double> estimate, std::span<const double> reference);
CurveErrors curve_errors(const CfbCurve& estimate, const CfbCurve& reference);

// |estimate - reference| / reference per level. Levels with a zero reference
// are excluded (included[i] == false) rather than clamped.
struct RelativeErrors {
  std::vector<double> values;
  std::vector<bool> included;
  std::size_t excluded = 0;
};

RelativeErrors relative_error_curve(std::span<const double> estimate,
                                    std::span<const double> reference);

// Mean over included levels.
double are(const RelativeErrors& re);
// Weighted mean over included levels, weights usually the expected counts.
double awre(const RelativeErrors& re, std::span<const double> weights);

enum class ReferenceKind { empirical, theoretical };

struct ErrorReport {
  double sse = 0.0;
  double rsse = 0.0;
  double mse = 0.0;
  double rmse = 0.0;
  double are_cf = 0.0;
  double awre_cf = 0.0;
  double are_cdf = 0.0;
  double awre_cdf = 0.0;
  ReferenceKind reference_kind = ReferenceKind::theoretical;
};

// Absolute errors of the cumulative curves plus ARE/AWRE of the curves and of
// the CDFs. All inputs share the bounds grid; weights are the expected
// per-level breakdown counts of the reference.
ErrorReport error_report(const CfbCurve& estimate_cfb, std::span<const double> estimate_cdf,
                         const CfbCurve& reference_cfb, std::span<const double> reference_cdf,
                         std::span<const double> weights,
                         ReferenceKind kind = ReferenceKind::theoretical);

// Column order: sse, rsse, mse, rmse, are_cf, awre_cf, are_cdf, awre_cdf.
std::string error_report_csv_header();
std::string error_report_csv_row(const ErrorReport& report);

std::string to_string(ReferenceKind kind);

}  // namespace stocap
