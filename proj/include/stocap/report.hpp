#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stocap/estimators.hpp"
#include "stocap/serialization.hpp"
#include "stocap/svg.hpp"

namespace stocap {

enum class EstimateMethod { cfb, plm };

std::string to_string(EstimateMethod m);
EstimateMethod parse_method(const std::string& name);

// Everything report needs from one estimation run.
struct EstimateBundle {
  EstimateMethod method = EstimateMethod::cfb;
  IntensityBounds bounds;
  std::optional<WeibullParams> params;  // cfb
  std::optional<PlmCurve> plm;          // plm
  CfbCurve predicted;
  std::optional<CfbCurve> empirical;
  std::vector<double> cdf;  // on the bounds grid
  double sse = 0.0;         // predicted vs empirical
  bool converged = true;
  std::uint64_t breakdowns = 0;
  std::uint64_t censored_records = 0;
};

void to_json(Json& j, const EstimateBundle& b);
void from_json(const Json& j, EstimateBundle& b);

// Bounds default to default_bounds() of the detection; either may be overridden.
EstimateBundle estimate_from_detection(const DetectionResult& detection, EstimateMethod method,
                                       std::optional<int> imin, std::optional<int> imax,
                                       const FitOptions& fit = {});

// Probability levels of the quantile table, as fractions.
inline const std::vector<double>& default_quantile_levels() {
  static const std::vector<double> levels{0.001, 0.005, 0.01, 0.02, 0.05, 0.10, 0.15};
  return levels;
}

// Weibull quantile, or for PLM the first failure level whose CDF reaches p
// (NaN when it never does).
double bundle_quantile(const EstimateBundle& b, double p);

struct QuantileRow {
  double probability = 0.0;
  double a = 0.0;
  std::optional<double> b;
  std::optional<double> abs_diff;  // b - a
  std::optional<double> rel_diff;  // (b - a) / a, in percent
};

struct QuantileTable {
  std::vector<QuantileRow> rows;
  std::optional<double> mean_abs_diff;
};

QuantileTable quantile_table(const EstimateBundle& a, const EstimateBundle* b,
                             const std::vector<double>& levels = default_quantile_levels());
std::string quantile_csv(const QuantileTable& table);

// Relative difference of B against A at p = k / 1000, k = 1..999.
std::string relative_difference_csv(const EstimateBundle& a, const EstimateBundle& b);

inline constexpr const char* kPlmBanner =
    "product-limit estimate: biased under heavy censoring, shown for comparison only";

Chart overlay_chart(const EstimateBundle& a, const EstimateBundle* b,
                    std::optional<std::string> generated_at);

struct ReportFiles {
  std::vector<std::string> written;  // relative to the output directory
};

// Writes overlay.svg, quantiles.csv and, when b is present,
// relative_difference.csv into out_dir.
ReportFiles write_report(const EstimateBundle& a, const EstimateBundle* b,
                         const std::filesystem::path& out_dir,
                         std::optional<std::string> generated_at,
                         const std::vector<double>& levels = default_quantile_levels());

}  // namespace stocap
