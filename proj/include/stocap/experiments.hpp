#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stocap/estimators.hpp"
#include "stocap/metrics.hpp"
#include "stocap/regression.hpp"
#include "stocap/synthetic.hpp"

namespace stocap {

enum class NoiseMode {
  bernoulli,  // binomial draws per level
  rounded,    // empirical curve = theoretical curve rounded half up
};

// Stand-in for the unavailable motorway demand profile: a triangular profile
// whose peak is calibrated so the expected breakdown total under the
// calibration distribution matches expected_total.
struct SurrogateConfig {
  std::uint64_t records = 6486;
  double spread = 0.5;
  WeibullParams calibration{150.0, 6.5};
  double expected_total = 51.4;
  std::uint64_t seed = 0;
};

CalibratedProfile surrogate_profile(const SurrogateConfig& config = {});

struct ExperimentCase {
  std::string id;
  double scale_factor = 1.0;
  WeibullParams true_params{150.0, 6.5};
  int replicates = 15;
  std::uint64_t base_seed = 1;  // replicate r uses base_seed + r
  NoiseMode noise = NoiseMode::bernoulli;
};

struct ReplicateRecord {
  std::uint64_t seed = 0;
  WeibullParams estimated{1.0, 1.0};
  std::uint64_t realized_queues = 0;
  double rsse_empirical = 0.0;
  double rsse_true = 0.0;
  ErrorReport errors;            // against the theoretical curves
  ErrorReport errors_empirical;  // CF_B errors against the generated curve
  bool converged = true;
};

struct SummaryStats {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation (n - 1)
  double max = 0.0;

  bool operator==(const SummaryStats&) const = default;
};

// Variables summarised per case, in report row order.
inline const std::vector<std::string>& replicate_variable_names() {
  static const std::vector<std::string> names{
      "realized_queues", "scale", "shape", "rsse_empirical", "rsse_true",
      "are_cf",          "awre_cf", "are_cdf", "awre_cdf"};
  return names;
}
std::vector<double> replicate_variables(const ReplicateRecord& record);
std::vector<SummaryStats> summarize(const std::vector<ReplicateRecord>& records);

struct CaseSummary {
  ExperimentCase config;
  IntensityBounds bounds;
  std::uint64_t tf_records = 0;
  double theoretical_queues = 0.0;
  std::vector<ReplicateRecord> replicates;
  std::vector<std::uint64_t> failed_seeds;  // fits that could not run (no breakdowns)
  std::vector<SummaryStats> stats;          // parallel to replicate_variable_names()

  const SummaryStats& stat(const std::string& variable) const;
};

CaseSummary run_case(const ExperimentCase& experiment, const IntensityHistogram& base_hist,
                     const IntensityBounds& bounds, const FitOptions& fit = {});

// Bounds for synthetic studies: I_min = floor(0.75 * level at which the
// theoretical curve first reaches one breakdown), I_max = ceil(1.1 * top level).
IntensityBounds experiment_bounds(const IntensityHistogram& hist, const WeibullParams& params);

struct CapacitySetting {
  std::string label;  // breakdown-probability reduction, e.g. "1", "2", "8"
  WeibullParams params;
};

struct SweepCase {
  CapacitySetting setting;
  double target_total = 0.0;
};

struct SweepConfig {
  std::vector<SweepCase> cases;
  int replicates = 15;
  std::uint64_t seed = 1;
  double total_tolerance = 0.05;
  double max_scale_factor = 1000.0;
  FitOptions fit{};
};

// The three capacity settings with totals {25, 50, 100, 200}.
SweepConfig table5_sweep();
// table5_sweep plus setting "1" at {12, 75, 150, 250} and "2" at 150.
SweepConfig regression_sweep();

struct AwreRow {
  std::uint64_t tf_records = 0;
  std::uint64_t bd_records = 0;
  double awre_cf = 0.0;
  double awre_cdf = 0.0;
  std::string case_id;
  std::uint64_t seed = 0;
};

struct SweepResult {
  std::vector<CaseSummary> cases;
  std::vector<AwreRow> rows;
  std::vector<std::string> diagnostics;
};

// Scale factor giving an expected total within tolerance of the target, or
// nullopt when it would exceed the cap.
std::optional<double> find_scale_factor(const IntensityHistogram& hist, const WeibullParams& params,
                                        const IntensityBounds& bounds, double target_total,
                                        double tolerance, double max_factor);

SweepResult sample_size_sweep(const IntensityHistogram& base_hist, const IntensityBounds& bounds,
                              const SweepConfig& config);

struct CensoringPoint {
  double target_rate = 0.0;
  double achieved_rate = 0.0;
  WeibullParams true_params{1.0, 1.0};
  ErrorReport plm;
  ErrorReport fit;
  WeibullParams fitted{1.0, 1.0};
};

struct CensoringResult {
  std::vector<CensoringPoint> points;
  std::vector<std::string> diagnostics;
};

// PLM on the theoretical (fractional) breakdown counts at each censoring
// rate, with the scale solved by bisection at fixed shape. The fit is run on
// the same noise-free curve for comparison.
CensoringResult censoring_sweep(const IntensityHistogram& hist, const std::vector<double>& rates,
                                const IntensityBounds& bounds, double shape = 6.5,
                                const FitOptions& fit = {});

struct MethodComparison {
  std::uint64_t seed = 0;
  std::uint64_t realized_queues = 0;
  FitResult fit;
  PlmCurve plm;
  ErrorReport fit_errors;
  ErrorReport plm_errors;
  ErrorReport ratio;  // plm / fit, per metric
};

MethodComparison compare_methods(const IntensityHistogram& hist, const WeibullParams& true_params,
                                 const IntensityBounds& bounds, std::uint64_t seed,
                                 const FitOptions& fit = {});

struct CandidateModel {
  std::vector<std::string> variables;
  RegressionResult result;
};

struct RegressionReport {
  std::string response;
  std::vector<CandidateModel> candidates;
  std::vector<std::string> skipped;  // collinear candidates
  std::optional<std::size_t> best;   // highest R^2 with every variable significant
  double alpha = 0.1;
};

// Every non-empty subset of {TF, BD, BD/TF, ln TF, ln BD, ln BD/TF}.
RegressionReport awre_regression(const std::vector<AwreRow>& rows, bool use_cdf = true,
                                 double alpha = 0.1);

// Fits one named candidate; used for the best-model form checks.
RegressionResult fit_candidate(const std::vector<AwreRow>& rows,
                               const std::vector<std::string>& variables, bool use_cdf = true);

}  // namespace stocap
