#include "stocap/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

namespace stocap {
namespace {

std::vector<double> weibull_on_grid(const WeibullParams& params, const IntensityBounds& bounds) {
  std::vector<double> out;
  out.reserve(bounds.size());
  for (int level = bounds.lower; level <= bounds.upper; ++level)
    out.push_back(weibull_cdf(params, level));
  return out;
}

std::vector<double> rounded_counts(const CfbCurve& theoretical) {
  std::vector<double> counts(theoretical.values.size());
  double previous = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double rounded = std::floor(theoretical.values[i] + 0.5);
    counts[i] = rounded - previous;
    previous = rounded;
  }
  return counts;
}

ErrorReport ratio_of(const ErrorReport& num, const ErrorReport& den) {
  auto q = [](double a, double b) {
    return b == 0.0 ? std::numeric_limits<double>::infinity() : a / b;
  };
  return {q(num.sse, den.sse),       q(num.rsse, den.rsse),       q(num.mse, den.mse),
          q(num.rmse, den.rmse),     q(num.are_cf, den.are_cf),   q(num.awre_cf, den.awre_cf),
          q(num.are_cdf, den.are_cdf), q(num.awre_cdf, den.awre_cdf), num.reference_kind};
}

}  // namespace

CalibratedProfile surrogate_profile(const SurrogateConfig& config) {
  return calibrate_demand_profile(config.records, config.spread, config.calibration,
                                  config.expected_total, config.seed);
}

std::vector<double> replicate_variables(const ReplicateRecord& r) {
  return {static_cast<double>(r.realized_queues),
          r.estimated.scale(),
          r.estimated.shape(),
          r.rsse_empirical,
          r.rsse_true,
          r.errors.are_cf,
          r.errors.awre_cf,
          r.errors.are_cdf,
          r.errors.awre_cdf};
}

std::vector<SummaryStats> summarize(const std::vector<ReplicateRecord>& records) {
  const auto& names = replicate_variable_names();
  std::vector<SummaryStats> stats(names.size());
  if (records.empty()) return stats;
  std::vector<std::vector<double>> columns(names.size());
  for (const auto& r : records) {
    const auto v = replicate_variables(r);
    for (std::size_t k = 0; k < v.size(); ++k) columns[k].push_back(v[k]);
  }
  for (std::size_t k = 0; k < columns.size(); ++k) {
    const auto& c = columns[k];
    const double n = static_cast<double>(c.size());
    const double mean = std::accumulate(c.begin(), c.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : c) ss += (x - mean) * (x - mean);
    stats[k] = {mean, c.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0,
                *std::max_element(c.begin(), c.end())};
  }
  return stats;
}

const SummaryStats& CaseSummary::stat(const std::string& variable) const {
  const auto& names = replicate_variable_names();
  auto it = std::find(names.begin(), names.end(), variable);
  if (it == names.end()) throw std::out_of_range("unknown summary variable " + variable);
  return stats.at(static_cast<std::size_t>(it - names.begin()));
}

CaseSummary run_case(const ExperimentCase& experiment, const IntensityHistogram& base_hist,
                     const IntensityBounds& bounds, const FitOptions& fit) {
  if (experiment.replicates < 1) throw std::invalid_argument("run_case: need at least one replicate");
  bounds.validate();

  CaseSummary summary;
  summary.config = experiment;
  summary.bounds = bounds;
  const IntensityHistogram hist = experiment.scale_factor == 1.0
                                      ? base_hist
                                      : scale_demand(base_hist, experiment.scale_factor);
  summary.tf_records = hist.total();

  const auto truth = breakdown_profile(hist, weibull_capacity(experiment.true_params), bounds);
  const auto true_cfb = cumulative_frequency(truth);
  const auto true_cdf = weibull_on_grid(experiment.true_params, bounds);
  summary.theoretical_queues = truth.total();

  for (int r = 0; r < experiment.replicates; ++r) {
    const std::uint64_t seed = experiment.base_seed + static_cast<std::uint64_t>(r);
    CfbCurve empirical;
    std::uint64_t realized = 0;
    if (experiment.noise == NoiseMode::bernoulli) {
      auto pseudo = generate_pseudo_empirical(hist, experiment.true_params, bounds, {seed, 0.5});
      empirical = std::move(pseudo.curve);
      realized = pseudo.total;
    } else {
      const auto counts = rounded_counts(true_cfb);
      empirical = cumulate(bounds, counts);
      realized = static_cast<std::uint64_t>(empirical.final_value());
    }

    FitResult result;
    try {
      result = fit_cfb(hist, empirical, bounds, fit);
    } catch (const std::domain_error& e) {
      spdlog::warn("case {}: replicate seed {} skipped: {}", experiment.id, seed, e.what());
      summary.failed_seeds.push_back(seed);
      continue;
    }
    if (!result.converged)
      spdlog::warn("case {}: replicate seed {} did not converge", experiment.id, seed);

    ReplicateRecord rec;
    rec.seed = seed;
    rec.estimated = result.params;
    rec.realized_queues = realized;
    rec.rsse_empirical = std::sqrt(result.sse);
    const auto estimated_cdf = weibull_on_grid(result.params, bounds);
    rec.errors = error_report(result.predicted, estimated_cdf, true_cfb, true_cdf, truth.expected,
                              ReferenceKind::theoretical);
    rec.errors_empirical = error_report(result.predicted, estimated_cdf, empirical, true_cdf,
                                        truth.expected, ReferenceKind::empirical);
    rec.rsse_true = rec.errors.rsse;
    rec.converged = result.converged;
    summary.replicates.push_back(rec);
  }
  summary.stats = summarize(summary.replicates);
  return summary;
}

IntensityBounds experiment_bounds(const IntensityHistogram& hist, const WeibullParams& params) {
  if (hist.empty()) throw std::invalid_argument("experiment_bounds: empty histogram");
  const IntensityBounds full{0, hist.max_level()};
  const auto curve = cumulative_frequency(breakdown_profile(hist, weibull_capacity(params), full));
  auto it = std::find_if(curve.values.begin(), curve.values.end(), [](double v) { return v >= 1.0; });
  if (it == curve.values.end())
    throw std::domain_error("experiment_bounds: fewer than one expected breakdown");
  const int first = curve.levels[static_cast<std::size_t>(it - curve.values.begin())];
  IntensityBounds b{(3 * first) / 4, (11 * hist.max_level() + 9) / 10};
  b.validate();
  return b;
}

SweepConfig table5_sweep() {
  SweepConfig config;
  const CapacitySetting settings[] = {{"1", WeibullParams(150.0, 6.5)},
                                      {"2", WeibullParams(160.0, 7.0)},
                                      {"8", WeibullParams(183.0, 7.5)}};
  for (double total : {25.0, 50.0, 100.0, 200.0})
    for (const auto& s : settings) config.cases.push_back({s, total});
  return config;
}

SweepConfig regression_sweep() {
  SweepConfig config = table5_sweep();
  const CapacitySetting base{"1", WeibullParams(150.0, 6.5)};
  for (double total : {12.0, 75.0, 150.0, 250.0}) config.cases.push_back({base, total});
  config.cases.push_back({{"2", WeibullParams(160.0, 7.0)}, 150.0});
  return config;
}

std::optional<double> find_scale_factor(const IntensityHistogram& hist, const WeibullParams& params,
                                        const IntensityBounds& bounds, double target_total,
                                        double tolerance, double max_factor) {
  const auto cdf = weibull_capacity(params);
  auto total_at = [&](double f) { return breakdown_profile(scale_demand(hist, f), cdf, bounds).total(); };
  auto close = [&](double t) { return std::abs(t - target_total) <= tolerance * target_total; };

  const double base = breakdown_profile(hist, cdf, bounds).total();
  if (!(base > 0.0)) return std::nullopt;
  double guess = target_total / base;
  if (guess > max_factor) return std::nullopt;
  if (close(total_at(guess))) return guess;

  double lo = 0.0, hi = std::min(max_factor, 2.0 * guess);
  if (total_at(hi) < target_total) return std::nullopt;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double t = total_at(mid);
    if (close(t)) return mid;
    (t < target_total ? lo : hi) = mid;
  }
  return std::nullopt;
}

SweepResult sample_size_sweep(const IntensityHistogram& base_hist, const IntensityBounds& bounds,
                              const SweepConfig& config) {
  SweepResult out;
  for (std::size_t i = 0; i < config.cases.size(); ++i) {
    const auto& c = config.cases[i];
    const auto id = fmt::format("{}_{}", static_cast<long long>(std::llround(c.target_total)),
                                c.setting.label);
    auto factor = find_scale_factor(base_hist, c.setting.params, bounds, c.target_total,
                                    config.total_tolerance, config.max_scale_factor);
    if (!factor) {
      out.diagnostics.push_back(
          fmt::format("case {} skipped: target total {} unreachable", id, c.target_total));
      spdlog::warn("{}", out.diagnostics.back());
      continue;
    }
    ExperimentCase e{id, *factor, c.setting.params, config.replicates,
                     config.seed + 1000 * static_cast<std::uint64_t>(i), NoiseMode::bernoulli};
    auto summary = run_case(e, base_hist, bounds, config.fit);
    for (const auto& r : summary.replicates)
      out.rows.push_back({summary.tf_records, r.realized_queues, r.errors.awre_cf,
                          r.errors.awre_cdf, id, r.seed});
    out.cases.push_back(std::move(summary));
  }
  return out;
}

CensoringResult censoring_sweep(const IntensityHistogram& hist, const std::vector<double>& rates,
                                const IntensityBounds& bounds, double shape,
                                const FitOptions& fit) {
  bounds.validate();
  const auto records = records_on_grid(hist, bounds);
  const double total = std::accumulate(records.begin(), records.end(), 0.0);
  if (!(total > 0.0)) throw std::invalid_argument("censoring_sweep: no records inside the bounds");

  CensoringResult out;
  for (double rate : rates) {
    if (!(rate > 0.0 && rate < 1.0))
      throw std::invalid_argument(fmt::format("censoring_sweep: rate {} outside (0,1)", rate));

    auto uncensored = [&](double log_scale) {
      return breakdown_profile(hist, weibull_capacity(WeibullParams(std::exp(log_scale), shape)),
                               bounds)
                 .total() /
             total;
    };
    const double wanted = 1.0 - rate;
    double lo = std::log(1e-3), hi = std::log(1e6);
    if (!(uncensored(lo) >= wanted && uncensored(hi) <= wanted)) {
      out.diagnostics.push_back(fmt::format("censoring rate {} unreachable at shape {}", rate, shape));
      spdlog::warn("{}", out.diagnostics.back());
      continue;
    }
    for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
      const double mid = 0.5 * (lo + hi);
      (uncensored(mid) > wanted ? lo : hi) = mid;
    }

    CensoringPoint p;
    p.target_rate = rate;
    p.true_params = WeibullParams(std::exp(0.5 * (lo + hi)), shape);
    const auto truth = breakdown_profile(hist, weibull_capacity(p.true_params), bounds);
    p.achieved_rate = 1.0 - truth.total() / total;
    const auto true_cfb = cumulative_frequency(truth);
    const auto true_cdf = weibull_on_grid(p.true_params, bounds);

    std::vector<PlmRecord> plm_input;
    for (std::size_t j = 0; j < records.size(); ++j)
      if (records[j] > 0.0)
        plm_input.push_back({bounds.lower + static_cast<int>(j),
                             std::max(0.0, records[j] - truth.expected[j]), truth.expected[j]});
    const auto plm = plm_estimate(plm_input);
    const auto plm_cdf = plm.cdf_on(bounds);
    p.plm = error_report(predict_cfb(hist, plm_capacity(plm), bounds), plm_cdf, true_cfb, true_cdf,
                         truth.expected);

    const auto fitted = fit_cfb(hist, true_cfb, bounds, fit);
    p.fitted = fitted.params;
    p.fit = error_report(fitted.predicted, weibull_on_grid(fitted.params, bounds), true_cfb,
                         true_cdf, truth.expected);
    out.points.push_back(p);
  }
  return out;
}

MethodComparison compare_methods(const IntensityHistogram& hist, const WeibullParams& true_params,
                                 const IntensityBounds& bounds, std::uint64_t seed,
                                 const FitOptions& fit) {
  MethodComparison out;
  out.seed = seed;
  const auto pseudo = generate_pseudo_empirical(hist, true_params, bounds, {seed, 0.5});
  out.realized_queues = pseudo.total;
  const auto true_cfb = cumulative_frequency(pseudo.profile);
  const auto true_cdf = weibull_on_grid(true_params, bounds);

  out.fit = fit_cfb(hist, pseudo.curve, bounds, fit);
  out.fit_errors = error_report(out.fit.predicted, weibull_on_grid(out.fit.params, bounds), true_cfb,
                                true_cdf, pseudo.profile.expected);

  // Generated counts are the failures; the remaining records are censored.
  const auto records = records_on_grid(hist, bounds);
  std::vector<PlmRecord> plm_input;
  for (std::size_t j = 0; j < records.size(); ++j) {
    const double failures = static_cast<double>(pseudo.counts[j]);
    if (records[j] > 0.0 || failures > 0.0)
      plm_input.push_back({bounds.lower + static_cast<int>(j), std::max(0.0, records[j] - failures),
                           failures});
  }
  out.plm = plm_estimate(plm_input);
  out.plm_errors = error_report(predict_cfb(hist, plm_capacity(out.plm), bounds),
                                out.plm.cdf_on(bounds), true_cfb, true_cdf, pseudo.profile.expected);
  out.ratio = ratio_of(out.plm_errors, out.fit_errors);
  return out;
}

namespace {

const std::vector<std::string>& regression_variables() {
  static const std::vector<std::string> names{"tf_records",    "bd_records",    "bd_tf_ratio",
                                              "ln_tf_records", "ln_bd_records", "ln_bd_tf_ratio"};
  return names;
}

DesignColumn make_column(const std::vector<AwreRow>& rows, const std::string& name) {
  DesignColumn c{name, {}};
  c.values.reserve(rows.size());
  for (const auto& r : rows) {
    const double tf = static_cast<double>(r.tf_records);
    const double bd = static_cast<double>(r.bd_records);
    double v = 0.0;
    if (name == "tf_records") v = tf;
    else if (name == "bd_records") v = bd;
    else if (name == "bd_tf_ratio") v = bd / tf;
    else if (name == "ln_tf_records") v = std::log(tf);
    else if (name == "ln_bd_records") v = std::log(bd);
    else if (name == "ln_bd_tf_ratio") v = std::log(bd / tf);
    else throw std::invalid_argument("unknown regression variable " + name);
    if (!std::isfinite(v))
      throw std::domain_error(fmt::format("regression variable {} is not finite for case {}", name,
                                          r.case_id));
    c.values.push_back(v);
  }
  return c;
}

}  // namespace

RegressionResult fit_candidate(const std::vector<AwreRow>& rows,
                               const std::vector<std::string>& variables, bool use_cdf) {
  std::vector<DesignColumn> columns;
  for (const auto& v : variables) columns.push_back(make_column(rows, v));
  std::vector<double> y;
  y.reserve(rows.size());
  for (const auto& r : rows) y.push_back(use_cdf ? r.awre_cdf : r.awre_cf);
  return ols_fit(columns, y, true);
}

RegressionReport awre_regression(const std::vector<AwreRow>& rows, bool use_cdf, double alpha) {
  if (rows.size() < 30)
    throw std::invalid_argument(
        fmt::format("awre_regression: need at least 30 rows, got {}", rows.size()));
  RegressionReport report;
  report.response = use_cdf ? "awre_cdf" : "awre_cf";
  report.alpha = alpha;
  const auto& names = regression_variables();
  const unsigned subsets = 1u << names.size();
  for (unsigned mask = 1; mask < subsets; ++mask) {
    std::vector<std::string> vars;
    for (std::size_t i = 0; i < names.size(); ++i)
      if (mask & (1u << i)) vars.push_back(names[i]);
    try {
      auto result = fit_candidate(rows, vars, use_cdf);
      report.candidates.push_back({vars, std::move(result)});
    } catch (const CollinearityError& e) {
      report.skipped.push_back(e.what());
    }
  }
  for (std::size_t i = 0; i < report.candidates.size(); ++i) {
    const auto& c = report.candidates[i].result;
    if (!c.all_significant(alpha)) continue;
    if (!report.best || c.r_squared > report.candidates[*report.best].result.r_squared)
      report.best = i;
  }
  return report;
}

}  // namespace stocap
