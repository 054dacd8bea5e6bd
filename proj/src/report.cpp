#include "stocap/report.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include <fmt/format.h>

#include "stocap/metrics.hpp"

namespace stocap {

std::string to_string(EstimateMethod m) { return m == EstimateMethod::cfb ? "cfb" : "plm"; }

EstimateMethod parse_method(const std::string& name) {
  if (name == "cfb") return EstimateMethod::cfb;
  if (name == "plm") return EstimateMethod::plm;
  throw std::invalid_argument("unknown estimation method '" + name + "' (expected cfb or plm)");
}

void to_json(Json& j, const EstimateBundle& b) {
  j = Json::object();
  j["method"] = to_string(b.method);
  j["bounds"] = b.bounds;
  if (b.params) j["params"] = *b.params;
  if (b.plm) j["plm"] = *b.plm;
  j["sse"] = b.sse;
  j["converged"] = b.converged;
  j["breakdowns"] = b.breakdowns;
  j["censored_records"] = b.censored_records;
  j["predicted"] = b.predicted;
  if (b.empirical) j["empirical"] = *b.empirical;
  j["cdf"] = b.cdf;
}

void from_json(const Json& j, EstimateBundle& b) {
  b = {};
  b.method = parse_method(j.at("method").get<std::string>());
  j.at("bounds").get_to(b.bounds);
  if (j.contains("params")) b.params = j.at("params").get<WeibullParams>();
  if (j.contains("plm")) b.plm = j.at("plm").get<PlmCurve>();
  b.sse = j.value("sse", 0.0);
  b.converged = j.value("converged", true);
  b.breakdowns = j.value("breakdowns", std::uint64_t{0});
  b.censored_records = j.value("censored_records", std::uint64_t{0});
  if (j.contains("predicted")) j.at("predicted").get_to(b.predicted);
  if (j.contains("empirical") && !j.at("empirical").is_null())
    b.empirical = j.at("empirical").get<CfbCurve>();
  if (b.method == EstimateMethod::cfb && !b.params)
    throw std::invalid_argument("estimate: cfb result without params");
  if (b.method == EstimateMethod::plm && !b.plm)
    throw std::invalid_argument("estimate: plm result without curve");
  if (j.contains("cdf")) {
    j.at("cdf").get_to(b.cdf);
  } else if (b.params) {
    for (int level = b.bounds.lower; level <= b.bounds.upper; ++level)
      b.cdf.push_back(weibull_cdf(*b.params, level));
  } else {
    b.cdf = b.plm->cdf_on(b.bounds);
  }
  if (b.cdf.size() != b.bounds.size())
    throw std::invalid_argument("estimate: cdf does not cover the bounds grid");
}

EstimateBundle estimate_from_detection(const DetectionResult& detection, EstimateMethod method,
                                       std::optional<int> imin, std::optional<int> imax,
                                       const FitOptions& fit) {
  IntensityBounds bounds;
  if (imin && imax) {
    bounds = {*imin, *imax};
  } else {
    bounds = default_bounds(detection.histogram, detection.breakdowns);
    if (imin) bounds.lower = *imin;
    if (imax) bounds.upper = *imax;
  }
  bounds.validate();

  IntensityHistogram records = detection.histogram;
  for (const auto& b : detection.breakdowns) records.add(b.breakdown_flow);

  EstimateBundle out;
  out.method = method;
  out.bounds = bounds;
  out.breakdowns = detection.breakdowns.size();
  out.censored_records = detection.histogram.total();
  out.empirical = empirical_cfb(detection.breakdowns, bounds);

  if (method == EstimateMethod::cfb) {
    const auto result = fit_cfb(records, *out.empirical, bounds, fit);
    out.params = result.params;
    out.predicted = result.predicted;
    out.sse = result.sse;
    out.converged = result.converged;
    for (int level = bounds.lower; level <= bounds.upper; ++level)
      out.cdf.push_back(weibull_cdf(result.params, level));
  } else {
    std::map<int, double> failures;
    for (const auto& b : detection.breakdowns) failures[b.breakdown_flow] += 1.0;
    std::vector<FailureCount> counts;
    for (const auto& [level, n] : failures) counts.push_back({level, n});
    out.plm = plm_estimate(counts, detection.histogram);
    out.predicted = predict_cfb(records, plm_capacity(*out.plm), bounds);
    out.cdf = out.plm->cdf_on(bounds);
    out.sse = curve_errors(out.predicted, *out.empirical).sse;
  }
  return out;
}

double bundle_quantile(const EstimateBundle& b, double p) {
  if (b.params) return weibull_quantile(*b.params, p);
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("quantile: probability outside (0,1)");
  for (std::size_t j = 0; j < b.plm->levels.size(); ++j)
    if (b.plm->cdf[j] >= p) return b.plm->levels[j];
  return std::numeric_limits<double>::quiet_NaN();
}

QuantileTable quantile_table(const EstimateBundle& a, const EstimateBundle* b,
                             const std::vector<double>& levels) {
  QuantileTable t;
  double sum = 0.0;
  std::size_t n = 0;
  for (double p : levels) {
    QuantileRow row;
    row.probability = p;
    row.a = bundle_quantile(a, p);
    if (b) {
      row.b = bundle_quantile(*b, p);
      row.abs_diff = *row.b - row.a;
      row.rel_diff = 100.0 * (*row.b - row.a) / row.a;
      if (std::isfinite(*row.abs_diff)) {
        sum += std::abs(*row.abs_diff);
        ++n;
      }
    }
    t.rows.push_back(row);
  }
  if (n > 0) t.mean_abs_diff = sum / static_cast<double>(n);
  return t;
}

namespace {

std::string cell(double v) { return std::isfinite(v) ? fmt::format("{:.6f}", v) : ""; }

}  // namespace

std::string quantile_csv(const QuantileTable& table) {
  const bool paired = !table.rows.empty() && table.rows.front().b.has_value();
  std::string out = paired ? "probability_pct,intensity_a,intensity_b,abs_diff,rel_diff_pct\n"
                           : "probability_pct,intensity_a\n";
  for (const auto& r : table.rows) {
    out += fmt::format("{:g},{}", 100.0 * r.probability, cell(r.a));
    if (paired) out += fmt::format(",{},{},{}", cell(*r.b), cell(*r.abs_diff), cell(*r.rel_diff));
    out += "\n";
  }
  if (paired && table.mean_abs_diff)
    out += fmt::format("mean_abs,,,{},\n", cell(*table.mean_abs_diff));
  return out;
}

std::string relative_difference_csv(const EstimateBundle& a, const EstimateBundle& b) {
  std::string out = "probability,intensity_a,intensity_b,rel_diff_pct\n";
  for (int k = 1; k < 1000; ++k) {
    const double p = k / 1000.0;
    const double qa = bundle_quantile(a, p);
    const double qb = bundle_quantile(b, p);
    out += fmt::format("{:.3f},{},{},{}\n", p, cell(qa), cell(qb), cell(100.0 * (qb - qa) / qa));
  }
  return out;
}

Chart overlay_chart(const EstimateBundle& a, const EstimateBundle* b,
                    std::optional<std::string> generated_at) {
  Chart chart;
  chart.title = "Cumulative frequency of breakdowns and capacity distribution";
  chart.x_label = "intensity [PCE / 3 min]";
  chart.y_label = "cumulative breakdowns";
  chart.y2_label = "capacity CDF";
  chart.generated_at = std::move(generated_at);

  struct Palette {
    const char* empirical;
    const char* predicted;
    const char* cdf;
  };
  auto add = [&](const EstimateBundle& e, const std::string& tag, Palette colors) {
    if (e.method == EstimateMethod::plm) chart.notices.push_back(tag + ": " + kPlmBanner);
    std::vector<double> x(e.bounds.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = e.bounds.lower + static_cast<double>(i);
    if (e.empirical) {
      std::vector<double> ex(e.empirical->levels.begin(), e.empirical->levels.end());
      chart.series.push_back({tag + " empirical", ex, e.empirical->values, SeriesStyle::step,
                              colors.empirical, false});
    } else {
      chart.notices.push_back(tag + ": empirical curve missing, series omitted");
    }
    if (!e.predicted.levels.empty()) {
      std::vector<double> px(e.predicted.levels.begin(), e.predicted.levels.end());
      chart.series.push_back({tag + " predicted (" + to_string(e.method) + ")", px,
                              e.predicted.values, SeriesStyle::line, colors.predicted, false});
    } else {
      chart.notices.push_back(tag + ": predicted curve missing, series omitted");
    }
    chart.series.push_back({tag + " CDF", x, e.cdf,
                            e.method == EstimateMethod::plm ? SeriesStyle::step : SeriesStyle::line,
                            colors.cdf, true});
  };
  add(a, "A", {"#444444", "#1f77b4", "#2ca02c"});
  if (b) add(*b, "B", {"#999999", "#d62728", "#ff7f0e"});
  return chart;
}

ReportFiles write_report(const EstimateBundle& a, const EstimateBundle* b,
                         const std::filesystem::path& out_dir,
                         std::optional<std::string> generated_at,
                         const std::vector<double>& levels) {
  ReportFiles files;
  write_text_file(out_dir / "overlay.svg", render_svg(overlay_chart(a, b, std::move(generated_at))));
  files.written.push_back("overlay.svg");
  write_text_file(out_dir / "quantiles.csv", quantile_csv(quantile_table(a, b, levels)));
  files.written.push_back("quantiles.csv");
  if (b) {
    write_text_file(out_dir / "relative_difference.csv", relative_difference_csv(a, *b));
    files.written.push_back("relative_difference.csv");
  }
  return files;
}

}  // namespace stocap
