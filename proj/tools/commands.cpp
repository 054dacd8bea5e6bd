#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "stocap/experiments.hpp"
#include "stocap/report.hpp"
#include "stocap/serialization.hpp"
#include "stocap/synthetic.hpp"
#include "stocap/traffic.hpp"

namespace fs = std::filesystem;

namespace stocap::cli {
namespace {

Json load_user_config(const std::string& path) {
  if (path.empty()) return Json::object();
  auto j = read_json_file(path);
  if (!j.is_object()) throw UsageError(path + ": config must be a JSON object");
  if (j.contains("subcommand") && j.contains("config")) return j.at("config");
  return j;
}

// Like merge_patch, but an explicit null is kept as a value.
void merge_into(Json& base, const Json& overrides) {
  for (const auto& [key, value] : overrides.items()) {
    if (value.is_object() && base.contains(key) && base.at(key).is_object())
      merge_into(base[key], value);
    else
      base[key] = value;
  }
}

std::string require_out_dir(const Globals& g, const std::string& fallback = {}) {
  if (!g.out_dir.empty()) return g.out_dir;
  if (!fallback.empty()) return fallback;
  throw UsageError("--out-dir is required");
}

RunManifest start_manifest(const Globals& g, const std::string& subcommand) {
  RunManifest m;
  m.subcommand = subcommand;
  m.started_at = g.clock().now();
  return m;
}

void add_input(RunManifest& m, const std::string& path) {
  m.inputs.push_back({path, file_sha256(path)});
}

void finish_manifest(const Globals& g, RunManifest& m, const fs::path& where) {
  m.finished_at = g.clock().now();
  write_manifest(where, m);
}

std::optional<std::string> svg_stamp(const Globals& g) { return g.clock().now(); }

std::string num(double v) { return std::isfinite(v) ? fmt::format("{:.6f}", v) : "nan"; }

FitOptions fit_options(int starts) {
  if (starts < 1) throw UsageError("--starts must be at least 1");
  FitOptions f;
  f.starts_per_axis = starts;
  return f;
}

// Maps any failure inside a pipeline stage onto the stage name, keeping the
// I/O versus computation distinction for the exit code.
template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const IoError& e) {
    throw IoError(fmt::format("{}: {}", name, e.what()));
  } catch (const CsvFormatError& e) {
    throw IoError(fmt::format("{}: {}", name, e.what()));
  } catch (const UsageError& e) {
    throw UsageError(fmt::format("{}: {}", name, e.what()));
  } catch (const std::exception& e) {
    throw std::runtime_error(fmt::format("{}: {}", name, e.what()));
  }
}

std::istringstream open_text(const std::string& path) { return std::istringstream(read_text_file(path)); }

ParsedEvents load_events(const std::string& path) {
  auto in = open_text(path);
  auto parsed = parse_events(in);
  for (const auto& d : parsed.diagnostics) spdlog::warn("{}:{}: {}", path, d.line, d.message);
  spdlog::info(
      "{}: {} rows, {} events kept; dropped {} invalid, {} duplicate, {} implausible, {} malformed",
      path, parsed.rows, parsed.events.size(), parsed.dropped_invalid, parsed.dropped_duplicate,
      parsed.dropped_implausible, parsed.rejected_malformed);
  return parsed;
}

std::string minutes_text(const std::vector<FlowInterval>& minutes) {
  std::ostringstream out;
  write_minutes_csv(out, minutes);
  return out.str();
}

Json detection_json(const DetectionResult& r, const DetectionConfig& config) {
  Json j = r;
  j["config"] = config;
  return j;
}

void log_detection(const DetectionResult& r) {
  spdlog::info("{} breakdowns, {} censored records, {} discarded, {} congested minutes",
               r.breakdowns.size(), r.histogram.total(), r.discarded_minutes, r.congested_minutes);
}

}  // namespace

int run_ingest(const Globals& g, const IngestArgs& args) {
  auto m = start_manifest(g, "ingest");
  DetectionConfig config;
  config.pce_length_threshold = args.pce_length;
  config.validate();
  const auto parsed = load_events(args.input);
  add_input(m, args.input);
  write_text_file(args.out, minutes_text(aggregate_minutes(parsed.events, config)));
  m.config = {{"input", args.input},
              {"out", args.out},
              {"pce_length_threshold", args.pce_length},
              {"dropped",
               {{"invalid", parsed.dropped_invalid},
                {"duplicate", parsed.dropped_duplicate},
                {"implausible", parsed.dropped_implausible},
                {"malformed", parsed.rejected_malformed}}}};
  m.outputs = {args.out};
  finish_manifest(g, m, manifest_path_for_file(args.out));
  return 0;
}

int run_detect(const Globals& g, const DetectArgs& args) {
  auto m = start_manifest(g, "detect");
  const auto user = load_user_config(g.config);
  DetectionConfig config = user.contains("detection") ? user.at("detection").get<DetectionConfig>()
                                                      : DetectionConfig{};
  if (args.breakdown_speed) config.breakdown_speed = *args.breakdown_speed;
  if (args.discard_speed) config.discard_speed = *args.discard_speed;
  if (args.recovery_speed) config.recovery_speed = *args.recovery_speed;
  config.validate();

  auto in = open_text(args.minutes);
  add_input(m, args.minutes);
  const auto result = detect_breakdowns(read_minutes_csv(in), config);
  log_detection(result);
  write_json_file(args.out, detection_json(result, config));
  m.config = {{"minutes", args.minutes}, {"out", args.out}, {"detection", config}};
  m.outputs = {args.out};
  finish_manifest(g, m, manifest_path_for_file(args.out));
  return 0;
}

int run_estimate(const Globals& g, const EstimateArgs& args) {
  auto m = start_manifest(g, "estimate");
  const auto method = parse_method(args.method);
  const auto detection = read_json_file(args.detection).get<DetectionResult>();
  add_input(m, args.detection);
  const auto bundle =
      estimate_from_detection(detection, method, args.imin, args.imax, fit_options(args.starts));
  if (!bundle.converged) spdlog::warn("fit did not converge");
  if (method == EstimateMethod::plm) spdlog::warn("{}", kPlmBanner);
  write_json_file(args.out, Json(bundle));
  m.config = {{"method", args.method},
              {"detection", args.detection},
              {"imin", args.imin ? Json(*args.imin) : Json(nullptr)},
              {"imax", args.imax ? Json(*args.imax) : Json(nullptr)},
              {"starts", args.starts},
              {"out", args.out}};
  m.outputs = {args.out};
  finish_manifest(g, m, manifest_path_for_file(args.out));
  return 0;
}

int run_synth(const Globals& g, const SynthArgs& args) {
  auto m = start_manifest(g, "synth");
  const std::uint64_t seed = g.seed.value_or(args.seed);
  const WeibullParams params(args.lambda, args.gamma);
  SurrogateConfig surrogate;
  surrogate.records = args.records;
  surrogate.spread = args.spread;
  surrogate.expected_total = args.profile_total;
  const auto profile = surrogate_profile(surrogate);
  const auto bounds = experiment_bounds(profile.histogram, params);
  const GeneratorConfig gen{seed, 0.5};
  const auto pseudo = generate_pseudo_empirical(profile.histogram, params, bounds, gen);

  Json config = {{"lambda", args.lambda},         {"gamma", args.gamma},
                 {"records", args.records},       {"seed", seed},
                 {"spread", args.spread},         {"profile_total", args.profile_total},
                 {"target_split", gen.target_split}};
  Json out = {{"config", config},
              {"seed", seed},
              {"prng", std::string(kPrngId)},
              {"bounds", bounds},
              {"histogram", profile.histogram},
              {"expected", pseudo.profile.expected},
              {"theoretical_curve", cumulative_frequency(pseudo.profile)},
              {"counts", pseudo.counts},
              {"total", pseudo.total},
              {"curve", pseudo.curve}};
  write_json_file(args.out, out);
  config["out"] = args.out;
  m.config = config;
  m.seeds = {seed};
  m.prng_id = kPrngId;
  m.outputs = {args.out};
  finish_manifest(g, m, manifest_path_for_file(args.out));
  return 0;
}

// ---------------------------------------------------------------- experiments

namespace {

Json surrogate_json(const SurrogateConfig& s) {
  return {{"records", s.records},
          {"spread", s.spread},
          {"calibration", s.calibration},
          {"expected_total", s.expected_total},
          {"seed", s.seed}};
}

SurrogateConfig surrogate_from(const Json& j) {
  SurrogateConfig s;
  s.records = j.value("records", s.records);
  s.spread = j.value("spread", s.spread);
  if (j.contains("calibration")) s.calibration = j.at("calibration").get<WeibullParams>();
  s.expected_total = j.value("expected_total", s.expected_total);
  s.seed = j.value("seed", s.seed);
  return s;
}

Json sweep_cases_json(const SweepConfig& c) {
  Json cases = Json::array();
  for (const auto& sc : c.cases)
    cases.push_back({{"label", sc.setting.label},
                     {"params", sc.setting.params},
                     {"target_total", sc.target_total}});
  return cases;
}

SweepConfig sweep_from(const Json& j) {
  SweepConfig c;
  for (const auto& sc : j.at("cases"))
    c.cases.push_back({{sc.at("label").get<std::string>(), sc.at("params").get<WeibullParams>()},
                       sc.at("target_total").get<double>()});
  c.replicates = j.at("replicates").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.total_tolerance = j.at("total_tolerance").get<double>();
  c.max_scale_factor = j.at("max_scale_factor").get<double>();
  c.fit = fit_options(j.at("starts").get<int>());
  return c;
}

NoiseMode noise_from(const std::string& s) {
  if (s == "bernoulli") return NoiseMode::bernoulli;
  if (s == "rounded") return NoiseMode::rounded;
  throw UsageError("unknown noise mode '" + s + "' (expected bernoulli or rounded)");
}

std::string table3_csv(const CaseSummary& s) {
  std::string out = "variable,mean,sd,max\n";
  const auto& names = replicate_variable_names();
  for (std::size_t i = 0; i < names.size(); ++i)
    out += fmt::format("{},{},{},{}\n", names[i], num(s.stats[i].mean), num(s.stats[i].sd),
                       num(s.stats[i].max));
  return out;
}

std::string replicates_csv(const CaseSummary& s) {
  std::string out = "seed";
  for (const auto& n : replicate_variable_names()) out += "," + n;
  out += ",converged\n";
  for (const auto& r : s.replicates) {
    out += std::to_string(r.seed);
    for (double v : replicate_variables(r)) out += "," + num(v);
    out += r.converged ? ",1\n" : ",0\n";
  }
  return out;
}

std::string table5_csv(const std::vector<CaseSummary>& cases) {
  std::string out =
      "case_id,true_scale,true_shape,scale_factor,tf_records,theoretical_queues,replicates,failed,"
      "mean_realized_queues,mean_are_cf,mean_awre_cf,mean_are_cdf,mean_awre_cdf,sd_awre_cdf,"
      "max_awre_cdf\n";
  for (const auto& c : cases)
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", c.config.id,
                       num(c.config.true_params.scale()), num(c.config.true_params.shape()),
                       num(c.config.scale_factor), c.tf_records, num(c.theoretical_queues),
                       c.replicates.size(), c.failed_seeds.size(),
                       num(c.stat("realized_queues").mean), num(c.stat("are_cf").mean),
                       num(c.stat("awre_cf").mean), num(c.stat("are_cdf").mean),
                       num(c.stat("awre_cdf").mean), num(c.stat("awre_cdf").sd),
                       num(c.stat("awre_cdf").max));
  return out;
}

std::string awre_csv(const std::vector<AwreRow>& rows) {
  std::string out = "tf_records,bd_records,awre_cf,awre_cdf,case_id,seed\n";
  for (const auto& r : rows)
    out += fmt::format("{},{},{},{},{},{}\n", r.tf_records, r.bd_records, num(r.awre_cf),
                       num(r.awre_cdf), r.case_id, r.seed);
  return out;
}

Chart awre_scatter(const std::vector<AwreRow>& rows, const Globals& g) {
  Chart chart;
  chart.title = "AWRE of the capacity CDF against the number of breakdowns";
  chart.x_label = "breakdowns in the sample";
  chart.y_label = "AWRE CDF";
  chart.generated_at = svg_stamp(g);
  Series s{"replicates", {}, {}, SeriesStyle::points, "#1f77b4", false};
  for (const auto& r : rows) {
    s.x.push_back(static_cast<double>(r.bd_records));
    s.y.push_back(r.awre_cdf);
  }
  chart.series.push_back(std::move(s));
  return chart;
}

std::vector<std::string> write_sweep(const SweepResult& result, const fs::path& dir,
                                     const Globals& g) {
  std::vector<std::string> files;
  for (const auto& c : result.cases) {
    write_text_file(dir / ("case_" + c.config.id + ".csv"), table3_csv(c));
    write_text_file(dir / ("replicates_" + c.config.id + ".csv"), replicates_csv(c));
    files.push_back("case_" + c.config.id + ".csv");
    files.push_back("replicates_" + c.config.id + ".csv");
  }
  write_text_file(dir / "table5.csv", table5_csv(result.cases));
  write_text_file(dir / "awre_dataset.csv", awre_csv(result.rows));
  write_text_file(dir / "figure5.svg", render_svg(awre_scatter(result.rows, g)));
  Json summary = {{"cases", result.cases}, {"diagnostics", result.diagnostics}};
  write_json_file(dir / "summary.json", summary);
  files.insert(files.end(), {"table5.csv", "awre_dataset.csv", "figure5.svg", "summary.json"});
  return files;
}

}  // namespace

Json default_experiment_config(const std::string& study) {
  Json j = {{"study", study},
            {"surrogate", surrogate_json(SurrogateConfig{})},
            {"bounds_params", WeibullParams(150.0, 6.5)},
            {"seed", 1},
            {"starts", 5}};
  if (study == "table3") {
    j["case"] = {{"id", "50_1"},
                 {"scale_factor", 1.0},
                 {"true_params", WeibullParams(150.0, 6.5)},
                 {"replicates", 15},
                 {"noise", "bernoulli"}};
  } else if (study == "table5" || study == "regression") {
    const auto sweep = study == "table5" ? table5_sweep() : regression_sweep();
    j["cases"] = sweep_cases_json(sweep);
    j["replicates"] = sweep.replicates;
    j["total_tolerance"] = sweep.total_tolerance;
    j["max_scale_factor"] = sweep.max_scale_factor;
    if (study == "regression") j["alpha"] = 0.1;
  } else if (study == "censoring") {
    j["rates"] = {0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99, 0.995, 0.999};
    j["shape"] = 6.5;
  } else if (study == "compare") {
    j["true_params"] = WeibullParams(150.0, 6.5);
    j["seed"] = 42;
  } else {
    throw UsageError("unknown study '" + study +
                     "' (expected table3, table5, censoring, compare or regression)");
  }
  return j;
}

int run_experiment(const Globals& g, const std::string& study) {
  auto m = start_manifest(g, "experiment");
  Json config = default_experiment_config(study);
  auto user = load_user_config(g.config);
  if (user.contains("study") && user.at("study") != study)
    throw UsageError(fmt::format("config is for study {}, not {}", user.at("study").dump(), study));
  merge_into(config, user);
  if (g.seed) config["seed"] = *g.seed;
  const fs::path dir = require_out_dir(g);

  const auto surrogate = surrogate_profile(surrogate_from(config.at("surrogate")));
  const auto& hist = surrogate.histogram;
  const auto bounds = experiment_bounds(hist, config.at("bounds_params").get<WeibullParams>());
  spdlog::info("surrogate profile: {} records, peak {:.3f}, bounds [{}, {}]", hist.total(),
               surrogate.peak, bounds.lower, bounds.upper);
  const auto fit = fit_options(config.at("starts").get<int>());
  const std::uint64_t seed = config.at("seed").get<std::uint64_t>();
  std::vector<std::string> files;

  if (study == "table3") {
    const auto& c = config.at("case");
    ExperimentCase e{c.at("id").get<std::string>(), c.at("scale_factor").get<double>(),
                     c.at("true_params").get<WeibullParams>(), c.at("replicates").get<int>(), seed,
                     noise_from(c.at("noise").get<std::string>())};
    const auto summary = run_case(e, hist, bounds, fit);
    write_text_file(dir / ("case_" + e.id + ".csv"), table3_csv(summary));
    write_text_file(dir / ("replicates_" + e.id + ".csv"), replicates_csv(summary));
    write_json_file(dir / "summary.json", Json(summary));
    files = {"case_" + e.id + ".csv", "replicates_" + e.id + ".csv", "summary.json"};
    m.seeds = {seed};
  } else if (study == "table5" || study == "regression") {
    const auto sweep = sweep_from(config);
    const auto result = sample_size_sweep(hist, bounds, sweep);
    files = write_sweep(result, dir, g);
    for (std::size_t i = 0; i < sweep.cases.size(); ++i) m.seeds.push_back(seed + 1000 * i);
    if (study == "regression") {
      const double alpha = config.at("alpha").get<double>();
      const auto cdf = awre_regression(result.rows, true, alpha);
      const auto cf = awre_regression(result.rows, false, alpha);
      const auto form = fit_candidate(result.rows, {"bd_records", "ln_bd_records"}, true);
      Json report = {{"awre_cdf", cdf}, {"awre_cf", cf}, {"reference_form", form}};
      write_json_file(dir / "regression.json", report);
      files.push_back("regression.json");
    }
  } else if (study == "censoring") {
    const auto rates = config.at("rates").get<std::vector<double>>();
    const IntensityBounds full{std::max(1, hist.min_level()), hist.max_level()};
    const auto result = censoring_sweep(hist, rates, full, config.at("shape").get<double>(), fit);
    std::string csv =
        "target_rate,achieved_rate,true_scale,true_shape,plm_are_cf,plm_awre_cf,plm_are_cdf,"
        "plm_awre_cdf,fit_scale,fit_shape,fit_are_cf,fit_awre_cf,fit_are_cdf,fit_awre_cdf\n";
    Chart chart;
    chart.title = "Product-limit errors against the censoring rate";
    chart.x_label = "censoring rate [%]";
    chart.y_label = "relative error";
    chart.generated_at = svg_stamp(g);
    Series s_are_cf{"ARE CF", {}, {}, SeriesStyle::line, "#1f77b4", false};
    Series s_awre_cf{"AWRE CF", {}, {}, SeriesStyle::line, "#ff7f0e", false};
    Series s_are_cdf{"ARE CDF", {}, {}, SeriesStyle::line, "#2ca02c", false};
    Series s_awre_cdf{"AWRE CDF", {}, {}, SeriesStyle::line, "#d62728", false};
    for (const auto& p : result.points) {
      csv += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", num(p.target_rate),
                         num(p.achieved_rate), num(p.true_params.scale()),
                         num(p.true_params.shape()), num(p.plm.are_cf), num(p.plm.awre_cf),
                         num(p.plm.are_cdf), num(p.plm.awre_cdf), num(p.fitted.scale()),
                         num(p.fitted.shape()), num(p.fit.are_cf), num(p.fit.awre_cf),
                         num(p.fit.are_cdf), num(p.fit.awre_cdf));
      const double x = 100.0 * p.achieved_rate;
      for (auto* s : {&s_are_cf, &s_awre_cf, &s_are_cdf, &s_awre_cdf}) s->x.push_back(x);
      s_are_cf.y.push_back(p.plm.are_cf);
      s_awre_cf.y.push_back(p.plm.awre_cf);
      s_are_cdf.y.push_back(p.plm.are_cdf);
      s_awre_cdf.y.push_back(p.plm.awre_cdf);
    }
    chart.series = {s_are_cf, s_awre_cf, s_are_cdf, s_awre_cdf};
    write_text_file(dir / "censoring.csv", csv);
    write_text_file(dir / "figure3.svg", render_svg(chart));
    write_json_file(dir / "censoring.json",
                    Json{{"points", result.points}, {"diagnostics", result.diagnostics}});
    files = {"censoring.csv", "figure3.svg", "censoring.json"};
  } else if (study == "compare") {
    const auto result =
        compare_methods(hist, config.at("true_params").get<WeibullParams>(), bounds, seed, fit);
    std::string csv = "method," + error_report_csv_header() + "\n";
    csv += "fit," + error_report_csv_row(result.fit_errors) + "\n";
    csv += "plm," + error_report_csv_row(result.plm_errors) + "\n";
    csv += "plm_over_fit," + error_report_csv_row(result.ratio) + "\n";
    write_text_file(dir / "compare.csv", csv);
    write_json_file(dir / "compare.json", Json(result));
    files = {"compare.csv", "compare.json"};
    m.seeds = {seed};
    m.prng_id = kPrngId;
  }
  if (study != "censoring") m.prng_id = kPrngId;
  m.config = config;
  m.outputs = files;
  finish_manifest(g, m, manifest_path_for_dir(dir));
  return 0;
}

// -------------------------------------------------------------------- report

int run_report(const Globals& g, const ReportArgs& args) {
  auto m = start_manifest(g, "report");
  if (args.a.empty()) throw UsageError("report needs --a");
  const fs::path dir = require_out_dir(g, args.out);
  const auto a = read_json_file(args.a).get<EstimateBundle>();
  add_input(m, args.a);
  std::optional<EstimateBundle> b;
  if (!args.b.empty()) {
    b = read_json_file(args.b).get<EstimateBundle>();
    add_input(m, args.b);
  }
  std::vector<double> levels = default_quantile_levels();
  if (!args.levels.empty()) {
    levels.clear();
    for (double pct : args.levels) levels.push_back(pct / 100.0);
  }
  const auto files = write_report(a, b ? &*b : nullptr, dir, svg_stamp(g), levels);
  m.config = {{"a", args.a}, {"b", args.b.empty() ? Json(nullptr) : Json(args.b)}, {"levels", levels}};
  m.outputs = files.written;
  finish_manifest(g, m, manifest_path_for_dir(dir));
  return 0;
}

// ------------------------------------------------------------------ pipeline

Json default_pipeline_config() {
  return {{"input", nullptr},
          {"method", "cfb"},
          {"detection", DetectionConfig{}},
          {"imin", nullptr},
          {"imax", nullptr},
          {"starts", 5},
          {"quantile_levels", default_quantile_levels()},
          {"fixed_clock", false}};
}

int run_pipeline(const Globals& g) {
  auto m = start_manifest(g, "pipeline");
  if (g.config.empty()) throw UsageError("pipeline needs --config");
  const auto user_file = read_json_file(g.config);
  const bool from_manifest = user_file.contains("subcommand") && user_file.contains("config");
  Json config = default_pipeline_config();
  merge_into(config, load_user_config(g.config));
  if (g.fixed_clock) config["fixed_clock"] = true;
  if (!config.at("input").is_string()) throw UsageError("pipeline config needs an \"input\" path");

  Globals run = g;
  run.fixed_clock = config.at("fixed_clock").get<bool>();
  m.started_at = run.clock().now();
  const fs::path dir = require_out_dir(g, config.value("out_dir", std::string{}));
  const auto input = config.at("input").get<std::string>();
  const auto method = parse_method(config.at("method").get<std::string>());
  const auto detection_config = config.at("detection").get<DetectionConfig>();
  auto opt_int = [&](const char* key) {
    if (!config.contains(key) || config.at(key).is_null()) return std::optional<int>{};
    return std::optional<int>(config.at(key).get<int>());
  };

  const auto events = stage("ingest", [&] { return load_events(input); });
  m.inputs.push_back({input, file_sha256(input)});
  if (from_manifest)
    for (const auto& in : user_file.value("inputs", Json::array()))
      if (in.value("path", "") == input && in.value("sha256", "") != m.inputs.back().sha256)
        spdlog::warn("{} differs from the digest recorded in the manifest", input);

  const auto minutes =
      stage("ingest", [&] { return aggregate_minutes(events.events, detection_config); });
  write_text_file(dir / "minutes.csv", minutes_text(minutes));
  const auto detection = stage("detect", [&] { return detect_breakdowns(minutes, detection_config); });
  log_detection(detection);
  write_json_file(dir / "detection.json", detection_json(detection, detection_config));

  const auto bundle = stage("estimate", [&] {
    return estimate_from_detection(detection, method, opt_int("imin"), opt_int("imax"),
                                   fit_options(config.at("starts").get<int>()));
  });
  if (method == EstimateMethod::plm) spdlog::warn("{}", kPlmBanner);
  write_json_file(dir / "estimate.json", Json(bundle));

  const auto levels = config.at("quantile_levels").get<std::vector<double>>();
  const auto files = stage("report", [&] {
    return write_report(bundle, nullptr, dir, run.clock().now(), levels);
  });

  config.erase("out_dir");
  m.config = config;
  m.outputs = {"minutes.csv", "detection.json", "estimate.json"};
  m.outputs.insert(m.outputs.end(), files.written.begin(), files.written.end());
  finish_manifest(run, m, manifest_path_for_dir(dir));
  return 0;
}

}  // namespace stocap::cli
