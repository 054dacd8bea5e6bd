#include "stocap/serialization.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace stocap {

void to_json(Json& j, const IntensityBounds& b) { j = {{"lower", b.lower}, {"upper", b.upper}}; }

void from_json(const Json& j, IntensityBounds& b) {
  b.lower = j.at("lower").get<int>();
  b.upper = j.at("upper").get<int>();
  b.validate();
}

void to_json(Json& j, const CfbCurve& c) { j = {{"levels", c.levels}, {"values", c.values}}; }

void from_json(const Json& j, CfbCurve& c) {
  j.at("levels").get_to(c.levels);
  j.at("values").get_to(c.values);
  if (c.levels.size() != c.values.size())
    throw std::invalid_argument("curve: levels and values differ in length");
}

void to_json(Json& j, const IntensityHistogram& h) {
  j = Json::array();
  for (const auto& [level, n] : h.counts) j.push_back({level, n});
}

void from_json(const Json& j, IntensityHistogram& h) {
  h = {};
  for (const auto& bin : j) h.add(bin.at(0).get<int>(), bin.at(1).get<std::uint64_t>());
}

void to_json(Json& j, const BreakdownObservation& b) {
  j = {{"minute", format_minute(b.breakdown_minute)},
       {"flow_pce_3min", b.breakdown_flow},
       {"shifted_back", b.shifted_back}};
}

void from_json(const Json& j, BreakdownObservation& b) {
  const auto text = j.at("minute").get<std::string>();
  auto m = parse_minute(text);
  if (!m) throw std::invalid_argument("breakdown: bad minute " + text);
  b.breakdown_minute = *m;
  b.breakdown_flow = j.at("flow_pce_3min").get<int>();
  b.shifted_back = j.value("shifted_back", false);
}

void to_json(Json& j, const DetectionConfig& c) {
  j = {{"breakdown_speed", c.breakdown_speed},   {"discard_speed", c.discard_speed},
       {"recovery_speed", c.recovery_speed},     {"breakdown_window", c.breakdown_window},
       {"recovery_window", c.recovery_window},   {"pce_length_threshold", c.pce_length_threshold}};
}

void from_json(const Json& j, DetectionConfig& c) {
  c = {};
  c.breakdown_speed = j.value("breakdown_speed", c.breakdown_speed);
  c.discard_speed = j.value("discard_speed", c.discard_speed);
  c.recovery_speed = j.value("recovery_speed", c.recovery_speed);
  c.breakdown_window = j.value("breakdown_window", c.breakdown_window);
  c.recovery_window = j.value("recovery_window", c.recovery_window);
  c.pce_length_threshold = j.value("pce_length_threshold", c.pce_length_threshold);
  c.validate();
}

void to_json(Json& j, const DetectionResult& r) {
  j = {{"breakdowns", r.breakdowns},
       {"histogram", r.histogram},
       {"eligible_minutes", r.eligible_minutes},
       {"censored_records", r.histogram.total()},
       {"discarded_minutes", r.discarded_minutes},
       {"congested_minutes", r.congested_minutes},
       {"gap_windows", r.gap_windows},
       {"skipped_breakdowns", r.skipped_breakdowns},
       {"ended_congested", r.ended_congested},
       {"warnings", r.warnings}};
}

void from_json(const Json& j, DetectionResult& r) {
  r = {};
  j.at("breakdowns").get_to(r.breakdowns);
  j.at("histogram").get_to(r.histogram);
  r.eligible_minutes = j.value("eligible_minutes", std::size_t{0});
  r.discarded_minutes = j.value("discarded_minutes", std::size_t{0});
  r.congested_minutes = j.value("congested_minutes", std::size_t{0});
  r.gap_windows = j.value("gap_windows", std::size_t{0});
  r.skipped_breakdowns = j.value("skipped_breakdowns", std::size_t{0});
  r.ended_congested = j.value("ended_congested", false);
  if (j.contains("warnings")) j.at("warnings").get_to(r.warnings);
}

void to_json(Json& j, const FitResult& r) {
  j = {{"params", r.params},       {"sse", r.sse},
       {"bounds", r.bounds},       {"converged", r.converged},
       {"iterations", r.iterations}, {"evaluations", r.evaluations},
       {"predicted", r.predicted}};
}

void to_json(Json& j, const PlmCurve& c) {
  j = {{"levels", c.levels},
       {"at_risk", c.at_risk},
       {"failures", c.failures},
       {"survival", c.survival},
       {"cdf", c.cdf}};
}

void from_json(const Json& j, PlmCurve& c) {
  j.at("levels").get_to(c.levels);
  j.at("at_risk").get_to(c.at_risk);
  j.at("failures").get_to(c.failures);
  j.at("survival").get_to(c.survival);
  j.at("cdf").get_to(c.cdf);
}

void to_json(Json& j, const ErrorReport& r) {
  j = {{"sse_cf", r.sse},       {"rsse_cf", r.rsse},       {"mse_cf", r.mse},
       {"rmse_cf", r.rmse},     {"are_cf", r.are_cf},      {"awre_cf", r.awre_cf},
       {"are_cdf", r.are_cdf},  {"awre_cdf", r.awre_cdf},  {"reference", to_string(r.reference_kind)}};
}

void to_json(Json& j, const RegressionResult& r) {
  Json terms = Json::array();
  for (std::size_t i = 0; i < r.names.size(); ++i)
    terms.push_back({{"name", r.names[i]},
                     {"coefficient", r.coefficients[i]},
                     {"std_error", r.std_errors[i]},
                     {"t", r.t_stats[i]},
                     {"p", r.p_values[i]},
                     {"lower95", r.lower95[i]},
                     {"upper95", r.upper95[i]}});
  j = {{"terms", terms},
       {"r_squared", r.r_squared},
       {"observations", r.observations},
       {"degrees_of_freedom", r.degrees_of_freedom},
       {"intercept", r.intercept}};
}

void to_json(Json& j, const SummaryStats& s) { j = {{"mean", s.mean}, {"sd", s.sd}, {"max", s.max}}; }

void to_json(Json& j, const ReplicateRecord& r) {
  j = {{"seed", r.seed},
       {"estimated", r.estimated},
       {"realized_queues", r.realized_queues},
       {"rsse_empirical", r.rsse_empirical},
       {"rsse_true", r.rsse_true},
       {"errors", r.errors},
       {"errors_empirical", r.errors_empirical},
       {"converged", r.converged}};
}

void to_json(Json& j, const ExperimentCase& c) {
  j = {{"id", c.id},
       {"scale_factor", c.scale_factor},
       {"true_params", c.true_params},
       {"replicates", c.replicates},
       {"base_seed", c.base_seed},
       {"noise", c.noise == NoiseMode::bernoulli ? "bernoulli" : "rounded"}};
}

void to_json(Json& j, const CaseSummary& s) {
  Json stats = Json::object();
  const auto& names = replicate_variable_names();
  for (std::size_t i = 0; i < s.stats.size(); ++i) stats[names[i]] = s.stats[i];
  j = {{"case", s.config},
       {"bounds", s.bounds},
       {"tf_records", s.tf_records},
       {"theoretical_queues", s.theoretical_queues},
       {"failed_seeds", s.failed_seeds},
       {"stats", stats},
       {"replicates", s.replicates}};
}

void to_json(Json& j, const RegressionReport& r) {
  Json candidates = Json::array();
  for (const auto& c : r.candidates)
    candidates.push_back({{"variables", c.variables},
                          {"all_significant", c.result.all_significant(r.alpha)},
                          {"result", c.result}});
  j = {{"response", r.response},
       {"alpha", r.alpha},
       {"best", r.best ? Json(*r.best) : Json(nullptr)},
       {"candidates", candidates},
       {"skipped", r.skipped}};
}

void to_json(Json& j, const CensoringPoint& p) {
  j = {{"target_rate", p.target_rate}, {"achieved_rate", p.achieved_rate},
       {"true_params", p.true_params}, {"plm", p.plm},
       {"fit", p.fit},                 {"fitted", p.fitted}};
}

void to_json(Json& j, const MethodComparison& m) {
  j = {{"seed", m.seed},
       {"realized_queues", m.realized_queues},
       {"fit", m.fit},
       {"fit_errors", m.fit_errors},
       {"plm_errors", m.plm_errors},
       {"ratio", m.ratio}};
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json_file(const std::filesystem::path& path) {
  const auto text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw IoError(fmt::format("{}: invalid JSON: {}", path.string(), e.what()));
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError(fmt::format("cannot create {}: {}", path.parent_path().string(), ec.message()));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
  out << text;
  if (!out) throw IoError(fmt::format("write failed for {}", path.string()));
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace stocap
