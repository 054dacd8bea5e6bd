#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "commands.hpp"
#include "stocap/serialization.hpp"
#include "stocap/traffic.hpp"

using namespace stocap;
using namespace stocap::cli;

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_st("stocap"));
  spdlog::set_pattern("%l: %v");

  CLI::App app{"Stochastic capacity estimation from detector data"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kToolVersion);

  Globals g;
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Random seed override");
  app.add_flag("--fixed-clock", g.fixed_clock,
               fmt::format("Stamp manifests and charts with {} instead of the wall clock", kFixedClock));
  app.add_option("--out-dir", g.out_dir, "Output directory");
  app.add_option("--config", g.config, "JSON config or run manifest");
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Clean raw events and aggregate to minutes");
  ingest_cmd->add_option("--input", ingest.input, "Events CSV")->required();
  ingest_cmd->add_option("--out", ingest.out, "Minutes CSV")->required();
  ingest_cmd->add_option("--pce-length", ingest.pce_length, "Vehicles longer than this count as 2 PCE")
      ->capture_default_str();

  DetectArgs detect;
  auto* detect_cmd = app.add_subcommand("detect", "Find breakdowns and build the intensity histogram");
  detect_cmd->add_option("--minutes", detect.minutes, "Minutes CSV")->required();
  detect_cmd->add_option("--breakdown-speed", detect.breakdown_speed, "km/h, default 40");
  detect_cmd->add_option("--discard-speed", detect.discard_speed, "km/h, default 50");
  detect_cmd->add_option("--recovery-speed", detect.recovery_speed, "km/h, default 70");
  detect_cmd->add_option("--out", detect.out, "Detection JSON")->required();

  EstimateArgs estimate;
  auto* estimate_cmd = app.add_subcommand("estimate", "Estimate the capacity distribution");
  estimate_cmd->add_option("--method", estimate.method, "cfb or plm")
      ->check(CLI::IsMember({"cfb", "plm"}))
      ->capture_default_str();
  estimate_cmd->add_option("--detection", estimate.detection, "Detection JSON")->required();
  estimate_cmd->add_option("--imin", estimate.imin, "Lower intensity bound");
  estimate_cmd->add_option("--imax", estimate.imax, "Upper intensity bound");
  estimate_cmd->add_option("--starts", estimate.starts, "Starts per parameter axis")
      ->capture_default_str();
  estimate_cmd->add_option("--out", estimate.out, "Estimate JSON")->required();

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a pseudo-empirical breakdown curve");
  synth_cmd->add_option("--lambda", synth.lambda, "Weibull scale")->capture_default_str();
  synth_cmd->add_option("--gamma", synth.gamma, "Weibull shape")->capture_default_str();
  synth_cmd->add_option("--records", synth.records, "Records in the demand profile")
      ->capture_default_str();
  synth_cmd->add_option("--spread", synth.spread, "Demand profile spread")->capture_default_str();
  synth_cmd->add_option("--profile-total", synth.profile_total,
                        "Expected breakdowns the profile is calibrated to")
      ->capture_default_str();
  synth_cmd->add_option("--out", synth.out, "Output JSON")->required();
  std::uint64_t synth_seed = synth.seed;
  synth_cmd->add_option("--seed", synth_seed, "Generator seed")->capture_default_str();

  std::string study;
  auto* experiment_cmd = app.add_subcommand("experiment", "Run a simulation study");
  experiment_cmd->add_option("study", study, "table3, table5, censoring, compare or regression")
      ->required()
      ->check(CLI::IsMember({"table3", "table5", "censoring", "compare", "regression"}));

  ReportArgs report;
  auto* report_cmd = app.add_subcommand("report", "Charts and quantile tables for one or two estimates");
  report_cmd->add_option("--a", report.a, "Estimate JSON")->required();
  report_cmd->add_option("--b", report.b, "Second estimate JSON");
  report_cmd->add_option("--out", report.out, "Output directory (or --out-dir)");
  report_cmd->add_option("--levels", report.levels, "Quantile probability levels in percent");

  auto* pipeline_cmd = app.add_subcommand("pipeline", "ingest, detect, estimate and report in one run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  spdlog::set_level(spdlog::level::from_str(log_level));
  if (seed_opt->count() > 0) g.seed = seed;
  synth.seed = synth_seed;

  try {
    if (ingest_cmd->parsed()) return run_ingest(g, ingest);
    if (detect_cmd->parsed()) return run_detect(g, detect);
    if (estimate_cmd->parsed()) return run_estimate(g, estimate);
    if (synth_cmd->parsed()) return run_synth(g, synth);
    if (experiment_cmd->parsed()) return run_experiment(g, study);
    if (report_cmd->parsed()) return run_report(g, report);
    if (pipeline_cmd->parsed()) return run_pipeline(g);
  } catch (const IoError& e) {
    spdlog::error("{}", e.what());
    return 2;
  } catch (const CsvFormatError& e) {
    spdlog::error("{}", e.what());
    return 2;
  } catch (const UsageError& e) {
    spdlog::error("{}", e.what());
    return 2;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 2;
}
