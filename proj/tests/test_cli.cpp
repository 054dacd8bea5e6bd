#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "commands.hpp"
#include "stocap/manifest.hpp"
#include "stocap/report.hpp"
#include "stocap/svg.hpp"

using namespace stocap;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "stocap_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args) {
  const std::string cmd =
      "cd '" STOCAP_SOURCE_DIR "' && '" STOCAP_BIN "' " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

int run_capture(const std::string& args, const fs::path& log) {
  const std::string cmd = "cd '" STOCAP_SOURCE_DIR "' && '" STOCAP_BIN "' " + args + " >'" +
                          log.string() + "' 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

EstimateBundle weibull_bundle(double scale, double shape) {
  Json j = {{"method", "cfb"},
            {"bounds", {{"lower", 60}, {"upper", 150}}},
            {"params", {{"scale", scale}, {"shape", shape}}}};
  return j.get<EstimateBundle>();
}

}  // namespace

TEST_CASE("serialization round trips") {
  IntensityHistogram h;
  h.add(100, 3);
  h.add(120, 7);
  const Json hj = h;
  CHECK(hj.dump() == "[[100,3],[120,7]]");
  CHECK(hj.get<IntensityHistogram>().counts == h.counts);

  const CfbCurve c{{1, 2, 3}, {0.0, 1.0, 2.5}};
  CHECK(Json(c).get<CfbCurve>() == c);

  const IntensityBounds b{41, 114};
  CHECK(Json(b).get<IntensityBounds>() == b);

  const WeibullParams w(150.0, 6.5);
  CHECK(Json(w).get<WeibullParams>() == w);

  const std::vector<PlmRecord> recs{{100, 5.0, 1.0}, {110, 2.0, 2.0}};
  const auto plm = plm_estimate(recs);
  const auto back = Json(plm).get<PlmCurve>();
  CHECK(back.levels == plm.levels);
  CHECK(back.cdf == plm.cdf);
}

TEST_CASE("sha256 of a known string") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("manifest paths and clock") {
  CHECK(manifest_path_for_dir("out") == fs::path("out") / "manifest.json");
  CHECK(manifest_path_for_file("out/x.json") == fs::path("out/x.json.manifest.json"));
  CHECK(Clock("1970-01-01T00:00:00Z").now() == "1970-01-01T00:00:00Z");
  const auto now = Clock().now();
  CHECK(now.size() == 20);
  CHECK(now.back() == 'Z');
}

TEST_CASE("svg rendering") {
  Chart chart;
  chart.title = "t";
  chart.series.push_back({"a", {0.0, 1.0, 2.0}, {0.0, 1.0, 4.0}, SeriesStyle::line, "#000", false});
  chart.series.push_back({"b", {0.0, 1.0}, {1.0, 2.0}, SeriesStyle::points, "#f00", false});
  chart.notices.push_back("note");
  chart.generated_at = "1970-01-01T00:00:00Z";
  const auto svg = render_svg(chart);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("<path") != std::string::npos);
  CHECK(svg.find("<circle") != std::string::npos);
  CHECK(svg.find("class=\"notice\"") != std::string::npos);
  CHECK(svg.find("1970-01-01T00:00:00Z") != std::string::npos);
  CHECK(svg == render_svg(chart));
}

TEST_CASE("quantile table matches the Weibull quantile") {
  const auto a = weibull_bundle(150.0, 6.5);
  const auto b = weibull_bundle(160.0, 7.0);
  const auto t = quantile_table(a, &b);
  REQUIRE(t.rows.size() == default_quantile_levels().size());
  for (const auto& r : t.rows) {
    CHECK(r.a == doctest::Approx(weibull_quantile({150.0, 6.5}, r.probability)).epsilon(1e-12));
    CHECK(*r.rel_diff == doctest::Approx(100.0 * (*r.b - r.a) / r.a));
  }
  REQUIRE(t.mean_abs_diff);
  const auto csv = quantile_csv(t);
  CHECK(csv.rfind("probability_pct,intensity_a,intensity_b,abs_diff,rel_diff_pct\n", 0) == 0);
  CHECK(csv.find("mean_abs,") != std::string::npos);

  const auto single = quantile_csv(quantile_table(a, nullptr));
  CHECK(single.rfind("probability_pct,intensity_a\n", 0) == 0);
  CHECK(single.find("mean_abs") == std::string::npos);
}

TEST_CASE("PLM quantile is the first level reaching p") {
  const std::vector<PlmRecord> recs{{100, 8.0, 1.0}, {110, 4.0, 1.0}, {120, 0.0, 2.0}};
  EstimateBundle b;
  b.method = EstimateMethod::plm;
  b.bounds = {90, 130};
  b.plm = plm_estimate(recs);
  b.cdf = b.plm->cdf_on(b.bounds);
  CHECK(bundle_quantile(b, 0.05) == 100.0);
  CHECK(bundle_quantile(b, 0.19) == 110.0);
  CHECK(bundle_quantile(b, 0.2) == 120.0);
  CHECK(bundle_quantile(b, 0.99) == 120.0);
  const auto chart = overlay_chart(b, nullptr, std::nullopt);
  REQUIRE(!chart.notices.empty());
  CHECK(chart.notices[0].find(kPlmBanner) != std::string::npos);
  CHECK(parse_method("plm") == EstimateMethod::plm);
  CHECK_THROWS(parse_method("kaplan"));
}

TEST_CASE("write_report files") {
  const auto dir = scratch("report");
  const auto a = weibull_bundle(150.0, 6.5);
  const auto only_a = write_report(a, nullptr, dir, std::nullopt);
  CHECK(fs::exists(dir / "overlay.svg"));
  CHECK_FALSE(fs::exists(dir / "relative_difference.csv"));
  const auto b = weibull_bundle(160.0, 7.0);
  write_report(a, &b, dir, std::nullopt);
  const auto rel = read_text_file(dir / "relative_difference.csv");
  CHECK(std::count(rel.begin(), rel.end(), '\n') == 1000);
  CHECK(only_a.written.size() == 2);
}

TEST_CASE("experiment config defaults") {
  const auto t3 = cli::default_experiment_config("table3");
  CHECK(t3.at("case").at("replicates") == 15);
  CHECK(t3.contains("seed"));
  CHECK_THROWS(cli::default_experiment_config("table99"));
  const auto p = cli::default_pipeline_config();
  CHECK(p.at("method") == "cfb");
  CHECK(p.contains("imin"));
}

TEST_CASE("pipeline end to end") {
  const auto dir = scratch("pipeline");
  const auto out = dir / "run";
  REQUIRE(run("--fixed-clock --config data/pipeline_config.json --out-dir '" + out.string() +
              "' pipeline") == 0);
  for (const char* f : {"minutes.csv", "detection.json", "estimate.json", "overlay.svg",
                        "quantiles.csv", "manifest.json"})
    CHECK(fs::exists(out / f));

  const auto manifest = read_json_file(out / "manifest.json");
  CHECK(manifest.at("subcommand") == "pipeline");
  CHECK(manifest.at("started_at") == cli::kFixedClock);
  CHECK(manifest.at("inputs").at(0).at("sha256") == file_sha256(fs::path(STOCAP_SOURCE_DIR) /
                                                                "data/sample_events.csv"));

  const auto rerun = dir / "rerun";
  REQUIRE(run("--config '" + (out / "manifest.json").string() + "' --out-dir '" + rerun.string() +
              "' pipeline") == 0);
  for (const char* f : {"minutes.csv", "detection.json", "estimate.json", "overlay.svg",
                        "quantiles.csv"})
    CHECK(read_text_file(out / f) == read_text_file(rerun / f));
}

TEST_CASE("pipeline matches the committed golden outputs") {
  const auto out = scratch("golden") / "run";
  REQUIRE(run("--fixed-clock --config data/pipeline_config.json --out-dir '" + out.string() +
              "' pipeline") == 0);
  const fs::path golden = fs::path(STOCAP_SOURCE_DIR) / "tests/golden";
  for (const char* f : {"detection.json", "estimate.json", "quantiles.csv"})
    CHECK(read_text_file(out / f) == read_text_file(golden / f));
}

TEST_CASE("cli errors exit with 2 and name the problem") {
  const auto dir = scratch("errors");
  const auto cfg = dir / "cfg.json";
  write_text_file(cfg, R"({"input": "data/missing.csv"})");
  const auto log = dir / "log.txt";
  CHECK(run_capture("--config '" + cfg.string() + "' --out-dir '" + (dir / "o").string() +
                        "' pipeline",
                    log) == 2);
  CHECK(read_text_file(log).find("data/missing.csv") != std::string::npos);
  CHECK(run("--config '" + (dir / "nope.json").string() + "' pipeline") == 2);
  CHECK(run("--no-such-flag") == 2);
  CHECK(run("estimate --method bogus --detection x.json") == 2);
}

TEST_CASE("synth is reproducible from its seed") {
  const auto dir = scratch("synth");
  REQUIRE(run("--fixed-clock synth --seed 7 --out '" + (dir / "a.json").string() + "'") == 0);
  REQUIRE(run("--fixed-clock synth --seed 7 --out '" + (dir / "b.json").string() + "'") == 0);
  CHECK(read_text_file(dir / "a.json") == read_text_file(dir / "b.json"));
  CHECK(fs::exists(dir / "a.json.manifest.json"));
}
