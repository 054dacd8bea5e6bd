#include <doctest.h>

#include "stocap/experiments.hpp"

using namespace stocap;

namespace {

const IntensityHistogram& base() {
  static const auto h = surrogate_profile().histogram;
  return h;
}

}  // namespace

TEST_CASE("experiment bounds") {
  const auto b = experiment_bounds(base(), {150.0, 6.5});
  CHECK(b.lower > 0);
  CHECK(b.upper == (11 * base().max_level() + 9) / 10);
  const IntensityBounds full{0, base().max_level()};
  const auto curve = cumulative_frequency(breakdown_profile(base(), weibull_capacity({150.0, 6.5}), full));
  int first = 0;
  while (curve.values[static_cast<std::size_t>(first)] < 1.0) ++first;
  CHECK(b.lower == (3 * first) / 4);
  CHECK_THROWS(experiment_bounds(IntensityHistogram{}, {150.0, 6.5}));
}

TEST_CASE("run_case: rounded noise recovers the truth") {
  const auto bounds = experiment_bounds(base(), {150.0, 6.5});
  ExperimentCase e{"50_1", 1.0, {150.0, 6.5}, 1, 1, NoiseMode::rounded};
  const auto s = run_case(e, base(), bounds);
  REQUIRE(s.replicates.size() == 1);
  CHECK(s.replicates[0].errors.awre_cdf <= 0.02);
  CHECK(s.replicates[0].errors.reference_kind == ReferenceKind::theoretical);
  CHECK(s.replicates[0].errors_empirical.reference_kind == ReferenceKind::empirical);
}

TEST_CASE("run_case: replicate seeds and validation") {
  const auto bounds = experiment_bounds(base(), {150.0, 6.5});
  ExperimentCase e{"x", 1.0, {150.0, 6.5}, 3, 40, NoiseMode::bernoulli};
  const auto s = run_case(e, base(), bounds);
  REQUIRE(s.replicates.size() == 3);
  CHECK(s.replicates[0].seed == 40);
  CHECK(s.replicates[2].seed == 42);
  CHECK(s.stat("awre_cdf").max >= s.stat("awre_cdf").mean);
  CHECK_THROWS(s.stat("nonsense"));
  e.replicates = 0;
  CHECK_THROWS(run_case(e, base(), bounds));
}

TEST_CASE("run_case: a replicate without breakdowns is recorded as failed") {
  const auto bounds = experiment_bounds(base(), {150.0, 6.5});
  ExperimentCase e{"tiny", 0.002, {150.0, 6.5}, 4, 1, NoiseMode::bernoulli};
  const auto s = run_case(e, base(), bounds);
  CHECK(s.replicates.size() + s.failed_seeds.size() == 4);
  CHECK_FALSE(s.failed_seeds.empty());
}

TEST_CASE("sweep grids") {
  const auto t5 = table5_sweep();
  CHECK(t5.cases.size() == 12);
  CHECK(t5.cases[0].setting.params == WeibullParams(150.0, 6.5));
  CHECK(t5.cases[1].setting.params == WeibullParams(160.0, 7.0));
  CHECK(t5.cases[2].setting.params == WeibullParams(183.0, 7.5));
  CHECK(regression_sweep().cases.size() == 17);
}

TEST_CASE("find_scale_factor hits the target within tolerance") {
  const auto bounds = experiment_bounds(base(), {150.0, 6.5});
  for (double target : {12.0, 100.0, 250.0}) {
    const auto f = find_scale_factor(base(), {160.0, 7.0}, bounds, target, 0.05, 1000.0);
    REQUIRE(f);
    const double total =
        breakdown_profile(scale_demand(base(), *f), weibull_capacity({160.0, 7.0}), bounds).total();
    CHECK(std::abs(total - target) <= 0.05 * target);
  }
  CHECK_FALSE(find_scale_factor(base(), {150.0, 6.5}, bounds, 1e7, 0.05, 10.0));
}

TEST_CASE("sample_size_sweep: one case, one replicate, one row") {
  const auto bounds = experiment_bounds(base(), {150.0, 6.5});
  SweepConfig c;
  c.cases = {{{"1", {150.0, 6.5}}, 50.0}};
  c.replicates = 1;
  const auto r = sample_size_sweep(base(), bounds, c);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].case_id == "50_1");
  CHECK(r.rows[0].seed == 1);

  c.cases.push_back({{"1", {150.0, 6.5}}, 1e9});
  c.max_scale_factor = 100.0;
  const auto skipped = sample_size_sweep(base(), bounds, c);
  CHECK(skipped.cases.size() == 1);
  CHECK(skipped.diagnostics.size() == 1);
}

TEST_CASE("censoring sweep reaches the requested rates") {
  const IntensityBounds full{std::max(1, base().min_level()), base().max_level()};
  const auto r = censoring_sweep(base(), {0.05, 0.5, 0.99}, full);
  REQUIRE(r.points.size() == 3);
  for (const auto& p : r.points) CHECK(p.achieved_rate == doctest::Approx(p.target_rate).epsilon(1e-6));
  CHECK_THROWS(censoring_sweep(base(), {1.0}, full));
}

TEST_CASE("compare_methods is deterministic and propagates fit errors") {
  const auto bounds = experiment_bounds(base(), {150.0, 6.5});
  const auto a = compare_methods(base(), {150.0, 6.5}, bounds, 42);
  const auto b = compare_methods(base(), {150.0, 6.5}, bounds, 42);
  CHECK(a.fit_errors.awre_cdf == b.fit_errors.awre_cdf);
  CHECK(a.plm_errors.awre_cdf == b.plm_errors.awre_cdf);
  CHECK(a.ratio.awre_cdf == doctest::Approx(a.plm_errors.awre_cdf / a.fit_errors.awre_cdf));
  CHECK_THROWS_AS(compare_methods(scale_demand(base(), 0.001), {150.0, 6.5}, bounds, 1), std::domain_error);
}

TEST_CASE("awre_regression") {
  std::vector<AwreRow> rows;
  for (int i = 0; i < 40; ++i) {
    const double bd = 10.0 + 6.0 * i;
    const double y = 0.53858 + 3.7517e-4 * bd - 0.10611 * std::log(bd);
    rows.push_back({static_cast<std::uint64_t>(1000 + 37 * i + (i % 3) * 11), static_cast<std::uint64_t>(bd), y, y,
                    "c", static_cast<std::uint64_t>(i)});
  }
  const auto exact = fit_candidate(rows, {"bd_records", "ln_bd_records"});
  CHECK(exact.coefficients[0] == doctest::Approx(0.53858).epsilon(1e-8));
  CHECK(exact.coefficients[1] == doctest::Approx(3.7517e-4).epsilon(1e-8));
  CHECK(exact.coefficients[2] == doctest::Approx(-0.10611).epsilon(1e-8));

  const auto report = awre_regression(rows);
  CHECK(report.candidates.size() + report.skipped.size() == 63);
  CHECK(report.skipped.size() == 8);
  CHECK_THROWS(awre_regression(std::vector<AwreRow>(rows.begin(), rows.begin() + 10)));
}
