#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "stocap/estimators.hpp"
#include "stocap/experiments.hpp"
#include "stocap/metrics.hpp"
#include "stocap/regression.hpp"
#include "stocap/synthetic.hpp"
#include "support.hpp"

using namespace stocap;

namespace {

std::mt19937_64& rng() {
  static std::mt19937_64 engine(20240611);
  return engine;
}

double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }

IntensityHistogram random_histogram(int levels, int lo, int hi, int max_count) {
  IntensityHistogram h;
  for (int i = 0; i < levels; ++i) h.add(uniform_int(lo, hi), static_cast<std::uint64_t>(uniform_int(1, max_count)));
  return h;
}

}  // namespace

TEST_CASE("quantile inverts the cdf") {
  for (int trial = 0; trial < 500; ++trial) {
    const WeibullParams p(uniform(50, 250), uniform(1.5, 12));
    const double x = uniform(0.2, 1.1) * p.scale();
    const double f = weibull_cdf(p, x);
    CHECK(std::abs(weibull_quantile(p, f) - x) <= 1e-9 * x);
    const double q = uniform(1e-6, 0.999);
    CHECK(weibull_cdf(p, weibull_quantile(p, q)) == doctest::Approx(q).epsilon(1e-12));
  }
}

TEST_CASE("cdf is strictly increasing") {
  for (int trial = 0; trial < 500; ++trial) {
    const WeibullParams p(uniform(50, 250), uniform(1.5, 12));
    double a = uniform(0.3, 1.2) * p.scale();
    double b = uniform(0.3, 1.2) * p.scale();
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    CHECK(weibull_cdf(p, a) < weibull_cdf(p, b));
  }
}

TEST_CASE("cumulative curves are non-decreasing and end at the profile total") {
  for (int trial = 0; trial < 100; ++trial) {
    const auto h = random_histogram(40, 20, 160, 200);
    const IntensityBounds b{uniform_int(10, 60), uniform_int(100, 180)};
    const auto prof = breakdown_profile(h, weibull_capacity({uniform(100, 200), uniform(3, 10)}), b);
    const auto c = cumulative_frequency(prof);
    CHECK(std::is_sorted(c.values.begin(), c.values.end()));
    double sum = 0.0;
    for (double x : prof.expected) sum += x;
    CHECK(std::abs(c.final_value() - sum) <= 1e-12 * std::max(1.0, sum));
  }
}

TEST_CASE("breakdown profile is linear in the record counts") {
  for (int trial = 0; trial < 50; ++trial) {
    const auto h = random_histogram(30, 40, 150, 50);
    IntensityHistogram doubled = h;
    for (auto& [level, n] : doubled.counts) n *= 2;
    const auto cdf = weibull_capacity({uniform(100, 200), uniform(3, 10)});
    const IntensityBounds b{30, 160};
    const auto one = breakdown_profile(h, cdf, b);
    const auto two = breakdown_profile(doubled, cdf, b);
    for (std::size_t i = 0; i < one.expected.size(); ++i) CHECK(two.expected[i] == 2.0 * one.expected[i]);
  }
}

TEST_CASE("plm survival is non-increasing and within [0, 1]") {
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<PlmRecord> r;
    for (int i = 0; i < 15; ++i) r.push_back({uniform_int(50, 150), uniform(0, 20), uniform(0, 2)});
    const auto c = plm_estimate(r);
    double prev = 1.0;
    for (std::size_t j = 0; j < c.survival.size(); ++j) {
      CHECK(c.survival[j] <= prev + 1e-15);
      CHECK(c.survival[j] >= 0.0);
      CHECK(c.cdf[j] == 1.0 - c.survival[j]);
      CHECK(c.failures[j] <= c.at_risk[j]);
      prev = c.survival[j];
    }
  }
}

TEST_CASE("plm without censoring equals the empirical survival of the failures") {
  for (int trial = 0; trial < 200; ++trial) {
    const int n = uniform_int(1, 20);
    std::vector<int> failures;
    std::vector<PlmRecord> r;
    for (int i = 0; i < n; ++i) {
      failures.push_back(uniform_int(80, 100));
      r.push_back({failures.back(), 0.0, 1.0});
    }
    const auto c = plm_estimate(r);
    for (double x = 79.5; x <= 101.0; x += 0.5) {
      const auto below = std::count_if(failures.begin(), failures.end(), [&](int f) { return f < x; });
      const double brute = 1.0 - static_cast<double>(below) / n;
      CHECK(c.survival_at(x) == doctest::Approx(brute).epsilon(1e-12));
    }
  }
}

TEST_CASE("fit objective equals an independent SSE") {
  const auto hist = surrogate_profile().histogram;
  const IntensityBounds bounds{41, 114};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto pseudo = generate_pseudo_empirical(hist, {150.0, 6.5}, bounds, {seed, 0.5});
    const auto fit = fit_cfb(hist, pseudo.curve, bounds);
    const auto oracle = test::naive_cfb(hist, fit.params.scale(), fit.params.shape(), bounds.lower, bounds.upper);
    double sse = 0.0;
    for (std::size_t i = 0; i < oracle.size(); ++i) {
      const double d = oracle[i] - pseudo.curve.values[i];
      sse += d * d;
      CHECK(fit.predicted.values[i] == doctest::Approx(oracle[i]).epsilon(1e-9));
    }
    CHECK(fit.sse == doctest::Approx(sse).epsilon(1e-9));
  }
}

TEST_CASE("fit is invariant to scaling records and target together") {
  const auto hist = surrogate_profile().histogram;
  const IntensityBounds bounds{41, 114};
  const auto pseudo = generate_pseudo_empirical(hist, {150.0, 6.5}, bounds, {11, 0.5});
  const auto base = fit_cfb(hist, pseudo.curve, bounds);
  IntensityHistogram tripled = hist;
  for (auto& [level, n] : tripled.counts) n *= 3;
  CfbCurve target = pseudo.curve;
  for (auto& v : target.values) v *= 3.0;
  const auto scaled = fit_cfb(tripled, target, bounds);
  CHECK(scaled.params.scale() == doctest::Approx(base.params.scale()).epsilon(1e-5));
  CHECK(scaled.params.shape() == doctest::Approx(base.params.shape()).epsilon(1e-5));
  CHECK(scaled.sse == doctest::Approx(9.0 * base.sse).epsilon(1e-6));
}

TEST_CASE("split_count conserves the expected count") {
  for (int trial = 0; trial < 1000; ++trial) {
    const double b = uniform(0.0, 50.0);
    const auto s = split_count(b);
    CHECK(std::abs(static_cast<double>(s.trials) * s.probability - b) <= 1e-12 * std::max(1.0, b));
    CHECK(s.probability <= 0.5);
  }
}

TEST_CASE("generated counts have the binomial mean and stay within [0, n]") {
  const BreakdownProfile p{{100, 103}, {0.1, 0.5, 1.0, 3.7}};
  std::vector<double> sum(4, 0.0);
  const int runs = 10000;
  for (int seed = 0; seed < runs; ++seed) {
    const auto c = generate_counts(p, {static_cast<std::uint64_t>(seed), 0.5});
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(c[j] <= split_count(p.expected[j]).trials);
      sum[j] += static_cast<double>(c[j]);
    }
  }
  for (std::size_t j = 0; j < 4; ++j) {
    const auto s = split_count(p.expected[j]);
    const double se = std::sqrt(s.trials * s.probability * (1 - s.probability) / runs);
    CHECK(std::abs(sum[j] / runs - p.expected[j]) <= 3.0 * se);
  }
}

TEST_CASE("pseudo-empirical curves are non-decreasing and reproducible") {
  const auto hist = surrogate_profile().histogram;
  const IntensityBounds bounds{41, 114};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto a = generate_pseudo_empirical(hist, {150.0, 6.5}, bounds, {seed, 0.5});
    CHECK(std::is_sorted(a.curve.values.begin(), a.curve.values.end()));
    CHECK(a.curve == generate_pseudo_empirical(hist, {150.0, 6.5}, bounds, {seed, 0.5}).curve);
    CHECK(static_cast<double>(a.total) == a.curve.final_value());
  }
}

TEST_CASE("doubling demand doubles the mean realized total") {
  const auto hist = surrogate_profile().histogram;
  const auto doubled = scale_demand(hist, 2.0);
  const IntensityBounds bounds{41, 114};
  double one = 0.0, two = 0.0;
  const int runs = 2000;
  for (int seed = 0; seed < runs; ++seed) {
    one += generate_pseudo_empirical(hist, {150.0, 6.5}, bounds, {static_cast<std::uint64_t>(seed), 0.5}).total;
    two += generate_pseudo_empirical(doubled, {150.0, 6.5}, bounds, {static_cast<std::uint64_t>(seed + runs), 0.5}).total;
  }
  CHECK(two / one == doctest::Approx(2.0).epsilon(0.03));
}

TEST_CASE("curve errors are symmetric and awre with uniform weights is are") {
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(20), b(20);
    for (int i = 0; i < 20; ++i) {
      a[i] = uniform(0, 10);
      b[i] = uniform(0, 10);
    }
    const auto ab = curve_errors(a, b);
    const auto ba = curve_errors(b, a);
    CHECK(ab.sse == ba.sse);
    CHECK(ab.rmse == ba.rmse);
    CHECK(curve_errors(a, a).sse == 0.0);
    const auto re = relative_error_curve(a, b);
    const std::vector<double> w(20, uniform(0.1, 5));
    CHECK(awre(re, w) == doctest::Approx(are(re)).epsilon(1e-12));
  }
}

TEST_CASE("ols residuals are orthogonal to the design and noise-free data is recovered") {
  for (int trial = 0; trial < 50; ++trial) {
    const int n = uniform_int(10, 60);
    std::vector<DesignColumn> cols{{"x1", {}}, {"x2", {}}, {"x3", {}}};
    std::vector<double> y, exact;
    const double b0 = uniform(-2, 2), b1 = uniform(-2, 2), b2 = uniform(-2, 2), b3 = uniform(-2, 2);
    for (int i = 0; i < n; ++i) {
      const double x1 = uniform(0, 10), x2 = uniform(-5, 5), x3 = std::log(uniform(1, 100));
      cols[0].values.push_back(x1);
      cols[1].values.push_back(x2);
      cols[2].values.push_back(x3);
      exact.push_back(b0 + b1 * x1 + b2 * x2 + b3 * x3);
      y.push_back(exact.back() + uniform(-1, 1));
    }
    const auto r = ols_fit(cols, y);
    double scale = 0.0;
    for (double v : y) scale = std::max(scale, std::abs(v));
    for (const auto& c : cols) {
      double dot = 0.0, norm = 0.0;
      for (int i = 0; i < n; ++i) {
        const double fitted = r.coefficients[0] + r.coefficients[1] * cols[0].values[i] +
                              r.coefficients[2] * cols[1].values[i] + r.coefficients[3] * cols[2].values[i];
        dot += (y[i] - fitted) * c.values[i];
        norm += c.values[i] * c.values[i];
      }
      CHECK(std::abs(dot) <= 1e-8 * std::sqrt(norm) * scale * n);
    }
    CHECK(r.r_squared >= 0.0);
    CHECK(r.r_squared <= 1.0);
    for (double p : r.p_values) CHECK((p >= 0.0 && p <= 1.0));

    const auto e = ols_fit(cols, exact);
    const double want[] = {b0, b1, b2, b3};
    for (int k = 0; k < 4; ++k) CHECK(std::abs(e.coefficients[k] - want[k]) <= 1e-10 * std::max(1.0, std::abs(want[k])));
  }
}

TEST_CASE("case summaries are recomputable from their replicates") {
  const auto hist = surrogate_profile().histogram;
  const IntensityBounds bounds{41, 114};
  ExperimentCase e{"50_1", 1.0, {150.0, 6.5}, 5, 3, NoiseMode::bernoulli};
  const auto s = run_case(e, hist, bounds);
  CHECK(s.stats == summarize(s.replicates));
  const auto again = run_case(e, hist, bounds);
  REQUIRE(again.replicates.size() == s.replicates.size());
  for (std::size_t i = 0; i < s.replicates.size(); ++i) {
    CHECK(again.replicates[i].estimated == s.replicates[i].estimated);
    CHECK(again.replicates[i].errors.awre_cdf == s.replicates[i].errors.awre_cdf);
  }
}
