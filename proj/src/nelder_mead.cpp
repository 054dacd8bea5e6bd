#include "stocap/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace stocap {
namespace {

struct Vertex {
  std::vector<double> x;
  double f;
};

struct Run {
  Vertex best;
  int iterations = 0;
  bool converged = false;
};

Run simplex_run(const Objective& f, const std::vector<double>& start, const NelderMeadOptions& opt,
                int& evaluations, int iteration_budget) {
  const std::size_t n = start.size();
  auto eval = [&](const std::vector<double>& x) {
    ++evaluations;
    double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };

  std::vector<Vertex> s;
  s.reserve(n + 1);
  s.push_back({start, eval(start)});
  for (std::size_t i = 0; i < n; ++i) {
    auto x = start;
    x[i] += opt.initial_step;
    s.push_back({x, eval(x)});
  }

  auto order = [&] {
    std::stable_sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
  };
  auto point = [&](const std::vector<double>& c, const std::vector<double>& w, double t) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = c[i] + t * (w[i] - c[i]);
    return x;
  };

  Run run;
  order();
  for (; run.iterations < iteration_budget; ++run.iterations) {
    double spread = s.back().f - s.front().f;
    double size = 0.0;
    for (std::size_t v = 1; v <= n; ++v)
      for (std::size_t i = 0; i < n; ++i)
        size = std::max(size, std::abs(s[v].x[i] - s[0].x[i]));
    if (spread < opt.f_tol && size < opt.x_tol) {
      run.converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t i = 0; i < n; ++i) centroid[i] += s[v].x[i] / static_cast<double>(n);

    Vertex& worst = s.back();
    Vertex reflected{point(centroid, worst.x, -1.0), 0.0};
    reflected.f = eval(reflected.x);

    if (reflected.f < s.front().f) {
      Vertex expanded{point(centroid, worst.x, -2.0), 0.0};
      expanded.f = eval(expanded.x);
      worst = expanded.f < reflected.f ? std::move(expanded) : std::move(reflected);
    } else if (reflected.f < s[n - 1].f) {
      worst = std::move(reflected);
    } else {
      const bool outside = reflected.f < worst.f;
      Vertex contracted{point(centroid, outside ? reflected.x : worst.x, 0.5), 0.0};
      contracted.f = eval(contracted.x);
      if (contracted.f < (outside ? reflected.f : worst.f)) {
        worst = std::move(contracted);
      } else {
        for (std::size_t v = 1; v <= n; ++v) {
          s[v].x = point(s[0].x, s[v].x, 0.5);
          s[v].f = eval(s[v].x);
        }
      }
    }
    order();
  }
  run.best = s.front();
  return run;
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> start,
                             const NelderMeadOptions& options) {
  if (start.empty()) throw std::invalid_argument("nelder_mead: empty start point");

  NelderMeadResult result;
  int budget = options.max_iterations;
  Run run = simplex_run(f, start, options, result.evaluations, budget);
  result.iterations = run.iterations;
  budget -= run.iterations;

  // Restart until a fresh simplex no longer improves the value.
  for (int r = 0; r < options.max_restarts && run.converged && budget > 0; ++r) {
    Run again = simplex_run(f, run.best.x, options, result.evaluations, budget);
    result.iterations += again.iterations;
    budget -= again.iterations;
    const bool improved = again.best.f < run.best.f - options.f_tol;
    if (again.best.f <= run.best.f) run.best = again.best;
    run.converged = again.converged;
    if (!improved) break;
  }

  result.x = std::move(run.best.x);
  result.value = run.best.f;
  result.converged = run.converged;
  return result;
}

}  // namespace stocap
