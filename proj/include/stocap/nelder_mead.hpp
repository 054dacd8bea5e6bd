#pragma once

#include <functional>
#include <span>
#include <vector>

namespace stocap {

struct NelderMeadOptions {
  double f_tol = 1e-10;  // absolute spread of simplex values
  double x_tol = 1e-8;   // max vertex distance from the best vertex, per coordinate
  int max_iterations = 5000;
  double initial_step = 0.05;
  int max_restarts = 3;  // fresh simplex around the optimum after convergence
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

// Downhill simplex minimizer with standard coefficients (1, 2, 0.5, 0.5).
NelderMeadResult nelder_mead(const Objective& f, std::vector<double> start,
                             const NelderMeadOptions& options = {});

}  // namespace stocap
