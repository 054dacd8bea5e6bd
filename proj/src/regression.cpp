#include "stocap/regression.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <boost/math/distributions/students_t.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

namespace stocap {

bool RegressionResult::all_significant(double alpha) const {
  for (std::size_t i = intercept ? 1 : 0; i < p_values.size(); ++i)
    if (!(p_values[i] < alpha)) return false;
  return true;
}

RegressionResult ols_fit(const std::vector<DesignColumn>& columns, std::span<const double> y,
                         bool intercept) {
  const auto n = static_cast<Eigen::Index>(y.size());
  RegressionResult out;
  out.intercept = intercept;
  if (intercept) out.names.push_back("intercept");
  for (const auto& c : columns) {
    if (static_cast<Eigen::Index>(c.values.size()) != n)
      throw std::invalid_argument(fmt::format("ols_fit: column '{}' has {} rows, response has {}",
                                              c.name, c.values.size(), n));
    out.names.push_back(c.name);
  }
  const auto k = static_cast<Eigen::Index>(out.names.size());
  if (k == 0) throw std::invalid_argument("ols_fit: empty design");
  if (n < k + 1)
    throw std::invalid_argument(fmt::format("ols_fit: {} rows cannot support {} coefficients", n, k));

  Eigen::MatrixXd x(n, k);
  Eigen::Index col = 0;
  if (intercept) x.col(col++).setOnes();
  for (const auto& c : columns) x.col(col++) = Eigen::Map<const Eigen::VectorXd>(c.values.data(), n);
  const Eigen::Map<const Eigen::VectorXd> response(y.data(), n);

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  if (qr.rank() < k) {
    std::vector<std::string> dropped;
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index i = qr.rank(); i < k; ++i)
      dropped.push_back(out.names[static_cast<std::size_t>(perm(i))]);
    throw CollinearityError(
        fmt::format("ols_fit: design is rank deficient; collinear columns: {}",
                    fmt::join(dropped, ", ")),
        dropped);
  }

  const Eigen::VectorXd beta = qr.solve(response);
  const Eigen::VectorXd residual = response - x * beta;
  const double rss = residual.squaredNorm();
  const auto df = static_cast<double>(n - k);
  const double sigma2 = rss / df;

  // (X'X)^-1 = P R^-1 R^-T P'
  const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd r_inv =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
  const Eigen::MatrixXd unscaled = r_inv * r_inv.transpose();
  const auto& perm = qr.colsPermutation().indices();

  const boost::math::students_t dist(df);
  const double t_crit = boost::math::quantile(boost::math::complement(dist, 0.025));

  out.observations = static_cast<std::size_t>(n);
  out.degrees_of_freedom = static_cast<std::size_t>(n - k);
  out.coefficients.resize(static_cast<std::size_t>(k));
  out.std_errors.resize(out.coefficients.size());
  out.t_stats.resize(out.coefficients.size());
  out.p_values.resize(out.coefficients.size());
  out.lower95.resize(out.coefficients.size());
  out.upper95.resize(out.coefficients.size());
  for (Eigen::Index pi = 0; pi < k; ++pi) {
    const auto j = static_cast<std::size_t>(perm(pi));
    const double b = beta(static_cast<Eigen::Index>(j));
    const double se = std::sqrt(sigma2 * unscaled(pi, pi));
    double t = 0.0;
    double p = 1.0;
    if (se > 0.0) {
      t = b / se;
      p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
    } else if (b != 0.0) {
      t = std::copysign(std::numeric_limits<double>::infinity(), b);
      p = 0.0;
    }
    out.coefficients[j] = b;
    out.std_errors[j] = se;
    out.t_stats[j] = t;
    out.p_values[j] = std::min(1.0, p);
    out.lower95[j] = b - t_crit * se;
    out.upper95[j] = b + t_crit * se;
  }

  const double mean = intercept ? response.mean() : 0.0;
  const double tss = (response.array() - mean).square().sum();
  out.r_squared = tss > 0.0 ? 1.0 - rss / tss : 1.0;
  return out;
}

}  // namespace stocap
