#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace stocap {

struct DesignColumn {
  std::string name;
  std::vector<double> values;
};

struct RegressionResult {
  std::vector<std::string> names;  // "intercept" first when fitted
  std::vector<double> coefficients;
  std::vector<double> std_errors;
  std::vector<double> t_stats;
  std::vector<double> p_values;  // two-sided, Student t with n - k df
  std::vector<double> lower95;
  std::vector<double> upper95;
  double r_squared = 0.0;
  std::size_t observations = 0;
  std::size_t degrees_of_freedom = 0;
  bool intercept = true;

  bool all_significant(double alpha) const;
};

class CollinearityError : public std::domain_error {
 public:
  CollinearityError(const std::string& what, std::vector<std::string> columns)
      : std::domain_error(what), columns_(std::move(columns)) {}
  const std::vector<std::string>& columns() const { return columns_; }

 private:
  std::vector<std::string> columns_;
};

// Ordinary least squares through a column-pivoted QR decomposition.
RegressionResult ols_fit(const std::vector<DesignColumn>& columns, std::span<const double> y,
                         bool intercept = true);

}  // namespace stocap
