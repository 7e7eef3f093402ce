#pragma once

#include <cstdint>
#include <vector>

namespace rrtsim {

/// Mean / sample sd / 95% CI half-width (1.96 * sd / sqrt(n)) of a sample.
struct Summary {
  std::int64_t count = 0;
  double mean = 0.0;
  double sd = 0.0;
  double ci95 = 0.0;
};

Summary summarize(const std::vector<double>& xs);

/// Ordinary least squares y = intercept + slope * x.
struct LinFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
  double stderr_slope = 0.0;
};

/// Requires >= 2 points with non-constant x.  A constant y gives slope 0 and
/// r_squared 1 (the line is exact).
LinFit fit_linear(const std::vector<double>& xs, const std::vector<double>& ys);

/// Power-law fit: OLS on (ln x, ln y), so slope is the fitted exponent.
/// Requires >= 3 points, all coordinates strictly positive.
LinFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys);

/// Pearson chi-square statistic sum (obs - exp)^2 / exp.  Sizes must match
/// and expectations must be positive.
double chi_square_stat(const std::vector<std::int64_t>& observed,
                       const std::vector<double>& expected);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b| (tie-aware).
double ks_statistic(std::vector<double> a, std::vector<double> b);

/// Critical value c(alpha) * sqrt((m+n)/(m*n)) for the two-sample KS test.
/// c(alpha) = sqrt(-ln(alpha/2)/2).
double ks_critical_value(std::size_t n_a, std::size_t n_b, double alpha);

}  // namespace rrtsim
