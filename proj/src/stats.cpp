#include "rrtsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rrtsim {

Summary summarize(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("summarize: empty sample");
  Summary s;
  s.count = static_cast<std::int64_t>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() >= 2) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    s.ci95 = 1.96 * s.sd / std::sqrt(static_cast<double>(xs.size()));
  }
  return s;
}

LinFit fit_linear(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("fit_linear: size mismatch");
  const std::size_t n = xs.size();
  if (n < 2) throw std::invalid_argument("fit_linear: needs at least 2 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_linear: constant x");
  LinFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ys[i] - (f.intercept + f.slope * xs[i]);
    ss_res += r * r;
  }
  f.r_squared = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
  f.stderr_slope = n > 2 ? std::sqrt(ss_res / static_cast<double>(n - 2) / sxx) : 0.0;
  return f;
}

LinFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("fit_loglog: size mismatch");
  if (xs.size() < 3) throw std::invalid_argument("fit_loglog: needs at least 3 points");
  std::vector<double> lx(xs.size()), ly(ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) {
      throw std::invalid_argument("fit_loglog: inputs must be strictly positive");
    }
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
  }
  return fit_linear(lx, ly);
}

double chi_square_stat(const std::vector<std::int64_t>& observed,
                       const std::vector<double>& expected) {
  if (observed.size() != expected.size()) throw std::invalid_argument("chi_square: size mismatch");
  if (observed.empty()) throw std::invalid_argument("chi_square: empty");
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (!(expected[i] > 0.0)) throw std::invalid_argument("chi_square: expectations must be > 0");
    const double diff = static_cast<double>(observed[i]) - expected[i];
    stat += diff * diff / expected[i];
  }
  return stat;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;  // advance past ties on both sides
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_critical_value(std::size_t n_a, std::size_t n_b, double alpha) {
  if (n_a == 0 || n_b == 0) throw std::invalid_argument("ks_critical_value: empty sample");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("ks_critical_value: bad alpha");
  const double c = std::sqrt(-std::log(alpha / 2.0) / 2.0);
  const double m = static_cast<double>(n_a);
  const double n = static_cast<double>(n_b);
  return c * std::sqrt((m + n) / (m * n));
}

}  // namespace rrtsim
