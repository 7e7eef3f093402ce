#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rrtsim/rng.hpp"
#include "rrtsim/stats.hpp"

using namespace rrtsim;

TEST_CASE("summarize: hand-computed mean, sample sd, ci") {
  const std::vector<double> xs{2, 4, 4, 4, 5, 5, 7, 9};
  const Summary s = summarize(xs);
  CHECK(s.count == 8);
  CHECK(s.mean == doctest::Approx(5.0).epsilon(1e-15));
  // sum of squared deviations = 32, sample variance = 32/7
  CHECK(s.sd == doctest::Approx(std::sqrt(32.0 / 7.0)).epsilon(1e-14));
  CHECK(s.ci95 == doctest::Approx(1.96 * std::sqrt(32.0 / 7.0) / std::sqrt(8.0)).epsilon(1e-14));

  const Summary one = summarize({3.5});
  CHECK(one.count == 1);
  CHECK(one.mean == 3.5);
  CHECK(one.sd == 0.0);
  CHECK(one.ci95 == 0.0);

  CHECK_THROWS_AS((void)summarize({}), std::invalid_argument);
}

TEST_CASE("fit_linear: exact line, flat line, known residuals") {
  const LinFit exact = fit_linear({0, 1, 2, 3}, {2, 5, 8, 11});
  CHECK(exact.slope == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(exact.intercept == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(exact.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(exact.stderr_slope == doctest::Approx(0.0).scale(1).epsilon(1e-12));

  // constant y: slope 0 and the exact-fit convention r^2 = 1
  const LinFit flat = fit_linear({1, 2, 3}, {4, 4, 4});
  CHECK(flat.slope == 0.0);
  CHECK(flat.intercept == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(flat.r_squared == 1.0);

  // xs {0,1,2}, ys {0,1,0}: slope 0, intercept 1/3, SSE = SST -> r^2 = 0,
  // stderr = sqrt(SSE/(n-2)/Sxx) = sqrt((2/3)/1/2) = sqrt(1/3)
  const LinFit resid = fit_linear({0, 1, 2}, {0, 1, 0});
  CHECK(resid.slope == doctest::Approx(0.0).scale(1).epsilon(1e-15));
  CHECK(resid.intercept == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(resid.r_squared == doctest::Approx(0.0).scale(1).epsilon(1e-14));
  CHECK(resid.stderr_slope == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-14));

  CHECK_THROWS_AS((void)fit_linear({1, 2}, {1}), std::invalid_argument);
  CHECK_THROWS_AS((void)fit_linear({1}, {1}), std::invalid_argument);
  CHECK_THROWS_AS((void)fit_linear({2, 2, 2}, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("fit_loglog: recovers power-law exponents") {
  // y = 3 x^2 exactly
  const LinFit sq = fit_loglog({1, 2, 4, 8}, {3, 12, 48, 192});
  CHECK(sq.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(sq.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(sq.r_squared == doctest::Approx(1.0).epsilon(1e-12));

  // y = 5 x^1.5 with +-2% multiplicative noise
  RngStream rng(909, 0);
  std::vector<double> xs, ys;
  for (int i = 1; i <= 24; ++i) {
    const double x = 0.5 * i;
    xs.push_back(x);
    ys.push_back(5.0 * std::pow(x, 1.5) * (1.0 + 0.04 * (rng.next_double() - 0.5)));
  }
  const LinFit noisy = fit_loglog(xs, ys);
  CHECK(noisy.slope > 1.4);
  CHECK(noisy.slope < 1.6);
  CHECK(noisy.r_squared > 0.99);
  CHECK(noisy.stderr_slope > 0.0);

  CHECK_THROWS_AS((void)fit_loglog({1, 2}, {1, 2}), std::invalid_argument);
  CHECK_THROWS_AS((void)fit_loglog({1, 2, 3}, {1, 2}), std::invalid_argument);
  CHECK_THROWS_AS((void)fit_loglog({1, 2, 0}, {1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS((void)fit_loglog({1, 2, 3}, {1, -2, 3}), std::invalid_argument);
}

TEST_CASE("chi-square statistic") {
  CHECK(chi_square_stat({10, 20, 30}, {10, 20, 30}) == doctest::Approx(0.0).scale(1).epsilon(1e-15));
  // (10-15)^2/15 + (20-15)^2/15 + 0 = 10/3
  CHECK(chi_square_stat({10, 20, 30}, {15, 15, 30}) == doctest::Approx(10.0 / 3.0).epsilon(1e-14));
  CHECK_THROWS_AS((void)chi_square_stat({1, 2}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS((void)chi_square_stat({}, {}), std::invalid_argument);
  CHECK_THROWS_AS((void)chi_square_stat({1, 2}, {1.0, 0.0}), std::invalid_argument);
}

TEST_CASE("two-sample KS statistic: hand cases and symmetry") {
  CHECK(ks_statistic({1, 2, 3}, {1, 2, 3}) == doctest::Approx(0.0).scale(1).epsilon(1e-15));
  CHECK(ks_statistic({1, 2}, {3, 4}) == doctest::Approx(1.0).epsilon(1e-15));
  // F_a steps 0.25/0.75/1.0 at 1/2/3; F_b steps 0.5/1.0 at 2/4 -> sup gap 0.5 at x=3
  CHECK(ks_statistic({1, 2, 2, 3}, {2, 4}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(ks_statistic({2, 4}, {1, 2, 2, 3}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS((void)ks_statistic({}, {1.0}), std::invalid_argument);

  // same distribution stays under the alpha=0.001 critical value;
  // U vs U^2 concentrates a gap of ~1/4 and blows past it
  RngStream rng(313, 0);
  std::vector<double> u1, u2, usq;
  for (int i = 0; i < 5000; ++i) {
    u1.push_back(rng.next_double());
    u2.push_back(rng.next_double());
    const double v = rng.next_double();
    usq.push_back(v * v);
  }
  const double crit = ks_critical_value(u1.size(), u2.size(), 0.001);
  CHECK(ks_statistic(u1, u2) < crit);
  CHECK(ks_statistic(u1, usq) > 0.2);
}

TEST_CASE("KS critical value formula") {
  // c(alpha) = sqrt(-ln(alpha/2)/2); at alpha=0.001, c = 1.9494745...
  const double c001 = std::sqrt(-std::log(0.0005) / 2.0);
  CHECK(ks_critical_value(10000, 10000, 0.001) ==
        doctest::Approx(c001 * std::sqrt(2.0 / 10000.0)).epsilon(1e-14));
  const double c05 = std::sqrt(-std::log(0.025) / 2.0);
  CHECK(ks_critical_value(100, 400, 0.05) ==
        doctest::Approx(c05 * std::sqrt(500.0 / 40000.0)).epsilon(1e-14));
  CHECK(c001 == doctest::Approx(1.9494746035204051).epsilon(1e-12));
  CHECK_THROWS_AS((void)ks_critical_value(0, 5, 0.05), std::invalid_argument);
  CHECK_THROWS_AS((void)ks_critical_value(5, 5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)ks_critical_value(5, 5, 1.0), std::invalid_argument);
}
