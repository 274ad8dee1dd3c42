// Statistical helper tests: hand-checked KS values, closed-form OLS, and
// distributional sanity for the resampling error estimates.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "recur/rng.hpp"
#include "recur/stats.hpp"

using namespace recur;

TEST_CASE("normal and exponential reference CDFs") {
  REQUIRE(normal_cdf(0.0) == Catch::Approx(0.5).epsilon(1e-14));
  REQUIRE(normal_cdf(1.96) == Catch::Approx(0.9750021048517795).epsilon(1e-12));
  REQUIRE(normal_cdf(-1.0) == Catch::Approx(0.15865525393145707).epsilon(1e-12));
  REQUIRE(exponential_cdf(0.0, 1.0) == 0.0);
  REQUIRE(exponential_cdf(1.0, 1.0) == Catch::Approx(1.0 - std::exp(-1.0)));
}

TEST_CASE("KS statistic on a hand case") {
  // sample {0.1, 0.2, 0.3} against U[0,1]: sup gap is 1 - 0.3 = 0.7
  double d = ks_statistic({0.1, 0.2, 0.3}, [](double t) { return t; });
  REQUIRE(d == Catch::Approx(0.7).epsilon(1e-14));
}

TEST_CASE("KS statistic is small under the null") {
  Rng rng(5);
  std::vector<double> u(10000);
  for (auto& x : u) x = rng.next_u01();
  double d = ks_statistic(u, [](double t) { return t < 0 ? 0.0 : (t > 1 ? 1.0 : t); });
  REQUIRE(d < 0.02);

  std::vector<double> e(10000);
  for (auto& x : e) x = -std::log(1.0 - rng.next_u01()) / 2.5;
  double de = ks_statistic(e, [](double t) { return exponential_cdf(t, 2.5); });
  REQUIRE(de < 0.02);
}

TEST_CASE("OLS recovers an exact line and propagates errors") {
  std::vector<double> xs = {8, 12, 16};
  std::vector<double> ys = {8 * 0.7 + 0.3, 12 * 0.7 + 0.3, 16 * 0.7 + 0.3};
  auto fit = ols_fit(xs, ys);
  REQUIRE(fit.slope == Catch::Approx(0.7).epsilon(1e-12));
  REQUIRE(fit.intercept == Catch::Approx(0.3).margin(1e-10));

  // equal per-point errors sigma: slope error = sigma / sqrt(sum (x-xbar)^2)
  double se = ols_slope_stderr(xs, std::vector<double>{0.5, 0.5, 0.5});
  REQUIRE(se == Catch::Approx(0.5 / std::sqrt(32.0)).epsilon(1e-12));
}

TEST_CASE("log-sum-exp tree handles extremes") {
  REQUIRE(log_sum_exp(std::vector<double>{}) == neg_inf);
  REQUIRE(log_sum_exp(std::vector<double>{3.0}) == 3.0);
  REQUIRE(log_sum_exp2(1000.0, 1000.0) ==
          Catch::Approx(1000.0 + std::log(2.0)).epsilon(1e-14));
  REQUIRE(log_sum_exp2(neg_inf, 2.0) == 2.0);
  std::vector<double> vals = {-1.0, neg_inf, 0.5, 2.0};
  double direct = std::log(std::exp(-1.0) + std::exp(0.5) + std::exp(2.0));
  REQUIRE(log_sum_exp(vals) == Catch::Approx(direct).epsilon(1e-14));
}

TEST_CASE("jackknife error of log-mean-exp tracks the delta-method rate") {
  Rng rng(11);
  const std::size_t n = 20000;
  std::vector<double> logs(n);
  for (auto& v : logs) {
    double g = std::sqrt(-2.0 * std::log(1.0 - rng.next_u01())) *
               std::cos(6.283185307179586 * rng.next_u01());
    v = 0.3 * g;  // lognormal with modest spread
  }
  double se = jackknife_stderr_lse(logs, 50);
  // delta method: sd(exp v)/ (mean(exp v) sqrt(n))
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::exp(logs[i]);
  double expected = std::sqrt(sample_variance(x)) / (mean(x) * std::sqrt(double(n)));
  REQUIRE(se / expected > 0.6);
  REQUIRE(se / expected < 1.6);
}

TEST_CASE("bootstrap stderr of the mean matches sd/sqrt(n)") {
  Rng rng(13);
  std::vector<double> x(4000);
  for (auto& v : x) v = rng.next_u01();
  double se = bootstrap_stderr_mean(x, 300, 99);
  double expected = std::sqrt(sample_variance(x) / double(x.size()));
  REQUIRE(se / expected > 0.8);
  REQUIRE(se / expected < 1.25);
}

TEST_CASE("Hill estimator recovers a Pareto tail index") {
  Rng rng(17);
  std::vector<double> x(100000);
  for (auto& v : x) v = std::pow(1.0 - rng.next_u01(), -0.5);  // index 2
  double alpha_hat = hill_tail_exponent(std::move(x), 1000);
  REQUIRE(alpha_hat > 1.8);
  REQUIRE(alpha_hat < 2.2);
}
