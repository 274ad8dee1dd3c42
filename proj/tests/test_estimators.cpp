// Estimator-layer tests: replay determinism, worker-count invariance of the
// reductions, the definition-level coupling between hitting and return times,
// certified censoring direction, and small-scale statistical sanity of every
// fluctuation check against thermo's exact constants.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "recur/estimators.hpp"
#include "recur/fluctuations.hpp"
#include "recur/markov.hpp"
#include "recur/thermo.hpp"

using namespace recur;

namespace {

const MarkovSpec& bern73() {
  static MarkovSpec s = make_bernoulli({0.7, 0.3});
  return s;
}

const MarkovSpec& bern55() {
  static MarkovSpec s = make_bernoulli({0.5, 0.5});
  return s;
}

EstimationPlan small_plan(unsigned n, std::uint64_t samples = 500,
                          std::uint64_t budget = 100000) {
  return EstimationPlan{bern73(), 42, {n}, {-2.0, -0.5, 0.0, 1.0, 2.0},
                        samples, budget, 0};
}

}  // namespace

TEST_CASE("plan validation") {
  auto p = small_plan(8);
  REQUIRE_NOTHROW(validate_plan(p));
  p.samples = 50;
  REQUIRE_THROWS_AS(validate_plan(p), std::invalid_argument);
  p = small_plan(8);
  p.budget = 10;
  REQUIRE_THROWS_AS(validate_plan(p), std::invalid_argument);
  p = small_plan(8);
  p.n_grid = {8, 8};
  REQUIRE_THROWS_AS(validate_plan(p), std::invalid_argument);
}

TEST_CASE("recurrence samples respect definition-level ranges") {
  auto samples = sample_recurrence(small_plan(6), 6);
  for (const auto& s : samples) {
    if (!s.w.censored()) REQUIRE(s.w.value() >= 1);
    if (!s.r.censored()) REQUIRE(s.r.value() >= 2);
    if (!s.rhat.censored()) REQUIRE(s.rhat.value() >= 1);
    REQUIRE(std::isfinite(s.log_mu));
    REQUIRE(std::isfinite(s.energy));
  }
}

TEST_CASE("replaying a plan reproduces identical samples") {
  auto a = sample_recurrence(small_plan(6), 6);
  auto b = sample_recurrence(small_plan(6), 6);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].w.censored() == b[i].w.censored());
    REQUIRE(a[i].w.value_or_bound() == b[i].w.value_or_bound());
    REQUIRE(a[i].r.value_or_bound() == b[i].r.value_or_bound());
    REQUIRE(a[i].rhat.value_or_bound() == b[i].rhat.value_or_bound());
    REQUIRE(a[i].log_mu == b[i].log_mu);
  }
}

TEST_CASE("results are bit-identical for any worker count") {
  auto p1 = small_plan(8, 600);
  auto p3 = small_plan(8, 600);
  p1.workers = 1;
  p3.workers = 3;
  auto c1 = spectrum_estimate_W(p1, 8);
  auto c3 = spectrum_estimate_W(p3, 8);
  for (std::size_t i = 0; i < c1.value.size(); ++i) {
    REQUIRE(c1.value[i] == c3.value[i]);
    REQUIRE(c1.stderr_[i] == c3.stderr_[i]);
  }
  auto e1 = entropy_estimate(p1);
  auto e3 = entropy_estimate(p3);
  REQUIRE(e1.value == e3.value);
  REQUIRE(e1.stderr_ == e3.stderr_);
}

TEST_CASE("hitting from the shifted stream equals the return offset") {
  // w of the stream's own prefix scanned from position 2 equals r - 1,
  // exactly, sample by sample.
  MarkovSource source(bern73(), 7);
  const unsigned n = 8;
  const std::uint64_t budget = 1 << 20;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    auto x1 = source.cursor(i, budget);
    auto rs = return_time(x1, n);

    auto x2 = source.cursor(i, budget);
    x2.next();  // shift by one position
    auto w = hitting_time(Pattern(rs.pattern), x2);

    if (rs.result.censored()) {
      REQUIRE(w.censored());
    } else {
      REQUIRE(w.value() == rs.result.value() - 1);
    }
  }
}

TEST_CASE("spectra vanish identically at q = 0") {
  auto curve = spectrum_estimate_W(small_plan(6), 6);
  auto curve_r =
      spectrum_estimate_R(small_plan(6), 6, ReturnVariant::NonOverlapping);
  for (std::size_t i = 0; i < curve.q.size(); ++i) {
    if (curve.q[i] == 0.0) {
      REQUIRE(curve.value[i] == 0.0);
      REQUIRE(curve_r.value[i] == 0.0);
    }
  }
}

TEST_CASE("censoring keeps positive-q estimates certified lower bounds") {
  auto tight = small_plan(10, 400, 1 << 10);
  auto loose = small_plan(10, 400, 1 << 16);
  auto ct = spectrum_estimate_W(tight, 10);
  auto cl = spectrum_estimate_W(loose, 10);
  for (std::size_t i = 0; i < ct.q.size(); ++i) {
    if (ct.q[i] > 0.0) REQUIRE(ct.value[i] <= cl.value[i] + 1e-12);
  }
}

TEST_CASE("entropy estimate sits below h by the log-exponential offset") {
  // E[(1/n) log w_n] = h - gamma/n + o(1/n): at n = 10 the estimator must
  // land below h by roughly 0.058, far beyond its standard error.
  EstimationPlan plan{bern73(), 1, {10}, {}, 2000, 100000, 0};
  auto e = entropy_estimate(plan);
  double h = entropy(bern73());
  REQUIRE(e.value < h - 0.03);
  REQUIRE(e.value > h - 0.08);
  REQUIRE(e.stderr_ > 0.001);
  REQUIRE(e.stderr_ < 0.01);
  REQUIRE(e.censored_fraction < 0.01);
  REQUIRE_FALSE(e.reliability_warning);
}

TEST_CASE("finite-n moment ratios stay in the bounded band") {
  // exp(n West_n(q)) / partition-sum ratio within [1/10, 10] for q > -1,
  // and against sum mu^2 for q = -2.
  for (unsigned n : {8u, 12u}) {
    EstimationPlan plan{bern73(), 3, {n}, {-2.0, -0.5, 0.0, 1.0, 2.0}, 4000,
                        100000, 0};
    auto curve = spectrum_estimate_W(plan, n);
    for (std::size_t i = 0; i < curve.q.size(); ++i) {
      double q = curve.q[i];
      double reference =
          q <= -1.0 ? partition_sum(bern73(), n, -1.0) : partition_sum(bern73(), n, q);
      double log_ratio = n * curve.value[i] - reference;
      INFO("n=" << n << " q=" << q << " log_ratio=" << log_ratio);
      REQUIRE(std::abs(log_ratio) <= std::log(10.0));
    }
  }
}

TEST_CASE("slope extraction recovers the exact spectrum on a small case") {
  std::vector<double> qs = {1.0};
  std::vector<SpectrumCurve> per_n;
  for (unsigned n : {6u, 10u}) {
    EstimationPlan plan{bern73(), 5, {n}, qs, 4000, 100000, 0};
    per_n.push_back(spectrum_estimate_W(plan, n));
  }
  auto slope = spectrum_slope(per_n, "est-W-slope");
  REQUIRE(std::abs(slope.value[0] - std::log(2.0)) < 0.15);
  REQUIRE(slope.stderr_[0] > 0.0);
}

TEST_CASE("kac ratio on the deterministic periodic oracle") {
  // alternating 0101...: every return gap is exactly 2; with the period-2
  // empirical measure mu([01]) = 1/2 the ratio is 1.
  PeriodicCursor stream(word_from_string("01"), 4096);
  Pattern pat(word_from_string("01"));
  PatternAutomaton automaton(pat);
  std::uint64_t last = 0, count = 0;
  double gap_sum = 0.0;
  while (stream.position() < stream.budget()) {
    if (automaton.feed(stream.next())) {
      std::uint64_t pos = stream.position() - pat.size() + 1;
      if (last != 0) {
        gap_sum += static_cast<double>(pos - last);
        ++count;
      }
      last = pos;
    }
  }
  REQUIRE(count > 1000);
  REQUIRE(gap_sum / count == Catch::Approx(2.0).epsilon(1e-14));
  REQUIRE((gap_sum / count) * 0.5 == Catch::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("kac ratio near one for Markov draws") {
  auto rep = kac_check(bern73(), 9, Pattern::from_string("0"), 20000);
  REQUIRE(rep.ratio > 0.9);
  REQUIRE(rep.ratio < 1.1);
  REQUIRE(rep.returns_collected == 20000);

  auto golden = make_markov_spec(2, 1, {{0.5, 0.5}, {1.0, 0.0}}, true);
  REQUIRE_THROWS_AS(kac_check(golden, 1, Pattern::from_string("11"), 100),
                    std::invalid_argument);
}

TEST_CASE("exponential-law fit: clean pattern vs periodic pattern") {
  REQUIRE_THROWS_AS(
      exp_law_fit(bern55(), 1, Pattern::from_string("01"), 100),
      std::invalid_argument);  // N too small

  auto clean = exp_law_fit(bern55(), 1, Pattern::from_string("000000000001"), 2000);
  REQUIRE(clean.rho_hat > 0.85);
  REQUIRE(clean.rho_hat < 1.15);
  REQUIRE(clean.ks < 0.04);
  REQUIRE_FALSE(clean.flagged);
  for (double v : clean.band_value) {
    REQUIRE(v > 0.0);
    REQUIRE(v > clean.rho_hat / 2.0);
    REQUIRE(v < clean.rho_hat * 2.0);
  }

  // maximal internal periodicity inflates short returns: rho drops well
  // below 1 (the all-zeros cylinder has expected hitting time ~2/mu).
  auto periodic = exp_law_fit(bern55(), 1, Pattern::from_string("000000000000"), 2000);
  REQUIRE(periodic.rho_hat < 0.7);
}

TEST_CASE("clt_check standardizes with exact constants") {
  EstimationPlan plan{make_bernoulli({0.9, 0.1}), 2, {25}, {}, 400, 1 << 24, 0};
  auto rep = clt_check(plan);
  REQUIRE(rep.samples == 400);
  REQUIRE(rep.ks_normal < 0.2);
  REQUIRE(rep.variance_ratio > 0.5);
  REQUIRE(rep.variance_ratio < 1.6);
  REQUIRE(rep.standardized.size() == 400);

  EstimationPlan degenerate{bern55(), 2, {10}, {}, 400, 1 << 16, 0};
  REQUIRE_THROWS_AS(clt_check(degenerate), degenerate_source_error);
}

TEST_CASE("sa_bound_check rejects eps <= 1 and reports sane fractions") {
  EstimationPlan plan{bern73(), 4, {6, 10}, {}, 1000, 1 << 18, 0};
  REQUIRE_THROWS_AS(sa_bound_check(plan, 1.0), std::invalid_argument);
  auto rep = sa_bound_check(plan, 3.0);
  REQUIRE(rep.rows.size() == 2);
  for (const auto& row : rep.rows) {
    REQUIRE(row.w_lower_frac >= 0.0);
    REQUIRE(row.w_lower_frac < 0.2);
    REQUIRE(row.w_upper_frac < 0.2);
    REQUIRE(row.r_lower_frac < 0.2);
    REQUIRE(row.r_upper_frac < 0.2);
  }
}

TEST_CASE("lil trace: finite points, measured prefix, degeneracy refusal") {
  LilPlan plan{make_bernoulli({0.9, 0.1}), 1, 120, 1 << 22};
  auto rep = lil_trace(plan);
  REQUIRE(rep.points.front().n == 3);
  REQUIRE(rep.points.back().n == 120);
  for (const auto& pt : rep.points) REQUIRE(std::isfinite(pt.normalized));
  REQUIRE(rep.measured_up_to >= 20);
  REQUIRE(rep.measured_up_to < 120);  // e^{nh} outgrows this budget
  REQUIRE(rep.max_normalized < 6.0);
  REQUIRE(rep.min_normalized > -6.0);

  LilPlan degenerate{bern55(), 1, 50, 1 << 20};
  REQUIRE_THROWS_AS(lil_trace(degenerate), degenerate_source_error);
}
