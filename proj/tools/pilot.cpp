// Scratch pilot runs used to calibrate tolerances; not part of the build.
#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>

#include "recur/estimators.hpp"
#include "recur/fluctuations.hpp"
#include "recur/mp_checks.hpp"
#include "recur/thermo.hpp"

using namespace recur;
using Clock = std::chrono::steady_clock;

static double secs(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

int main(int argc, char** argv) {
  std::string what = argc > 1 ? argv[1] : "throughput";
  std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 1;

  if (what == "throughput") {
    auto spec = make_bernoulli({0.9, 0.1});
    MarkovSource src(spec, 1);
    auto t0 = Clock::now();
    auto cur = src.cursor(0, 400000000);
    std::uint64_t acc = 0;
    for (std::uint64_t i = 0; i < 400000000; ++i) acc += cur.next();
    auto t1 = Clock::now();
    std::printf("gen: %.0f Msym/s (acc=%llu)\n", 400.0 / secs(t0, t1),
                (unsigned long long)acc);
    // scanning throughput
    Pattern pat(word_from_string("0000000001"));
    auto t2 = Clock::now();
    auto cur2 = src.cursor(1, 400000000);
    auto hit = hitting_time(pat, cur2);
    std::uint64_t consumed = cur2.position();
    while (cur2.budget() - cur2.position() >= pat.size()) {
      auto h2 = hitting_time(pat, cur2);
      if (h2.censored()) break;
    }
    auto t3 = Clock::now();
    std::printf("scan: %.0f Msym/s (first hit %llu, consumed %llu)\n",
                400.0 / secs(t2, t3), (unsigned long long)hit.value_or_bound(),
                (unsigned long long)consumed);
  } else if (what == "crit4") {
    for (auto p : {0.7, 0.5}) {
      auto spec = make_bernoulli({p, 1.0 - p});
      EstimationPlan plan{spec, seed, {20}, {}, 10000, 100000000, 0};
      auto t0 = Clock::now();
      auto e = entropy_estimate(plan);
      auto t1 = Clock::now();
      double h = entropy(spec);
      std::printf("p=%.1f: est=%.6f h=%.6f diff=%+.6f stderr=%.6f cens=%.2e  (%.1fs)\n",
                  p, e.value, h, e.value - h, e.stderr_, e.censored_fraction,
                  secs(t0, t1));
    }
  } else if (what == "crit3") {
    auto spec = make_bernoulli({0.7, 0.3});
    std::vector<double> qs = {-2.0, -0.5, 1.0, 2.0};
    std::vector<SpectrumCurve> per_n;
    for (unsigned n : {8u, 12u, 16u}) {
      EstimationPlan plan{spec, seed, {n}, qs, 20000, 1000000, 0};
      auto t0 = Clock::now();
      auto samples = sample_recurrence(plan, n, {.w = true, .r = false, .rhat = false});
      per_n.push_back(spectrum_W_from_samples(samples, qs, n));
      auto t1 = Clock::now();
      std::uint64_t cens = 0;
      for (auto& s : samples) cens += s.w.censored() ? 1 : 0;
      std::printf("n=%u sampled (%.1fs, censored %llu)\n", n, secs(t0, t1),
                  (unsigned long long)cens);
    }
    auto slope = spectrum_slope(per_n, "est-W-slope");
    for (std::size_t i = 0; i < qs.size(); ++i) {
      double target = qs[i] <= -1.0 ? pressure_2phi(spec) : renyi_M(spec, qs[i]);
      std::printf("q=%+.1f slope=%.4f +- %.4f target=%.4f diff=%+.4f\n", qs[i],
                  slope.value[i], slope.stderr_[i], target,
                  slope.value[i] - target);
      for (auto& c : per_n)
        std::printf("   n=%u  nW=%.4f\n", c.n, c.n * c.value[i]);
    }
  } else if (what == "crit7") {
    std::uint64_t B = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 2000000000ull;
    auto spec = make_bernoulli({0.9, 0.1});
    EstimationPlan plan{spec, seed, {40}, {}, 1000, B, 0};
    auto t0 = Clock::now();
    auto rep = clt_check(plan);
    auto t1 = Clock::now();
    std::printf("B=%llu ks=%.4f var_ratio=%.4f cens=%.4f (%.1fs)\n",
                (unsigned long long)B, rep.ks_normal, rep.variance_ratio,
                rep.censored_fraction, secs(t0, t1));
  } else if (what == "crit8") {
    std::uint64_t B = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 100000000ull;
    auto spec = make_bernoulli({0.7, 0.3});
    EstimationPlan plan{spec, seed, {10, 20, 30}, {}, 10000, B, 0};
    auto t0 = Clock::now();
    auto rep = sa_bound_check(plan, 3.0);
    auto t1 = Clock::now();
    for (auto& r : rep.rows)
      std::printf("n=%u w:(%.5f, %.5f) r:(%.5f, %.5f)\n", r.n, r.w_lower_frac,
                  r.w_upper_frac, r.r_lower_frac, r.r_upper_frac);
    std::printf("(%.1fs)\n", secs(t0, t1));
  } else if (what == "crit9") {
    auto spec = make_bernoulli({0.7, 0.3});
    {
      std::vector<double> qs = {1.0};
      std::vector<SpectrumCurve> per_n;
      for (unsigned n : {8u, 12u, 16u}) {
        EstimationPlan plan{spec, seed, {n}, qs, 20000, 1000000, 0};
        per_n.push_back(spectrum_estimate_R(plan, n, ReturnVariant::NonOverlapping));
      }
      auto slope = spectrum_slope(per_n, "s");
      std::printf("Rhat q=1 slope=%.4f target=%.4f\n", slope.value[0],
                  std::log(2.0));
    }
    {
      std::vector<double> qs = {-2.0, -3.0};
      std::vector<SpectrumCurve> per_n;
      auto t0 = Clock::now();
      for (unsigned n : {8u, 12u, 16u}) {
        EstimationPlan plan{spec, seed, {n}, qs, 200000, 40000, 0};
        per_n.push_back(spectrum_estimate_R(plan, n, ReturnVariant::NonOverlapping));
      }
      auto t1 = Clock::now();
      auto slope = spectrum_slope(per_n, "s");
      std::printf("Rhat q=-2 slope=%.4f q=-3 slope=%.4f (P2=%.4f) diff=%.4f (%.1fs)\n",
                  slope.value[0], slope.value[1], pressure_2phi(spec),
                  std::abs(slope.value[0] - slope.value[1]), secs(t0, t1));
    }
  } else if (what == "crit10") {
    for (std::uint64_t s = seed; s < seed + 10; ++s) {
      auto rep = mp_divergence_check({0.5, 1000}, s, 2.5, 4, 20000);
      std::printf("seed=%llu factors:", (unsigned long long)s);
      for (std::size_t i = 1; i < rep.stages.size(); ++i)
        std::printf(" %.3f", rep.stages[i].growth_factor);
      auto rep1 = mp_divergence_check({0.5, 1000}, s, 1.0, 4, 20000);
      std::printf("  | q=1 relchange=%.4f tail=%.3f\n",
                  rep1.final_relative_change, rep1.tail_exponent);
    }
  } else if (what == "hill") {
    for (std::uint64_t s = seed; s < seed + 5; ++s) {
      auto runs = mp_sojourn_lengths({0.5, 1000}, 10000000, s);
      std::printf("seed=%llu runs=%zu ", (unsigned long long)s, runs.size());
      for (std::size_t frac : {200, 500, 1000, 2000}) {
        double te = mp_tail_exponent(runs, runs.size() / frac);
        std::printf(" k=N/%zu:%.3f", frac, te);
      }
      std::printf("\n");
    }
  } else if (what == "crit11") {
    auto spec = make_bernoulli({0.9, 0.1});
    for (std::uint64_t s = seed; s < seed + 5; ++s) {
      LilPlan plan{spec, s, 200, 1ull << 25};
      auto t0 = Clock::now();
      auto rep = lil_trace(plan);
      auto t1 = Clock::now();
      std::printf("seed=%llu max=%.3f min=%.3f measured_to=%u (%.1fs)\n",
                  (unsigned long long)s, rep.max_normalized, rep.min_normalized,
                  rep.measured_up_to, secs(t0, t1));
    }
  } else if (what == "crit56") {
    auto spec53 = make_bernoulli({0.5, 0.5});
    auto spec73 = make_bernoulli({0.7, 0.3});
    auto k0 = kac_check(spec73, seed, Pattern::from_string("0"), 100000);
    auto k01 = kac_check(spec73, seed, Pattern::from_string("01"), 100000);
    std::printf("kac '0'=%.4f '01'=%.4f\n", k0.ratio, k01.ratio);
    auto t0 = Clock::now();
    auto fit = exp_law_fit(spec53, seed, Pattern::from_string("000000000001"), 10000);
    auto t1 = Clock::now();
    double bmin = 1e9, bmax = -1e9;
    for (double v : fit.band_value) {
      bmin = std::min(bmin, v);
      bmax = std::max(bmax, v);
    }
    std::printf("exp_law rho=%.4f ks=%.4f cens=%.2e band=[%.3f, %.3f] x rho (%.1fs)\n",
                fit.rho_hat, fit.ks, fit.censored_fraction, bmin / fit.rho_hat,
                bmax / fit.rho_hat, secs(t0, t1));
  }
  return 0;
}
