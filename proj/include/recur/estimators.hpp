#pragma once

// Monte Carlo estimation of hitting/return-time quantities for Markov-backed
// Gibbsian sources. Every sample i is a pure function of (plan.seed, i):
// stream offsets are laid out per role, workers write into per-index slots,
// and all reductions run in index order, so results are bit-identical for any
// worker count.
//
// Censoring policy (fixed, certified): a scan truncated at budget B
// contributes the value B. For q > 0 this makes every moment estimate a
// certified lower bound on the true moment; for q < 0 a certified upper bound
// on the contribution. Censored counts are always reported, never dropped.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "recur/curve.hpp"
#include "recur/markov.hpp"
#include "recur/parallel.hpp"
#include "recur/scanner.hpp"
#include "recur/stats.hpp"
#include "recur/thermo.hpp"

namespace recur {

// Stream-offset roles: offset = (role << 40) | index keeps every estimator's
// streams disjoint under one run seed.
enum class StreamRole : std::uint64_t {
  RecurrenceX = 0,
  RecurrenceY = 1,
  ExpLaw = 2,
  Kac = 3,
  LilX = 4,
  LilY = 5,
  Mp = 6,
};

inline std::uint64_t role_offset(StreamRole role, std::uint64_t index) {
  return (static_cast<std::uint64_t>(role) << 40) | index;
}

struct EstimationPlan {
  MarkovSpec spec;
  std::uint64_t seed = 1;
  std::vector<unsigned> n_grid;  // cylinder lengths, ascending
  std::vector<double> q_grid;
  std::uint64_t samples = 0;     // N
  std::uint64_t budget = 0;      // B, per stream
  unsigned workers = 0;          // 0 = hardware concurrency

  unsigned n() const { return n_grid.front(); }
  unsigned max_n() const { return n_grid.back(); }
};

inline void validate_plan(const EstimationPlan& p) {
  if (!p.spec.validated()) throw std::invalid_argument("plan: spec not validated");
  if (p.n_grid.empty()) throw std::invalid_argument("plan: empty n grid");
  for (std::size_t i = 1; i < p.n_grid.size(); ++i)
    if (p.n_grid[i] <= p.n_grid[i - 1])
      throw std::invalid_argument("plan: n grid must be strictly increasing");
  if (p.n_grid.front() < 1) throw std::invalid_argument("plan: n must be >= 1");
  if (p.samples < 100) throw std::invalid_argument("plan: need N >= 100 samples");
  if (p.budget < 2ull * p.max_n())
    throw std::invalid_argument("plan: budget must be >= 2n");
}

struct RecurrenceSample {
  ScanResult w;      // hitting time of x's n-prefix in an independent y
  ScanResult r;      // return time of x (paper's k >= 2 convention)
  ScanResult rhat;   // non-overlapping return time (blocks)
  double log_mu;     // exact log mu([x_1^n])
  double energy;     // S phi over the pattern's windows (NaN if n < range)

  RecurrenceSample()
      : w(ScanResult::censored_at(0, 0)),
        r(ScanResult::censored_at(0, 0)),
        rhat(ScanResult::censored_at(0, 0)),
        log_mu(0.0),
        energy(0.0) {}
};

// Which scans to run; skipping unused ones matters at large budgets.
struct SampleParts {
  bool w = true;
  bool r = true;
  bool rhat = true;
};

// N independent draws of (w_n, r_n, rhat_n, mu, S_n phi): pattern = first n
// symbols of an x-stream, scanned against an independent y-stream and against
// x's own continuation. Exact measure and energy are attached from the spec.
inline std::vector<RecurrenceSample> sample_recurrence(const EstimationPlan& plan,
                                                       unsigned n,
                                                       SampleParts parts = {}) {
  validate_plan(plan);
  MarkovSource source(plan.spec, plan.seed);
  std::vector<RecurrenceSample> out(plan.samples);
  const unsigned range = plan.spec.order + 1;

  parallel_for(plan.samples, plan.workers, [&](std::uint64_t i) {
    RecurrenceSample s;
    Word pattern_word;
    {
      auto x = source.cursor(role_offset(StreamRole::RecurrenceX, i), plan.budget);
      if (parts.r) {
        auto rs = return_time(x, n);
        s.r = rs.result;
        pattern_word = std::move(rs.pattern);
      } else {
        pattern_word.resize(n);
        for (auto& a : pattern_word) a = x.next();
      }
    }
    if (parts.rhat) {
      auto x = source.cursor(role_offset(StreamRole::RecurrenceX, i), plan.budget);
      s.rhat = non_overlapping_return_time(x, n);
    }
    if (parts.w) {
      Pattern pattern(pattern_word);
      auto y = source.cursor(role_offset(StreamRole::RecurrenceY, i), plan.budget);
      s.w = hitting_time(pattern, y);
    }
    s.log_mu = log_cylinder_measure(plan.spec, pattern_word).log_mu;
    s.energy = n >= range ? energy(plan.spec, pattern_word) : std::nan("");
    out[i] = s;
  });
  return out;
}

struct EntropyEstimate {
  double value = 0.0;
  double stderr_ = 0.0;          // bootstrap over samples
  double censored_fraction = 0.0;
  bool reliability_warning = false;  // censored fraction above 10%
};

// Sample mean of (1/n) log w_n; censored scans contribute their certified
// lower bound (1/n) log B and are counted separately.
inline EntropyEstimate entropy_estimate(const EstimationPlan& plan) {
  const unsigned n = plan.n();
  auto samples = sample_recurrence(plan, n, {.w = true, .r = false, .rhat = false});
  std::vector<double> vals;
  vals.reserve(samples.size());
  std::uint64_t censored = 0;
  for (const auto& s : samples) {
    if (s.w.censored()) ++censored;
    vals.push_back(std::log(static_cast<double>(s.w.value_or_bound())) / n);
  }
  EntropyEstimate e;
  e.value = mean(vals);
  e.stderr_ = bootstrap_stderr_mean(vals, 200, mix_seed(plan.seed, 0xe57));
  e.censored_fraction =
      static_cast<double>(censored) / static_cast<double>(samples.size());
  e.reliability_warning = e.censored_fraction > 0.10;
  return e;
}

enum class ReturnVariant { Overlapping, NonOverlapping };

namespace detail {

// (1/n) log (1/N) sum_i exp(q log t_i) over a q-grid, with delete-block
// jackknife standard errors. q = 0 is exactly zero: the moment is
// identically one, no Monte Carlo enters.
inline SpectrumCurve moment_curve(const std::vector<double>& log_times,
                                  const std::vector<double>& q_grid, unsigned n,
                                  const std::string& kind,
                                  std::uint64_t censored) {
  SpectrumCurve c;
  c.kind = kind;
  c.exact = false;
  c.n = n;
  c.samples = log_times.size();
  c.q = q_grid;
  (void)censored;
  std::vector<double> scaled(log_times.size());
  for (double q : q_grid) {
    if (q == 0.0) {
      c.value.push_back(0.0);
      c.stderr_.push_back(0.0);
      continue;
    }
    for (std::size_t i = 0; i < log_times.size(); ++i)
      scaled[i] = q * log_times[i];
    c.value.push_back(log_mean_exp(scaled) / n);
    c.stderr_.push_back(jackknife_stderr_lse(scaled, 50) / n);
  }
  return c;
}

}  // namespace detail

// W_n(q) over the q-grid from pre-drawn samples.
inline SpectrumCurve spectrum_W_from_samples(const std::vector<RecurrenceSample>& samples,
                                             const std::vector<double>& q_grid,
                                             unsigned n) {
  std::vector<double> logs(samples.size());
  std::uint64_t censored = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].w.censored()) ++censored;
    logs[i] = std::log(static_cast<double>(samples[i].w.value_or_bound()));
  }
  return detail::moment_curve(logs, q_grid, n, "est-W-n" + std::to_string(n),
                              censored);
}

inline SpectrumCurve spectrum_R_from_samples(const std::vector<RecurrenceSample>& samples,
                                             const std::vector<double>& q_grid,
                                             unsigned n, ReturnVariant variant) {
  std::vector<double> logs(samples.size());
  std::uint64_t censored = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const ScanResult& t = variant == ReturnVariant::Overlapping
                              ? samples[i].r
                              : samples[i].rhat;
    if (t.censored()) ++censored;
    logs[i] = std::log(static_cast<double>(t.value_or_bound()));
  }
  const char* tag =
      variant == ReturnVariant::Overlapping ? "est-R-n" : "est-Rhat-n";
  return detail::moment_curve(logs, q_grid, n, tag + std::to_string(n), censored);
}

inline SpectrumCurve spectrum_estimate_W(const EstimationPlan& plan, unsigned n) {
  auto samples = sample_recurrence(plan, n, {.w = true, .r = false, .rhat = false});
  return spectrum_W_from_samples(samples, plan.q_grid, n);
}

inline SpectrumCurve spectrum_estimate_R(const EstimationPlan& plan, unsigned n,
                                         ReturnVariant variant) {
  SampleParts parts{.w = false, .r = variant == ReturnVariant::Overlapping,
                    .rhat = variant == ReturnVariant::NonOverlapping};
  auto samples = sample_recurrence(plan, n, parts);
  return spectrum_R_from_samples(samples, plan.q_grid, n, variant);
}

// OLS slope of n * est_n(q) against n: the finite-n constants of the moment
// asymptotics cancel in the regression, leaving the limit spectrum.
inline SpectrumCurve spectrum_slope(const std::vector<SpectrumCurve>& per_n,
                                    const std::string& kind) {
  if (per_n.size() < 2)
    throw std::invalid_argument("spectrum_slope: need at least 2 cylinder lengths");
  SpectrumCurve out;
  out.kind = kind;
  out.exact = false;
  out.q = per_n.front().q;
  out.samples = per_n.front().samples;
  std::vector<double> ns, ys, errs;
  for (std::size_t qi = 0; qi < out.q.size(); ++qi) {
    ns.clear();
    ys.clear();
    errs.clear();
    for (const auto& c : per_n) {
      ns.push_back(static_cast<double>(c.n));
      ys.push_back(c.n * c.value[qi]);
      errs.push_back(c.n * c.stderr_[qi]);
    }
    out.value.push_back(ols_fit(ns, ys).slope);
    out.stderr_.push_back(ols_slope_stderr(ns, errs));
  }
  return out;
}

}  // namespace recur
