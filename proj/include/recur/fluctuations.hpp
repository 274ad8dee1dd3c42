#pragma once

// Fluctuation statistics built on the recurrence samplers: exponential-law
// fits with KS validation, Kac's formula checks, the central limit theorem
// for log w_n, almost-sure bound violation counts, and a qualitative
// law-of-iterated-logarithm trace. Exact constants (h, sigma^2, mu) always
// come from the thermodynamic layer; only rho is fitted, which the theory
// itself leaves cylinder-dependent.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "recur/estimators.hpp"
#include "recur/fluctuation_types.hpp"
#include "recur/markov.hpp"
#include "recur/parallel.hpp"
#include "recur/pattern.hpp"
#include "recur/scanner.hpp"
#include "recur/stats.hpp"
#include "recur/stream.hpp"
#include "recur/thermo.hpp"

namespace recur {

// Kac's formula, empirically: successive occurrences of the pattern along one
// stream give conditioned return times (as shift counts); their mean times
// mu(pattern) converges to 1.
inline KacReport kac_check(const MarkovSpec& spec, std::uint64_t seed,
                           const Pattern& pattern, std::uint64_t returns_wanted) {
  CylinderMeasure cm = log_cylinder_measure(spec, pattern.word());
  if (cm.forbidden)
    throw std::invalid_argument("kac_check: pattern has zero measure");
  const double mu = cm.mu();

  const std::uint64_t budget =
      (returns_wanted + 2) * static_cast<std::uint64_t>(std::ceil(8.0 / mu)) +
      pattern.size();
  MarkovSource source(spec, seed);
  auto stream = source.cursor(role_offset(StreamRole::Kac, 0), budget);

  PatternAutomaton automaton(pattern);
  std::uint64_t last_match = 0;
  std::uint64_t collected = 0;
  double gap_sum = 0.0;
  while (stream.position() < stream.budget() && collected < returns_wanted) {
    if (automaton.feed(stream.next())) {
      std::uint64_t pos = stream.position() - pattern.size() + 1;
      if (last_match != 0) {
        gap_sum += static_cast<double>(pos - last_match);
        ++collected;
      }
      last_match = pos;
    }
  }
  if (collected == 0) throw std::runtime_error("kac_check: no returns collected");

  KacReport rep;
  rep.mu = mu;
  rep.returns_collected = collected;
  rep.mean_return = gap_sum / static_cast<double>(collected);
  rep.ratio = rep.mean_return * mu;
  return rep;
}

// Exponential-law fit for the hitting time of one fixed cylinder: rescale by
// mu, fit rho as 1/mean (method of moments, exact MLE for the exponential),
// report the KS distance and the Lemma-style diagnostic band
// -log S(t) / (t mu) over integer t with t mu <= 1/2. The band grid starts at
// 0.02/mu so each survival estimate carries enough effective samples.
inline FitReport exp_law_fit(const MarkovSpec& spec, std::uint64_t seed,
                             const Pattern& pattern, std::uint64_t samples,
                             unsigned workers = 0) {
  if (samples < 1000)
    throw std::invalid_argument("exp_law_fit: need at least 10^3 samples");
  CylinderMeasure cm = log_cylinder_measure(spec, pattern.word());
  if (cm.forbidden)
    throw std::invalid_argument("exp_law_fit: pattern has zero measure");
  const double mu = cm.mu();
  const std::uint64_t budget =
      static_cast<std::uint64_t>(std::ceil(50.0 / mu)) + pattern.size();

  MarkovSource source(spec, seed);
  std::vector<double> w(samples);
  std::vector<char> censored(samples, 0);
  parallel_for(samples, workers, [&](std::uint64_t i) {
    auto y = source.cursor(role_offset(StreamRole::ExpLaw, i), budget);
    auto hit = hitting_time(pattern, y);
    censored[i] = hit.censored() ? 1 : 0;
    w[i] = static_cast<double>(hit.value_or_bound());
  });

  FitReport rep;
  rep.samples = samples;
  std::uint64_t censored_count = 0;
  std::vector<double> rescaled;
  rescaled.reserve(samples);
  double t_sum = 0.0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    double t = w[i] * mu;
    t_sum += t;
    if (censored[i])
      ++censored_count;
    else
      rescaled.push_back(t);
  }
  rep.censored_fraction =
      static_cast<double>(censored_count) / static_cast<double>(samples);
  rep.flagged = rep.censored_fraction > 0.01;
  rep.rho_hat = static_cast<double>(samples) / t_sum;
  rep.ks = ks_statistic(rescaled, [&rep](double t) {
    return exponential_cdf(t, rep.rho_hat);
  });

  // Diagnostic band over integer t: geometric subsample, at most 64 points.
  std::vector<double> sorted_w(w);
  std::sort(sorted_w.begin(), sorted_w.end());
  const double t_max = std::floor(0.5 / mu);
  const double t_min = std::max(1.0, std::ceil(0.02 / mu));
  double t = t_min;
  const double ratio = std::pow(std::max(t_max / t_min, 1.0), 1.0 / 63.0);
  while (t <= t_max) {
    double tt = std::floor(t);
    if (rep.band_t.empty() || tt > rep.band_t.back()) {
      auto above = sorted_w.end() -
                   std::upper_bound(sorted_w.begin(), sorted_w.end(), tt);
      double survival =
          static_cast<double>(above) / static_cast<double>(samples);
      if (survival > 0.0) {
        rep.band_t.push_back(tt);
        rep.band_value.push_back(-std::log(survival) / (tt * mu));
      }
    }
    t = std::max(t * ratio, t + 1.0);
  }
  return rep;
}

// Central limit theorem for log w_n: standardize with the exact h and sigma^2
// and measure the KS distance to N(0,1). Censored scans contribute their
// certified lower bound log B.
inline CltReport clt_check(const EstimationPlan& plan) {
  const double sigma2 = asymptotic_variance(plan.spec);
  if (sigma2 <= 1e-14)
    throw degenerate_source_error(
        "clt_check: sigma^2 = 0 (maximal-entropy source has no lognormal fluctuations)");
  const double h = entropy(plan.spec);
  const unsigned n = plan.n();
  const double sigma_sqrt_n = std::sqrt(sigma2) * std::sqrt(static_cast<double>(n));

  auto samples = sample_recurrence(plan, n, {.w = true, .r = false, .rhat = false});
  CltReport rep;
  rep.samples = samples.size();
  rep.sigma2_exact = sigma2;
  std::vector<double> log_w_over_n;
  std::uint64_t censored = 0;
  for (const auto& s : samples) {
    if (s.w.censored()) ++censored;
    double lw = std::log(static_cast<double>(s.w.value_or_bound()));
    rep.standardized.push_back((lw - n * h) / sigma_sqrt_n);
    log_w_over_n.push_back(lw / n);
  }
  rep.censored_fraction =
      static_cast<double>(censored) / static_cast<double>(rep.samples);
  rep.ks_normal = ks_statistic(rep.standardized,
                               [](double z) { return normal_cdf(z); });

  // variance of (log w - n h)/sqrt(n) against sigma^2
  std::vector<double> scaled(rep.standardized.size());
  for (std::size_t i = 0; i < scaled.size(); ++i)
    scaled[i] = rep.standardized[i] * sigma_sqrt_n / std::sqrt(static_cast<double>(n));
  rep.variance_scaled = sample_variance(scaled);
  rep.variance_ratio = rep.variance_scaled / sigma2;
  rep.mean_log_w_over_n = mean(log_w_over_n);
  rep.var_log_w_over_n = sample_variance(log_w_over_n);
  return rep;
}

// Almost-sure bound check: violation fractions of
//   -eps log n <= log(w_n mu([x_1^n])) <= log log(n^eps)
// per n, for hitting times and (same thresholds) return times. Censored scans
// enter with their certified lower bound: an upper violation is counted only
// when even the bound B already violates, so reported upper fractions are
// certified lower bounds on the true fractions.
inline SaBoundReport sa_bound_check(const EstimationPlan& plan, double eps) {
  if (!(eps > 1.0))
    throw std::invalid_argument("sa_bound_check: eps must exceed 1");
  SaBoundReport rep;
  rep.epsilon = eps;
  rep.samples = plan.samples;
  for (unsigned n : plan.n_grid) {
    auto samples = sample_recurrence(plan, n, {.w = true, .r = true, .rhat = false});
    const double lower_threshold = -eps * std::log(static_cast<double>(n));
    const double upper_threshold = std::log(eps * std::log(static_cast<double>(n)));
    SaBoundRow row;
    row.n = n;
    std::uint64_t wl = 0, wu = 0, rl = 0, ru = 0;
    for (const auto& s : samples) {
      double vw = std::log(static_cast<double>(s.w.value_or_bound())) + s.log_mu;
      double vr = std::log(static_cast<double>(s.r.value_or_bound())) + s.log_mu;
      if (vw < lower_threshold) ++wl;
      if (vw > upper_threshold) ++wu;
      if (vr < lower_threshold) ++rl;
      if (vr > upper_threshold) ++ru;
    }
    const double num = static_cast<double>(plan.samples);
    row.w_lower_frac = wl / num;
    row.w_upper_frac = wu / num;
    row.r_lower_frac = rl / num;
    row.r_upper_frac = ru / num;
    row.frac_stderr = std::sqrt(0.25 / num);  // worst-case binomial error
    rep.rows.push_back(row);
  }
  return rep;
}

struct LilPlan {
  MarkovSpec spec;
  std::uint64_t seed = 1;
  unsigned n_max = 200;
  std::uint64_t budget = 1ull << 25;  // y materialization cap
};

// Law-of-iterated-logarithm trace for one (x, y) pair. Direct hitting times
// are scanned while they fit the budget (w_n grows like e^{nh}, so only a
// prefix of n is reachable); beyond that the trace continues on the exact
// surrogate -log mu([x_1^n]), which controls log w_n almost surely up to
// O(log n). Points start at n = 3 (log log n must be positive). Qualitative
// by design: the LIL limit itself is out of reach at any desk scale.
inline LilTraceReport lil_trace(const LilPlan& plan) {
  const double sigma2 = asymptotic_variance(plan.spec);
  if (sigma2 <= 1e-14)
    throw degenerate_source_error("lil_trace: sigma^2 = 0 (maximal-entropy source)");
  const double sigma = std::sqrt(sigma2);
  const double h = entropy(plan.spec);
  if (plan.n_max < 3) throw std::invalid_argument("lil_trace: n_max must be >= 3");

  MarkovSource source(plan.spec, plan.seed);
  auto xcur = source.cursor(role_offset(StreamRole::LilX, 0), plan.n_max);
  Word x(plan.n_max);
  for (auto& a : x) a = xcur.next();

  BufferedStream y(source.cursor(role_offset(StreamRole::LilY, 0), plan.budget));

  LilTraceReport rep;
  bool measuring = true;
  std::uint64_t scan_from = 1;  // matches cannot start before w_{n-1}
  std::uint64_t w_n = 0;
  for (unsigned n = 1; n <= plan.n_max; ++n) {
    if (measuring) {
      Pattern pat(Word(x.begin(), x.begin() + n));
      PatternAutomaton automaton(pat);
      std::uint64_t pos = scan_from;
      std::uint64_t found = 0;
      while (pos <= plan.budget) {
        // feed y[pos..]; a match ending at pos starts at pos - n + 1 >= scan_from
        if (automaton.feed(y.at(pos))) {
          found = pos - n + 1;
          break;
        }
        ++pos;
      }
      if (found == 0) {
        measuring = false;
        rep.measured_up_to = n - 1;
      } else {
        w_n = found;
        scan_from = found;
      }
    }
    double value = measuring
                       ? std::log(static_cast<double>(w_n))
                       : -log_cylinder_measure(plan.spec,
                                               Word(x.begin(), x.begin() + n))
                              .log_mu;
    if (n < 3) continue;
    double norm = sigma * std::sqrt(2.0 * n * std::log(std::log(n)));
    LilPoint pt;
    pt.n = n;
    pt.value = value;
    pt.measured = measuring;
    pt.normalized = (value - n * h) / norm;
    rep.points.push_back(pt);
  }
  if (measuring) rep.measured_up_to = plan.n_max;

  rep.max_normalized = rep.points.front().normalized;
  rep.min_normalized = rep.points.front().normalized;
  for (const auto& pt : rep.points) {
    rep.max_normalized = std::max(rep.max_normalized, pt.normalized);
    rep.min_normalized = std::min(rep.min_normalized, pt.normalized);
  }
  return rep;
}

}  // namespace recur
