#pragma once

// Statistical helpers for the estimator layer: one-sample Kolmogorov-Smirnov
// distances, OLS slopes, jackknife / bootstrap errors and a Hill-type tail
// exponent. Nothing here knows about symbols or streams.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "recur/linalg.hpp"
#include "recur/rng.hpp"

namespace recur {

inline double mean(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

inline double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size() - 1);
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

inline double exponential_cdf(double t, double rate) {
  return t <= 0.0 ? 0.0 : 1.0 - std::exp(-rate * t);
}

// sup_x |F_n(x) - F(x)| for a continuous reference CDF.
inline double ks_statistic(std::vector<double> sample,
                           const std::function<double(double)>& cdf) {
  if (sample.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    double f = cdf(sample[i]);
    d = std::max(d, f - static_cast<double>(i) / n);
    d = std::max(d, static_cast<double>(i + 1) / n - f);
  }
  return d;
}

struct OlsFit {
  double slope = 0.0;
  double intercept = 0.0;
};

inline OlsFit ols_fit(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("ols_fit: need >= 2 paired points");
  double mx = mean(xs), my = mean(ys);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  return {sxy / sxx, my - (sxy / sxx) * mx};
}

// Propagates independent per-point standard errors into the OLS slope.
inline double ols_slope_stderr(std::span<const double> xs,
                               std::span<const double> y_stderr) {
  double mx = mean(xs);
  double sxx = 0.0;
  for (double x : xs) sxx += (x - mx) * (x - mx);
  double v = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double c = (xs[i] - mx) / sxx;
    v += c * c * y_stderr[i] * y_stderr[i];
  }
  return std::sqrt(v);
}

// log((1/N) sum exp(v_i)) with a fixed pairwise-tree reduction.
inline double log_mean_exp(std::span<const double> vals) {
  return log_sum_exp(vals) - std::log(static_cast<double>(vals.size()));
}

// Delete-one-block jackknife standard error of log_mean_exp. Blocks are
// contiguous index ranges, so the estimate is independent of how the values
// were produced (worker count, scheduling).
inline double jackknife_stderr_lse(std::span<const double> vals, unsigned blocks) {
  const std::size_t n = vals.size();
  if (blocks < 2 || n < blocks) return 0.0;
  std::vector<double> block_lse(blocks);
  std::vector<std::size_t> block_size(blocks);
  for (unsigned b = 0; b < blocks; ++b) {
    std::size_t lo = n * b / blocks, hi = n * (b + 1) / blocks;
    block_lse[b] = log_sum_exp(vals.subspan(lo, hi - lo));
    block_size[b] = hi - lo;
  }
  std::vector<double> leave_out(blocks);
  for (unsigned b = 0; b < blocks; ++b) {
    std::vector<double> rest;
    rest.reserve(blocks - 1);
    for (unsigned c = 0; c < blocks; ++c)
      if (c != b) rest.push_back(block_lse[c]);
    leave_out[b] = log_sum_exp(rest) -
                   std::log(static_cast<double>(n - block_size[b]));
  }
  double m = mean(leave_out);
  double s = 0.0;
  for (double t : leave_out) s += (t - m) * (t - m);
  const double bf = static_cast<double>(blocks);
  return std::sqrt((bf - 1.0) / bf * s);
}

// Nonparametric bootstrap standard error of the sample mean; deterministic
// for a fixed seed.
inline double bootstrap_stderr_mean(std::span<const double> vals, unsigned reps,
                                    std::uint64_t seed) {
  const std::size_t n = vals.size();
  if (n < 2 || reps < 2) return 0.0;
  Rng rng(mix_seed(seed, 0xb007));
  std::vector<double> means(reps);
  for (unsigned r = 0; r < reps; ++r) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += vals[rng.next_u64() % n];
    means[r] = s / static_cast<double>(n);
  }
  double m = mean(means);
  double s2 = 0.0;
  for (double x : means) s2 += (x - m) * (x - m);
  return std::sqrt(s2 / static_cast<double>(reps - 1));
}

// Hill estimator of the tail exponent from the top-k order statistics.
inline double hill_tail_exponent(std::vector<double> data, std::size_t k) {
  if (data.size() < k + 1 || k < 1)
    throw std::invalid_argument("hill_tail_exponent: not enough data");
  std::sort(data.begin(), data.end(), std::greater<double>());
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += std::log(data[i] / data[k]);
  return static_cast<double>(k) / s;
}

}  // namespace recur
