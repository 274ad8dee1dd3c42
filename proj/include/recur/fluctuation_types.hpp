#pragma once

// Result records for the fluctuation estimators.

#include <cstdint>
#include <vector>

namespace recur {

struct KacReport {
  double ratio = 0.0;        // mean conditioned return x mu, -> 1
  double mean_return = 0.0;  // mean gap between successive occurrences
  double mu = 0.0;
  std::uint64_t returns_collected = 0;
};

struct FitReport {
  double rho_hat = 0.0;  // fitted exponential rate, 1/mean of w mu
  double ks = 0.0;       // KS distance to Exp(rho_hat)
  std::uint64_t samples = 0;
  double censored_fraction = 0.0;
  bool flagged = false;  // censored fraction above 1%
  std::vector<double> band_t;       // integer t with t mu <= 1/2 (subsampled)
  std::vector<double> band_value;   // -log S(t) / (t mu)
};

struct CltReport {
  double ks_normal = 0.0;       // KS of standardized sample vs N(0,1)
  double variance_scaled = 0.0; // empirical Var[(log w - n h)/sqrt(n)]
  double variance_ratio = 0.0;  // over the exact sigma^2
  double sigma2_exact = 0.0;
  double mean_log_w_over_n = 0.0;
  double var_log_w_over_n = 0.0;
  std::uint64_t samples = 0;
  double censored_fraction = 0.0;
  std::vector<double> standardized;
};

struct SaBoundRow {
  unsigned n = 0;
  double w_lower_frac = 0.0;
  double w_upper_frac = 0.0;
  double r_lower_frac = 0.0;
  double r_upper_frac = 0.0;
  double frac_stderr = 0.0;
};

struct SaBoundReport {
  double epsilon = 0.0;
  std::uint64_t samples = 0;
  std::vector<SaBoundRow> rows;
};

struct LilPoint {
  unsigned n = 0;
  double value = 0.0;       // log w_n while measured, else -log mu([x_1^n])
  double normalized = 0.0;  // (value - n h) / (sigma sqrt(2 n log log n))
  bool measured = true;
};

struct LilTraceReport {
  std::vector<LilPoint> points;  // n >= 3
  double max_normalized = 0.0;
  double min_normalized = 0.0;
  unsigned measured_up_to = 0;  // largest n with a direct, uncensored w_n
};

}  // namespace recur
