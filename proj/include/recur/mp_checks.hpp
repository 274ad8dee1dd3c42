#pragma once

// Empirical moment checks for the Manneville-Pomeau source. tau_{I_1} is the
// first hitting time of the right interval from a stationary start (uniform
// draw plus burn-in), whose q-th moment diverges beyond a finite critical
// order because the sojourns at the indifferent fixed point are heavy-tailed.
// Divergence is probed by the growth of the running moment across doublings
// of the sample count; a convergent moment flattens out instead. The
// sojourn-run tail exponent (expected near 1/alpha) is estimated alongside.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "recur/estimators.hpp"
#include "recur/mp.hpp"
#include "recur/parallel.hpp"
#include "recur/stats.hpp"

namespace recur {

struct MPDivergenceStage {
  std::uint64_t samples = 0;
  double moment_mean = 0.0;    // (1/M) sum tau^q over the first M samples
  double growth_factor = 0.0;  // moment_mean ratio to the previous stage
};

struct MPDivergenceReport {
  double alpha = 0.0;
  double q = 0.0;
  std::vector<MPDivergenceStage> stages;
  double final_relative_change = 0.0;  // |mean change| on the last doubling
  double tail_exponent = 0.0;          // Hill estimate of the sojourn-run tail
};

// Hill tail exponent of the sojourn-run distribution; expected near 1/alpha.
inline double mp_tail_exponent(const std::vector<std::uint64_t>& runs,
                               std::size_t top_k = 0) {
  if (runs.size() < 1000)
    throw std::invalid_argument("mp_tail_exponent: too few runs");
  if (top_k == 0) top_k = std::max<std::size_t>(100, runs.size() / 200);
  std::vector<double> vals(runs.size());
  for (std::size_t i = 0; i < runs.size(); ++i)
    vals[i] = static_cast<double>(runs[i]);
  return hill_tail_exponent(std::move(vals), top_k);
}

// Running q-th moment of tau_{I_1} across doubling sample counts: stages
// M, 2M, ..., M 2^d of cumulative independent samples. Each sample is one
// stationary start iterated until it enters I_1 (no budget: the hitting time
// is almost surely finite and cheap in expectation).
inline MPDivergenceReport mp_divergence_check(const MPParams& params,
                                              std::uint64_t seed, double q,
                                              unsigned doublings,
                                              std::uint64_t base_samples,
                                              unsigned workers = 0) {
  validate_mp(params);
  if (base_samples < 100)
    throw std::invalid_argument("mp_divergence_check: base sample count too small");
  const std::uint64_t total = base_samples << doublings;
  const double c = mp_branch_point(params.alpha);
  const double alpha = params.alpha;

  std::vector<double> tau(total);
  parallel_for(total, workers, [&](std::uint64_t i) {
    Rng rng(mix_seed(seed, role_offset(StreamRole::Mp, i)));
    double x = rng.next_u01();
    for (std::uint64_t b = 0; b < params.burn_in; ++b) x = mp_step(x, alpha);
    std::uint64_t t = 1;
    while (x < c) {
      x = mp_step(x, alpha);
      ++t;
    }
    tau[i] = static_cast<double>(t);
  });

  MPDivergenceReport rep;
  rep.alpha = alpha;
  rep.q = q;
  double acc = 0.0;
  std::uint64_t next = 0;
  for (unsigned stage = 0; stage <= doublings; ++stage) {
    std::uint64_t m = base_samples << stage;
    while (next < m) {
      acc += std::pow(tau[next], q);
      ++next;
    }
    MPDivergenceStage st;
    st.samples = m;
    st.moment_mean = acc / static_cast<double>(m);
    st.growth_factor =
        stage == 0 ? 0.0 : st.moment_mean / rep.stages.back().moment_mean;
    rep.stages.push_back(st);
  }
  const auto& last = rep.stages.back();
  const auto& prev = rep.stages[rep.stages.size() - 2];
  rep.final_relative_change =
      std::abs(last.moment_mean - prev.moment_mean) / prev.moment_mean;

  auto runs = mp_sojourn_lengths(params, 10000000, seed,
                                 role_offset(StreamRole::Mp, total + 1));
  rep.tail_exponent = mp_tail_exponent(runs);
  return rep;
}

}  // namespace recur
