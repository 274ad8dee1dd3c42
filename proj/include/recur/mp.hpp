#pragma once

// Manneville-Pomeau intermittent map T(x) = x + x^{1+alpha} mod 1 on [0,1],
// alpha in (0,1), coded over the two monotonicity intervals I_0 = [0, c) and
// I_1 = [c, 1] where c + c^{1+alpha} = 1. The indifferent fixed point at 0
// produces heavy-tailed sojourns in I_0; the resulting symbolic source is the
// library's non-Gibbs stress case and is handled empirically only.
//
// Two stream modes:
//  - Orbit: plain double-precision iteration (the acceptance-relevant mode;
//    roundoff near the indifferent fixed point is a documented caveat).
//  - Renewal: on each injection the landing point is drawn uniformly and the
//    following sojourn length is read off the injection-branch preimage
//    partition {c_j}, with each c_j bracketed by dyadic bisection. Diagnostic
//    mode; avoids iterating through the fixed-point bottleneck.

#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "recur/core.hpp"
#include "recur/rng.hpp"
#include "recur/stream.hpp"

namespace recur {

struct MPParams {
  double alpha = 0.5;
  std::uint64_t burn_in = 1000;
};

inline void validate_mp(const MPParams& p) {
  if (!(p.alpha > 0.0 && p.alpha < 1.0))
    throw std::invalid_argument("mp: alpha must lie in (0, 1)");
}

inline double mp_step(double x, double alpha) {
  double y = x + std::pow(x, 1.0 + alpha);
  return y >= 1.0 ? y - 1.0 : y;
}

// Branch point: the unique c in (0,1) with c + c^{1+alpha} = 1. Bisection to
// bracket collapse (the midpoint degenerates once lo and hi are adjacent).
inline double mp_branch_point(double alpha) {
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (mid + std::pow(mid, 1.0 + alpha) < 1.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Preimage partition of the injection branch: cuts[j] is the j-th preimage of
// the branch point under the left branch, so a landing point u < c takes
// exactly j more steps to reach I_1 when u is in [cuts[j], cuts[j-1]).
class InjectionPartition {
 public:
  explicit InjectionPartition(double alpha)
      : alpha_(alpha), cuts_{mp_branch_point(alpha)} {}

  // Number of symbols 0 emitted from landing point u before entering I_1.
  std::uint64_t sojourn_for(double u) {
    if (u >= cuts_[0]) return 0;
    while (u < cuts_.back()) {
      if (cuts_.size() >= kMaxTable) {
        // Far tail: invert the c_j ~ (alpha j)^{-1/alpha} asymptotics.
        double j = std::pow(u, -alpha_) / alpha_;
        return static_cast<std::uint64_t>(j) + 1;
      }
      cuts_.push_back(left_preimage(cuts_.back()));
    }
    // binary search: first index j with cuts[j] <= u
    std::size_t lo = 0, hi = cuts_.size() - 1;
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (cuts_[mid] <= u)
        hi = mid;
      else
        lo = mid + 1;
    }
    return lo;
  }

  const std::vector<double>& cuts() const { return cuts_; }

 private:
  static constexpr std::size_t kMaxTable = 1u << 22;

  // Solves x + x^{1+alpha} = target on [0, target] by bisection; double
  // endpoints are dyadic rationals, so the bracket is exact at every step.
  double left_preimage(double target) const {
    double lo = 0.0, hi = target;
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
      double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (mid + std::pow(mid, 1.0 + alpha_) < target)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  }

  double alpha_;
  std::vector<double> cuts_;
};

// Double-precision orbit emission: uniform start, burn-in, then one symbol
// per pull (0 on I_0, 1 on I_1).
class MPOrbitGen {
 public:
  MPOrbitGen(const MPParams& p, std::uint64_t engine_seed)
      : alpha_(p.alpha), c_(mp_branch_point(p.alpha)), rng_(engine_seed) {
    x_ = rng_.next_u01();
    for (std::uint64_t i = 0; i < p.burn_in; ++i) x_ = mp_step(x_, alpha_);
  }

  Symbol operator()() {
    Symbol s = x_ < c_ ? 0 : 1;
    x_ = mp_step(x_, alpha_);
    return s;
  }

 private:
  double alpha_;
  double c_;
  Rng rng_;
  double x_;
};

// Renewal emission: alternating blocks of sojourn(u) zeros and a single one,
// sojourn lengths drawn from the exact preimage partition.
class MPRenewalGen {
 public:
  MPRenewalGen(std::shared_ptr<InjectionPartition> partition, std::uint64_t engine_seed)
      : partition_(std::move(partition)), rng_(engine_seed) {
    refill();
  }

  Symbol operator()() {
    if (zeros_left_ > 0) {
      --zeros_left_;
      return 0;
    }
    refill();
    return 1;
  }

 private:
  void refill() { zeros_left_ = partition_->sojourn_for(rng_.next_u01()); }

  std::shared_ptr<InjectionPartition> partition_;
  Rng rng_;
  std::uint64_t zeros_left_ = 0;
};

enum class MPMode { Orbit, Renewal };

class MPSource {
 public:
  using OrbitCursor = StreamCursor<MPOrbitGen>;
  using RenewalCursor = StreamCursor<MPRenewalGen>;

  MPSource(MPParams params, std::uint64_t seed, MPMode mode = MPMode::Orbit)
      : params_(params), seed_(seed), mode_(mode) {
    validate_mp(params_);
    if (mode_ == MPMode::Renewal)
      partition_ = std::make_shared<InjectionPartition>(params_.alpha);
  }

  OrbitCursor orbit_cursor(std::uint64_t offset, std::uint64_t budget) const {
    return OrbitCursor(MPOrbitGen(params_, mix_seed(seed_, offset)), budget);
  }

  RenewalCursor renewal_cursor(std::uint64_t offset, std::uint64_t budget) const {
    if (!partition_) throw std::logic_error("MPSource: not in renewal mode");
    return RenewalCursor(MPRenewalGen(partition_, mix_seed(seed_, offset)), budget);
  }

  const MPParams& params() const { return params_; }
  MPMode mode() const { return mode_; }
  std::uint64_t seed() const { return seed_; }

 private:
  MPParams params_;
  std::uint64_t seed_;
  MPMode mode_;
  std::shared_ptr<InjectionPartition> partition_;
};

// Maximal runs of symbol 0 along an orbit of `budget` symbols. A truncated
// trailing run is included so that runs plus the intervening ones reconstruct
// the stream length exactly.
inline std::vector<std::uint64_t> mp_sojourn_lengths(const MPParams& p,
                                                     std::uint64_t budget,
                                                     std::uint64_t seed,
                                                     std::uint64_t offset = 0) {
  validate_mp(p);
  if (budget < 10000)
    throw std::invalid_argument("mp_sojourn_lengths: budget must be >= 10^4");
  MPSource src(p, seed);
  auto cur = src.orbit_cursor(offset, budget);
  std::vector<std::uint64_t> runs;
  std::uint64_t run = 0;
  for (std::uint64_t i = 0; i < budget; ++i) {
    if (cur.next() == 0) {
      ++run;
    } else if (run > 0) {
      runs.push_back(run);
      run = 0;
    }
  }
  if (run > 0) runs.push_back(run);
  return runs;
}

}  // namespace recur
