#pragma once

// Exact thermodynamic-formalism layer: Renyi scaling M(q) = P((1-q)phi), the
// hitting-time spectrum W with its kink at q = -1, entropy, asymptotic
// variance, finite-n partition sums and Legendre-type rate functions. All
// values are closed-form consequences of the transfer operator; this module
// is the ground truth every estimator is judged against.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "recur/curve.hpp"
#include "recur/linalg.hpp"
#include "recur/markov.hpp"
#include "recur/transfer.hpp"

namespace recur {

// M(q) = P((1-q) phi); M(0) = 0 by normalization.
inline double renyi_M(const MarkovSpec& s, double q) {
  return pressure(markov_potential_unchecked(s), 1.0 - q);
}

inline double pressure_2phi(const MarkovSpec& s) {
  return pressure(markov_potential_unchecked(s), 2.0);
}

// W(q) = M(q) for q >= -1, constant P(2 phi) below; continuous at the kink
// because M(-1) = P(2 phi).
inline double hitting_spectrum_W(const MarkovSpec& s, double q) {
  return q >= -1.0 ? renyi_M(s, q) : pressure_2phi(s);
}

// Non-overlapping return spectrum: P(2 phi) for q < -1, M(q) for q >= 0.
// The strip [-1, 0) is not covered by the theory; callers get nullopt.
inline std::optional<double> nonoverlap_spectrum_Rhat(const MarkovSpec& s, double q) {
  if (q < -1.0) return pressure_2phi(s);
  if (q >= 0.0) return renyi_M(s, q);
  return std::nullopt;
}

// Normalized spectra Mbar(q) = M(q)/q and Wbar(q) = W(q)/q; both take the
// value h at q = 0 by the L'Hopital convention.
inline double entropy(const MarkovSpec& s);

inline double renyi_Mbar(const MarkovSpec& s, double q) {
  return q == 0.0 ? entropy(s) : renyi_M(s, q) / q;
}

inline double hitting_Wbar(const MarkovSpec& s, double q) {
  return q == 0.0 ? entropy(s) : hitting_spectrum_W(s, q) / q;
}

// h = -sum_c pi(c) sum_a p(c->a) log p(c->a); equals M'(0).
inline double entropy(const MarkovSpec& s) {
  if (!s.validated()) throw std::logic_error("entropy: spec not validated");
  double h = 0.0;
  for (std::uint64_t c = 0; c < s.context_count(); ++c) {
    double row = 0.0;
    for (double p : s.kernel[c])
      if (p > 0.0) row -= p * std::log(p);
    h += s.stationary[c] * row;
  }
  return h;
}

namespace detail {

// The (k+1)-word chain: states are admissible (context, symbol) pairs. It
// carries the potential as a state function, which reduces the variance of
// S_n phi to a standard Markov-chain Green-Kubo computation.
struct WordChain {
  std::vector<std::uint64_t> state_ctx;   // context of each admissible pair
  std::vector<unsigned> state_sym;
  std::vector<double> pi;                 // stationary weights pi(c) p(c->a)
  std::vector<double> f;                  // phi = log p(c->a)
  Matrix q;                               // transition matrix between pairs

  explicit WordChain(const MarkovSpec& s) {
    const std::uint64_t contexts = s.context_count();
    std::vector<std::vector<std::int64_t>> id(contexts,
        std::vector<std::int64_t>(s.alphabet, -1));
    for (std::uint64_t c = 0; c < contexts; ++c)
      for (unsigned a = 0; a < s.alphabet; ++a)
        if (s.kernel[c][a] > 0.0) {
          id[c][a] = static_cast<std::int64_t>(state_ctx.size());
          state_ctx.push_back(c);
          state_sym.push_back(a);
          pi.push_back(s.stationary[c] * s.kernel[c][a]);
          f.push_back(std::log(s.kernel[c][a]));
        }
    const std::size_t m = state_ctx.size();
    q = Matrix(m, m, 0.0);
    for (std::size_t e = 0; e < m; ++e) {
      std::uint64_t c2 = s.shift_context(state_ctx[e],
                                         static_cast<Symbol>(state_sym[e]));
      for (unsigned a = 0; a < s.alphabet; ++a)
        if (id[c2][a] >= 0)
          q.at(e, static_cast<std::size_t>(id[c2][a])) = s.kernel[c2][a];
    }
  }
};

}  // namespace detail

// Green-Kubo asymptotic variance of S_n phi: sigma^2 = 2 pi[f~ h] - pi[f~^2]
// with (I - Q) h = f~ solved through the fundamental matrix. Zero exactly on
// the measure of maximal entropy (phi is then constant).
inline double asymptotic_variance(const MarkovSpec& s) {
  if (!s.validated()) throw std::logic_error("asymptotic_variance: spec not validated");
  detail::WordChain chain(s);
  const std::size_t m = chain.pi.size();

  double mean = 0.0;
  for (std::size_t e = 0; e < m; ++e) mean += chain.pi[e] * chain.f[e];
  std::vector<double> centered(m);
  for (std::size_t e = 0; e < m; ++e) centered[e] = chain.f[e] - mean;

  // (I - Q + 1 pi^T) h = f~ pins the solution of the Poisson equation
  // with pi h = 0.
  Matrix a(m, m, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      a.at(i, j) = (i == j ? 1.0 : 0.0) - chain.q.at(i, j) + chain.pi[j];
  std::vector<double> h = lu_solve(std::move(a), centered);

  double var = 0.0, cross = 0.0;
  for (std::size_t e = 0; e < m; ++e) {
    var += chain.pi[e] * centered[e] * centered[e];
    cross += chain.pi[e] * centered[e] * h[e];
  }
  double sigma2 = 2.0 * cross - var;
  if (sigma2 < 0.0 && sigma2 > -1e-12) sigma2 = 0.0;  // roundoff guard
  return sigma2;
}

// log sum_{a_1^n} mu([a_1^n])^{1-q}, exact, via the (1-q)-deformed transfer
// recursion in log space (overflow-safe for any q and n).
inline double partition_sum(const MarkovSpec& s, unsigned n, double q) {
  if (!s.validated()) throw std::logic_error("partition_sum: spec not validated");
  if (n < 1) throw std::invalid_argument("partition_sum: n must be >= 1");
  const double e = 1.0 - q;
  const unsigned k = s.order;
  const unsigned A = s.alphabet;

  auto scaled_log = [e](double p) { return p > 0.0 ? e * std::log(p) : neg_inf; };

  if (n < k) {
    // Marginal cylinders: enumerate the |A|^n words directly.
    std::vector<double> terms;
    terms.reserve(pow_u64(A, n));
    Word w(n, 0);
    for (;;) {
      CylinderMeasure cm = log_cylinder_measure(s, w);
      if (!cm.forbidden) terms.push_back(e * cm.log_mu);
      unsigned i = n;
      while (i > 0 && ++w[i - 1] == A) w[--i] = 0;
      if (i == 0) break;
    }
    return log_sum_exp(terms);
  }

  const std::uint64_t contexts = s.context_count();
  std::vector<double> v(contexts);
  for (std::uint64_t c = 0; c < contexts; ++c)
    v[c] = scaled_log(s.stationary[c]);
  std::vector<double> next(contexts);
  for (unsigned step = 0; step < n - k; ++step) {
    std::fill(next.begin(), next.end(), neg_inf);
    for (std::uint64_t c = 0; c < contexts; ++c) {
      if (v[c] == neg_inf) continue;
      for (unsigned a = 0; a < A; ++a) {
        double w = scaled_log(s.kernel[c][a]);
        if (w == neg_inf) continue;
        std::uint64_t c2 = s.shift_context(c, static_cast<Symbol>(a));
        next[c2] = log_sum_exp2(next[c2], v[c] + w);
      }
    }
    v.swap(next);
  }
  return log_sum_exp(v);
}

// Exhaustive oracle for partition_sum: log-sum-exp over every n-word. Guarded
// to |A|^n <= 2^20.
inline double brute_force_partition(const MarkovSpec& s, unsigned n, double q) {
  if (!s.validated()) throw std::logic_error("brute_force_partition: spec not validated");
  if (n < 1) throw std::invalid_argument("brute_force_partition: n must be >= 1");
  const std::uint64_t total = pow_u64(s.alphabet, n);
  if (total > (1ull << 20))
    throw std::invalid_argument("brute_force_partition: |A|^n exceeds 2^20");

  std::vector<double> terms;
  terms.reserve(total);
  Word w(n, 0);
  for (;;) {
    CylinderMeasure cm = log_cylinder_measure(s, w);
    if (!cm.forbidden) terms.push_back((1.0 - q) * cm.log_mu);
    unsigned i = n;
    while (i > 0 && ++w[i - 1] == s.alphabet) w[--i] = 0;
    if (i == 0) break;
  }
  return log_sum_exp(terms);
}

// Right derivative of W at the kink: -int phi d mu_{2 phi}, computed exactly
// from the Doeblin-normalized 2 phi twisted kernel. Strictly positive unless
// the source is maximal-entropy.
inline double kink_right_slope(const MarkovSpec& s) {
  if (!s.validated()) throw std::logic_error("kink_right_slope: spec not validated");
  const unsigned A = s.alphabet;
  const std::uint64_t contexts = s.context_count();

  if (s.order == 0) {
    double z = 0.0;
    for (double p : s.kernel[0]) z += p * p;
    double slope = 0.0;
    for (double p : s.kernel[0])
      if (p > 0.0) slope -= (p * p / z) * std::log(p);
    return slope;
  }

  // L2(c, c') = p(c -> a)^2; twisted kernel p~(c->a) = p^2 r(c') / (lambda r(c)).
  PotentialTable pot = markov_potential_unchecked(s);
  Matrix L2 = transfer_matrix(pot, 2.0, 0.0);
  PerronResult right = perron(L2);
  PerronResult left = perron_left(L2);
  const double lambda = right.value;

  std::vector<double> pi2(contexts);
  double norm = 0.0;
  for (std::uint64_t c = 0; c < contexts; ++c) {
    pi2[c] = left.right[c] * right.right[c];
    norm += pi2[c];
  }
  double slope = 0.0;
  for (std::uint64_t c = 0; c < contexts; ++c) {
    for (unsigned a = 0; a < A; ++a) {
      double p = s.kernel[c][a];
      if (p <= 0.0) continue;
      std::uint64_t c2 = s.shift_context(c, static_cast<Symbol>(a));
      double twisted = p * p * right.right[c2] / (lambda * right.right[c]);
      slope -= (pi2[c] / norm) * twisted * std::log(p);
    }
  }
  return slope;
}

// u_0 = |W'(-1+) - h|: width of the reachable below-entropy deviation band.
inline double below_deviation_limit(const MarkovSpec& s) {
  return std::abs(kink_right_slope(s) - entropy(s));
}

struct RateOptions {
  double q_max = 3.0;
  double grid_step = 0.1;
  double tolerance = 1e-8;  // in q, golden-section refinement
};

namespace detail {

inline double golden_min(const std::function<double(double)>& g, double lo,
                         double hi, double tol) {
  const double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = g(c), fd = g(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - inv_phi * (b - a);
      fc = g(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + inv_phi * (b - a);
      fd = g(d);
    }
  }
  double mid = 0.5 * (a + b);
  return g(mid);
}

}  // namespace detail

// Legendre-type large-deviation rate I(u) = -inf_{q > -1} { -(h +/- u) q + W(q) },
// evaluated by a coarse grid plus golden-section refinement on the convex
// objective. The open endpoint q -> -1+ is approached from -1 + 1e-6.
// Refuses maximal-entropy sources: their spectrum is flat and carries no
// large deviations.
inline RateFunction rate_function(const MarkovSpec& s, DeviationSide side,
                                  const std::vector<double>& u_grid,
                                  const RateOptions& opt = {}) {
  if (!s.validated()) throw std::logic_error("rate_function: spec not validated");
  if (maximal_entropy(s))
    throw degenerate_source_error(
        "rate_function: maximal-entropy source has a flat spectrum (no large deviations)");

  const double h = entropy(s);
  const double u0 = below_deviation_limit(s);
  PotentialTable pot = markov_potential_unchecked(s);
  auto m_of_q = [&pot](double q) { return pressure(pot, 1.0 - q); };

  RateFunction out;
  out.side = side;
  out.u0 = u0;
  out.u = u_grid;
  out.rate.reserve(u_grid.size());

  const double q_lo = -1.0 + 1e-6;
  for (double u : u_grid) {
    if (u < 0.0)
      throw std::out_of_range("rate_function: deviation u must be >= 0");
    if (side == DeviationSide::Below && u > 0.0 && u >= u0)
      throw std::out_of_range(
          "rate_function: below-side deviation u=" + std::to_string(u) +
          " outside (0, u0), u0=" + std::to_string(u0));
    const double target = side == DeviationSide::Above ? h + u : h - u;
    std::function<double(double)> g = [&](double q) {
      return -target * q + m_of_q(q);
    };

    // coarse grid scan for the bracketing minimum
    double best_q = q_lo, best_g = g(q_lo);
    std::vector<double> qs;
    for (double q = q_lo; q < opt.q_max; q += opt.grid_step) qs.push_back(q);
    qs.push_back(opt.q_max);
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < qs.size(); ++i) {
      double v = g(qs[i]);
      if (v < best_g) {
        best_g = v;
        best_q = qs[i];
        best_i = i;
      }
    }
    double lo = best_i > 0 ? qs[best_i - 1] : qs.front();
    double hi = best_i + 1 < qs.size() ? qs[best_i + 1] : qs.back();
    double minimum = lo < hi ? detail::golden_min(g, lo, hi, opt.tolerance)
                             : best_g;
    if (minimum > best_g) minimum = best_g;
    out.rate.push_back(-minimum);
  }
  return out;
}

// Exact spectrum curves on a q-grid.
inline SpectrumCurve exact_M_curve(const MarkovSpec& s, const std::vector<double>& grid) {
  SpectrumCurve c;
  c.kind = "exact-M";
  c.q = grid;
  for (double q : grid) c.value.push_back(renyi_M(s, q));
  return c;
}

inline SpectrumCurve exact_W_curve(const MarkovSpec& s, const std::vector<double>& grid) {
  SpectrumCurve c;
  c.kind = "exact-W";
  c.q = grid;
  for (double q : grid) c.value.push_back(hitting_spectrum_W(s, q));
  return c;
}

inline SpectrumCurve exact_Rhat_curve(const MarkovSpec& s, const std::vector<double>& grid) {
  SpectrumCurve c;
  c.kind = "exact-Rhat";
  c.q = grid;
  for (double q : grid) {
    auto v = nonoverlap_spectrum_Rhat(s, q);
    c.value.push_back(v ? *v : std::nan(""));
  }
  return c;
}

}  // namespace recur
