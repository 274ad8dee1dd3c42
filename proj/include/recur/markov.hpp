#pragma once

// Order-k Markov sources over a finite alphabet: the finite-range Gibbsian
// sources of this library. With the potential phi(a_1^{k+1}) = log p(a_1^k ->
// a_{k+1}) the measure satisfies the Gibbs identity exactly,
//
//   mu([a_1^n]) = pi(a_1^k) * exp(S_{n-k} phi),   n >= k,
//
// so every cylinder mass, energy and spectrum has a closed-form oracle.
// Contexts (k-words) are indexed base-|A| with the oldest symbol most
// significant; k = 0 is the Bernoulli case with a single empty context.

#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "recur/core.hpp"
#include "recur/linalg.hpp"
#include "recur/potential.hpp"
#include "recur/rng.hpp"
#include "recur/stream.hpp"
#include "recur/transfer.hpp"

namespace recur {

struct MarkovSpec {
  unsigned alphabet = 0;
  unsigned order = 0;                        // k; 0 = Bernoulli
  std::vector<std::vector<double>> kernel;   // |A|^k rows of |A| probabilities
  bool subshift = false;                     // zeros allowed only here
  std::vector<double> stationary;            // pi over contexts, filled on validation

  std::uint64_t context_count() const { return pow_u64(alphabet, order); }

  std::uint64_t shift_context(std::uint64_t c, Symbol a) const {
    if (order == 0) return 0;
    return (c % pow_u64(alphabet, order - 1)) * alphabet + a;
  }

  bool validated() const { return !stationary.empty(); }
};

// Row-stochastic transition matrix of the context chain.
inline Matrix context_chain(const MarkovSpec& s) {
  const std::uint64_t m = s.context_count();
  Matrix p(m, m, 0.0);
  for (std::uint64_t c = 0; c < m; ++c)
    for (unsigned a = 0; a < s.alphabet; ++a)
      p.at(c, s.shift_context(c, static_cast<Symbol>(a))) += s.kernel[c][a];
  return p;
}

// Validates invariants and computes the stationary distribution (power
// iteration on the transposed chain, residual below 1e-13). Throws
// std::invalid_argument on any violation.
inline MarkovSpec make_markov_spec(unsigned alphabet, unsigned order,
                                   std::vector<std::vector<double>> kernel,
                                   bool subshift = false) {
  if (alphabet < 2) throw std::invalid_argument("markov: alphabet size must be >= 2");
  MarkovSpec s;
  s.alphabet = alphabet;
  s.order = order;
  s.kernel = std::move(kernel);
  s.subshift = subshift;

  const std::uint64_t contexts = s.context_count();
  if (s.kernel.size() != contexts)
    throw std::invalid_argument("markov: kernel must have |A|^k rows");
  for (const auto& row : s.kernel) {
    if (row.size() != alphabet)
      throw std::invalid_argument("markov: kernel row must have |A| entries");
    double sum = 0.0;
    for (double p : row) {
      if (p < 0.0) throw std::invalid_argument("markov: negative kernel entry");
      if (p == 0.0 && !subshift)
        throw std::invalid_argument("markov: zero kernel entry in full-shift mode");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw std::invalid_argument("markov: kernel row does not sum to 1");
  }

  if (order == 0) {
    s.stationary = {1.0};
    return s;
  }

  Matrix chain = context_chain(s);
  if (!irreducible(chain))
    throw std::invalid_argument("markov: context chain is reducible");
  PerronResult left = perron_left(chain);
  s.stationary = std::move(left.right);

  // Stationarity residual check, 1e-10 tolerance per contract (the power
  // iteration itself converges far tighter).
  std::vector<double> piP(contexts, 0.0);
  for (std::uint64_t c = 0; c < contexts; ++c)
    for (std::uint64_t d = 0; d < contexts; ++d)
      piP[d] += s.stationary[c] * chain.at(c, d);
  for (std::uint64_t c = 0; c < contexts; ++c)
    if (std::abs(piP[c] - s.stationary[c]) > 1e-10)
      throw std::invalid_argument("markov: stationary distribution residual too large");
  return s;
}

inline MarkovSpec make_bernoulli(std::vector<double> probabilities) {
  const unsigned alphabet = static_cast<unsigned>(probabilities.size());
  return make_markov_spec(alphabet, 0, {std::move(probabilities)});
}

inline bool maximal_entropy(const MarkovSpec& s) {
  const double uniform = 1.0 / static_cast<double>(s.alphabet);
  for (const auto& row : s.kernel)
    for (double p : row)
      if (std::abs(p - uniform) > 1e-14) return false;
  return true;
}

struct CylinderMeasure {
  double log_mu = neg_inf;
  bool forbidden = false;  // word crosses a zero-probability transition

  double mu() const { return forbidden ? 0.0 : std::exp(log_mu); }
};

// Exact stationary cylinder mass. For n >= k this is the pi-weighted product
// of kernel entries; for n < k it is the marginal of pi over all contexts
// extending the word (contexts sharing a prefix are contiguous by encoding).
inline CylinderMeasure log_cylinder_measure(const MarkovSpec& s, const Word& w) {
  if (!s.validated()) throw std::logic_error("markov: spec not validated");
  if (w.empty()) throw std::invalid_argument("cylinder_measure: empty word");
  for (Symbol a : w)
    if (a >= s.alphabet) throw std::invalid_argument("cylinder_measure: symbol out of range");

  const unsigned k = s.order;
  const std::size_t n = w.size();

  if (n < k) {
    const std::uint64_t block = pow_u64(s.alphabet, k - static_cast<unsigned>(n));
    const std::uint64_t start = encode_word(w, s.alphabet) * block;
    double mass = 0.0;
    for (std::uint64_t c = start; c < start + block; ++c) mass += s.stationary[c];
    if (mass == 0.0) return {neg_inf, true};
    return {std::log(mass), false};
  }

  Word head(w.begin(), w.begin() + k);
  std::uint64_t ctx = encode_word(head, s.alphabet);
  double pi0 = s.stationary[ctx];
  if (pi0 == 0.0) return {neg_inf, true};
  double log_mu = std::log(pi0);
  for (std::size_t i = k; i < n; ++i) {
    double p = s.kernel[ctx][w[i]];
    if (p == 0.0) return {neg_inf, true};
    log_mu += std::log(p);
    ctx = s.shift_context(ctx, w[i]);
  }
  return {log_mu, false};
}

// phi(a_1^{k+1}) = log p(a_1^k -> a_{k+1}); zero pressure by construction.
inline PotentialTable markov_potential_unchecked(const MarkovSpec& s) {
  PotentialTable pot;
  pot.alphabet = s.alphabet;
  pot.range = s.order + 1;
  pot.values.resize(pow_u64(s.alphabet, pot.range));
  for (std::uint64_t c = 0; c < s.context_count(); ++c)
    for (unsigned a = 0; a < s.alphabet; ++a) {
      double p = s.kernel[c][a];
      pot.values[c * s.alphabet + a] = p > 0.0 ? std::log(p) : neg_inf;
    }
  return pot;
}

// Public constructor: requires a strictly positive kernel and verifies the
// normalization P(phi) = 0 through the transfer operator.
inline PotentialTable potential_from_markov(const MarkovSpec& s) {
  if (!s.validated()) throw std::logic_error("markov: spec not validated");
  for (const auto& row : s.kernel)
    for (double p : row)
      if (p <= 0.0)
        throw std::invalid_argument("potential_from_markov: kernel must be strictly positive");
  PotentialTable pot = markov_potential_unchecked(s);
  double p0 = pressure(pot, 1.0);
  if (std::abs(p0) > 1e-10)
    throw std::logic_error("potential_from_markov: potential failed normalization check");
  return pot;
}

// Windowed energy S_{n-m+1} phi = sum of phi over all m-windows of the word.
// Requires n >= m. For n >= k: log mu([a_1^n]) = log pi(a_1^k) + energy of
// the n-k windows, exactly.
inline double energy(const MarkovSpec& s, const Word& w) {
  if (!s.validated()) throw std::logic_error("markov: spec not validated");
  const unsigned m = s.order + 1;
  if (w.size() < m) throw std::invalid_argument("energy: word shorter than potential range");

  double sum = 0.0;
  std::uint64_t ctx = 0;
  for (unsigned i = 0; i + 1 < m; ++i) ctx = ctx * s.alphabet + w[i];
  for (std::size_t i = m - 1; i < w.size(); ++i) {
    double p = s.kernel[ctx][w[i]];
    sum += p > 0.0 ? std::log(p) : neg_inf;
    ctx = s.shift_context(ctx, w[i]);
  }
  return sum;
}

namespace detail {

// Per-context cumulative symbol probabilities, shared across all cursors of
// one source so that cursor creation stays cheap inside sampling loops.
struct SamplerTables {
  unsigned alphabet;
  unsigned order;
  std::vector<double> context_cdf;  // pi cumulative, size |A|^k
  std::vector<double> symbol_cdf;   // per-context cumulative, row-major
  std::vector<std::uint64_t> shift; // context transition table, size |A|^k * |A|

  explicit SamplerTables(const MarkovSpec& s)
      : alphabet(s.alphabet), order(s.order) {
    const std::uint64_t contexts = s.context_count();
    context_cdf.resize(contexts);
    double acc = 0.0;
    for (std::uint64_t c = 0; c < contexts; ++c) {
      acc += s.stationary[c];
      context_cdf[c] = acc;
    }
    context_cdf.back() = 1.0;

    symbol_cdf.resize(contexts * alphabet);
    shift.resize(contexts * alphabet);
    for (std::uint64_t c = 0; c < contexts; ++c) {
      double row_acc = 0.0;
      for (unsigned a = 0; a < alphabet; ++a) {
        row_acc += s.kernel[c][a];
        symbol_cdf[c * alphabet + a] = row_acc;
        shift[c * alphabet + a] = s.shift_context(c, static_cast<Symbol>(a));
      }
      symbol_cdf[c * alphabet + alphabet - 1] = 1.0;
    }
  }
};

}  // namespace detail

// Stationary emission: the initial context is drawn from pi and its k symbols
// are emitted first, then the kernel drives one symbol per pull.
class MarkovGen {
 public:
  MarkovGen(std::shared_ptr<const detail::SamplerTables> tables, std::uint64_t engine_seed)
      : tables_(std::move(tables)), rng_(engine_seed) {
    ctx_ = pick(tables_->context_cdf.data(), tables_->context_cdf.size());
    pending_ = tables_->order;
  }

  Symbol operator()() {
    if (pending_ > 0) {
      // peel symbols of the initial context, oldest first
      std::uint64_t div = pow_u64(tables_->alphabet, pending_ - 1);
      --pending_;
      return static_cast<Symbol>((ctx_ / div) % tables_->alphabet);
    }
    std::uint64_t a = pick(tables_->symbol_cdf.data() + ctx_ * tables_->alphabet,
                           tables_->alphabet);
    ctx_ = tables_->shift[ctx_ * tables_->alphabet + a];
    return static_cast<Symbol>(a);
  }

 private:
  std::uint64_t pick(const double* cdf, std::uint64_t size) {
    double u = rng_.next_u01();
    for (std::uint64_t i = 0; i + 1 < size; ++i)
      if (u < cdf[i]) return i;
    return size - 1;
  }

  std::shared_ptr<const detail::SamplerTables> tables_;
  Rng rng_;
  std::uint64_t ctx_;
  unsigned pending_;
};

// A seeded Markov source: hands out independent, replayable cursors. The pair
// (seed, offset) fully determines a cursor's stream.
class MarkovSource {
 public:
  using Cursor = StreamCursor<MarkovGen>;

  MarkovSource(MarkovSpec spec, std::uint64_t seed)
      : spec_(std::move(spec)), seed_(seed) {
    if (!spec_.validated()) throw std::logic_error("MarkovSource: spec not validated");
    tables_ = std::make_shared<const detail::SamplerTables>(spec_);
  }

  Cursor cursor(std::uint64_t offset, std::uint64_t budget) const {
    return Cursor(MarkovGen(tables_, mix_seed(seed_, offset)), budget);
  }

  const MarkovSpec& spec() const { return spec_; }
  std::uint64_t seed() const { return seed_; }

 private:
  MarkovSpec spec_;
  std::uint64_t seed_;
  std::shared_ptr<const detail::SamplerTables> tables_;
};

}  // namespace recur
