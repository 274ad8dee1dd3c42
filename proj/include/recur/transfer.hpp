#pragma once

// Transfer operator for a finite-range potential and topological pressure as
// the log of its Perron eigenvalue. States are (m-1)-word contexts; the
// transition c -> c' exists when c' is c shifted by one symbol, and carries
// weight exp(scale * phi(c . last(c'))). For range-1 potentials the operator
// collapses to the scalar sum_a exp(scale * phi(a)).

#include <cmath>
#include <stdexcept>

#include "recur/linalg.hpp"
#include "recur/potential.hpp"

namespace recur {

// Forbidden words (phi = -inf) must stay forbidden under any scale; a plain
// product would produce NaN at scale 0 and +inf at negative scales.
inline double scale_potential_value(double phi, double scale) {
  return phi == neg_inf ? neg_inf : scale * phi;
}

// Builds exp(scale * phi - offset) entrywise; factoring out the offset keeps
// the entries in floating range for any scale.
inline Matrix transfer_matrix(const PotentialTable& pot, double scale,
                              double offset) {
  pot.check_shape();
  const unsigned A = pot.alphabet;
  const unsigned m = pot.range;
  if (m == 1) {
    Matrix L(1, 1, 0.0);
    for (unsigned a = 0; a < A; ++a) {
      double w = scale_potential_value(pot.values[a], scale);
      if (w != neg_inf) L.at(0, 0) += std::exp(w - offset);
    }
    return L;
  }
  const std::uint64_t contexts = pow_u64(A, m - 1);
  const std::uint64_t tail_mod = pow_u64(A, m - 2);
  Matrix L(contexts, contexts, 0.0);
  for (std::uint64_t c = 0; c < contexts; ++c) {
    for (unsigned a = 0; a < A; ++a) {
      double w = scale_potential_value(pot.values[c * A + a], scale);
      if (w == neg_inf) continue;  // forbidden word in subshift mode
      std::uint64_t next = (c % tail_mod) * A + a;
      L.at(c, next) += std::exp(w - offset);
    }
  }
  return L;
}

// P(scale * phi) = log of the Perron eigenvalue. Deterministic: fixed start
// vector, fixed iteration order. Throws on a reducible (subshift) operator.
inline double pressure(const PotentialTable& pot, double scale) {
  pot.check_shape();
  double offset = neg_inf;
  for (double v : pot.values) {
    double w = scale_potential_value(v, scale);
    if (w != neg_inf && (offset == neg_inf || w > offset)) offset = w;
  }
  if (offset == neg_inf)
    throw std::invalid_argument("pressure: potential has no admissible word");
  Matrix L = transfer_matrix(pot, scale, offset);
  return offset + std::log(perron(L).value);
}

}  // namespace recur
