#pragma once

// Finite-range potential: one real value (in nats) per m-word. Words are
// indexed base-|A| with the leading symbol most significant. A normalized
// potential has zero topological pressure and strictly negative entries.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "recur/core.hpp"

namespace recur {

inline std::uint64_t pow_u64(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  while (exp--) r *= base;
  return r;
}

inline std::uint64_t encode_word(const Word& w, unsigned alphabet) {
  std::uint64_t idx = 0;
  for (Symbol a : w) idx = idx * alphabet + a;
  return idx;
}

struct PotentialTable {
  unsigned alphabet = 0;
  unsigned range = 0;            // m >= 1
  std::vector<double> values;    // phi(a_1^m), size |A|^m

  double value_at(std::uint64_t word_index) const { return values[word_index]; }

  void check_shape() const {
    if (alphabet < 2 || range < 1 ||
        values.size() != pow_u64(alphabet, range))
      throw std::invalid_argument("PotentialTable: inconsistent shape");
  }
};

}  // namespace recur
