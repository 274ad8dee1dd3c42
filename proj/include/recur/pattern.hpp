#pragma once

// Pattern: an n-cylinder word a_1^n together with its minimal internal
// period p, the smallest shift k in [1, n] with a_{i+k} = a_i on the overlap.
// The period is derived from the KMP prefix function and cached lazily.

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "recur/core.hpp"

namespace recur {

// pi[i] = length of the longest proper border of the prefix of length i+1.
inline std::vector<std::uint32_t> prefix_function(const Word& w) {
  std::vector<std::uint32_t> pi(w.size(), 0);
  for (std::size_t i = 1; i < w.size(); ++i) {
    std::uint32_t k = pi[i - 1];
    while (k > 0 && w[i] != w[k]) k = pi[k - 1];
    if (w[i] == w[k]) ++k;
    pi[i] = k;
  }
  return pi;
}

class Pattern {
 public:
  explicit Pattern(Word word) : word_(std::move(word)) {
    if (word_.empty()) throw std::invalid_argument("Pattern: empty word");
  }

  static Pattern from_string(const std::string& s) {
    return Pattern(word_from_string(s));
  }

  const Word& word() const { return word_; }
  std::uint32_t size() const { return static_cast<std::uint32_t>(word_.size()); }

  // Minimal internal period: n minus the longest proper border length.
  std::uint32_t min_period() const {
    if (min_period_ == 0) {
      const auto pi = prefix_function(word_);
      min_period_ = size() - pi.back();
    }
    return min_period_;
  }

 private:
  Word word_;
  mutable std::uint32_t min_period_ = 0;  // 0 = not yet computed
};

}  // namespace recur
