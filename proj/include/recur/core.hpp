#pragma once

// Basic domain vocabulary shared by every module: symbols, words, and the
// error type used when a source degenerates (zero asymptotic variance).

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace recur {

// A symbol is a small non-negative id < alphabet size. Alphabets are tiny
// (|A| >= 2, at most a few dozen in practice), so one byte is plenty.
using Symbol = std::uint8_t;
using Word = std::vector<Symbol>;

// Thrown by operations that refuse to run on a maximal-entropy source
// (sigma^2 = 0; fluctuation statements are empty there).
class degenerate_source_error : public std::domain_error {
 public:
  explicit degenerate_source_error(const std::string& what)
      : std::domain_error(what) {}
};

inline Word word_from_string(const std::string& s) {
  Word w;
  w.reserve(s.size());
  for (char c : s) {
    if (c < '0') throw std::invalid_argument("bad symbol character");
    w.push_back(static_cast<Symbol>(c - '0'));
  }
  return w;
}

inline std::string word_to_string(const Word& w) {
  std::string s;
  s.reserve(w.size());
  for (Symbol a : w) s.push_back(static_cast<char>('0' + a));
  return s;
}

}  // namespace recur
