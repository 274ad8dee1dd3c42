#pragma once

// Streaming recurrence-time scanners. One pattern, one pass: a prefix-function
// (KMP) automaton consumes symbols from a pull cursor in O(B + n) time and
// O(n) space. Positions are 1-based and relative to where the scan started,
// matching the usual hitting/return time conventions:
//
//   hitting_time            tau(y) = inf{ j >= 1 : y_j^{j+n-1} = a_1^n }
//   return_time             r_n(x) = inf{ k >= 2 : x_k^{k+n-1} = x_1^n }
//   non_overlapping_return  rhat_n(x) = inf{ k >= 1 : x_{kn+1}^{(k+1)n} = x_1^n }
//
// A scan that exhausts the stream budget B without a complete match returns a
// censored result carrying B; callers decide how to treat it.

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "recur/pattern.hpp"
#include "recur/stream.hpp"

namespace recur {

class ScanResult {
 public:
  static ScanResult hit(std::uint64_t value) { return ScanResult(value, 0, 0, false); }

  // bound: the largest value certified to be <= the true (unobserved) time,
  // in the scan's own units (positions for w and r, blocks for rhat).
  static ScanResult censored_at(std::uint64_t bound, std::uint64_t budget) {
    return ScanResult(0, bound, budget, true);
  }

  bool censored() const { return censored_; }

  std::uint64_t value() const {
    if (censored_) throw std::logic_error("ScanResult: censored");
    return value_;
  }

  // Exact value, or the certified lower bound when censored. Substituting it
  // keeps q > 0 moment estimates certified lower bounds and q < 0
  // contributions certified upper bounds.
  std::uint64_t value_or_bound() const { return censored_ ? bound_ : value_; }

  std::uint64_t censor_bound() const { return bound_; }
  std::uint64_t censor_budget() const { return budget_; }

 private:
  ScanResult(std::uint64_t v, std::uint64_t bound, std::uint64_t budget, bool c)
      : value_(v), bound_(bound), budget_(budget), censored_(c) {}

  std::uint64_t value_;
  std::uint64_t bound_;
  std::uint64_t budget_;
  bool censored_;
};

// Online KMP automaton. state() counts currently matched symbols; feed()
// reports whether a match ends at the symbol just consumed.
class PatternAutomaton {
 public:
  explicit PatternAutomaton(const Pattern& pattern)
      : word_(pattern.word()), pi_(prefix_function(word_)) {}

  bool feed(Symbol c) {
    std::uint32_t q = state_;
    while (q > 0 && word_[q] != c) q = pi_[q - 1];
    if (word_[q] == c) ++q;
    if (q == word_.size()) {
      state_ = pi_[q - 1];
      return true;
    }
    state_ = q;
    return false;
  }

  std::uint32_t state() const { return state_; }
  void set_state(std::uint32_t q) { state_ = q; }
  std::uint32_t size() const { return static_cast<std::uint32_t>(word_.size()); }
  const std::vector<std::uint32_t>& prefix_table() const { return pi_; }

 private:
  Word word_;
  std::vector<std::uint32_t> pi_;
  std::uint32_t state_ = 0;
};

// Smallest j >= 1 with stream[j..j+n-1] = pattern; consumes at most j+n-1
// symbols. Censored when no match ends within the budget.
template <SymbolSource S>
ScanResult hitting_time(const Pattern& pattern, S& stream) {
  const std::uint64_t n = pattern.size();
  const std::uint64_t base = stream.position();
  if (stream.budget() - base < n)
    throw std::invalid_argument("hitting_time: budget smaller than pattern");

  PatternAutomaton automaton(pattern);
  while (stream.position() < stream.budget()) {
    if (automaton.feed(stream.next()))
      return ScanResult::hit(stream.position() - base - n + 1);
  }
  // no match ends within B, so the true j satisfies j >= B - n + 2
  const std::uint64_t b = stream.budget() - base;
  return ScanResult::censored_at(b - n + 2, b);
}

struct ReturnScan {
  ScanResult result;
  Word pattern;  // the first n symbols that defined the target cylinder
};

// Paper convention: k = 2 means the word reoccurs one shift later. The first
// n symbols are consumed to form the pattern; overlapping reoccurrences are
// found by seeding the automaton with the pattern's longest proper border.
template <SymbolSource S>
ReturnScan return_time(S& stream, std::uint32_t n) {
  if (n == 0) throw std::invalid_argument("return_time: n must be >= 1");
  const std::uint64_t base = stream.position();
  if (stream.budget() - base < 2ull * n)
    throw std::invalid_argument("return_time: budget smaller than 2n");

  Word head(n);
  for (auto& s : head) s = stream.next();
  Pattern pattern(std::move(head));

  PatternAutomaton automaton(pattern);
  automaton.set_state(automaton.prefix_table()[n - 1]);
  while (stream.position() < stream.budget()) {
    if (automaton.feed(stream.next())) {
      std::uint64_t end = stream.position() - base;
      return {ScanResult::hit(end - n + 1), pattern.word()};
    }
  }
  const std::uint64_t b = stream.budget() - base;
  return {ScanResult::censored_at(b - n + 2, b), pattern.word()};
}

// Smallest k >= 1 whose n-block x_{kn+1}^{(k+1)n} equals block 0. Blocks are
// consumed whole; a full block must fit in the remaining budget.
template <SymbolSource S>
ScanResult non_overlapping_return_time(S& stream, std::uint32_t n) {
  if (n == 0)
    throw std::invalid_argument("non_overlapping_return_time: n must be >= 1");
  const std::uint64_t base = stream.position();
  if (stream.budget() - base < 2ull * n)
    throw std::invalid_argument("non_overlapping_return_time: budget smaller than 2n");

  Word block0(n);
  for (auto& s : block0) s = stream.next();

  std::uint64_t k = 0;
  while (stream.budget() - stream.position() >= n) {
    ++k;
    bool match = true;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (stream.next() != block0[i]) match = false;
    }
    if (match) return ScanResult::hit(k);
  }
  // blocks 1..k were examined without a match, so the true rhat is > k
  return ScanResult::censored_at(k + 1, stream.budget() - base);
}

// All (possibly overlapping) match positions within the budget, increasing.
template <SymbolSource S>
std::vector<std::uint64_t> scan_all(const Pattern& pattern, S& stream) {
  const std::uint64_t n = pattern.size();
  const std::uint64_t base = stream.position();
  std::vector<std::uint64_t> positions;
  PatternAutomaton automaton(pattern);
  while (stream.position() < stream.budget()) {
    if (automaton.feed(stream.next()))
      positions.push_back(stream.position() - base - n + 1);
  }
  return positions;
}

}  // namespace recur
