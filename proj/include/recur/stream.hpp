#pragma once

// Pull-based symbol streams. A cursor produces one symbol per pull, keeps a
// 1-indexed position counter (position() is the index of the last pulled
// symbol) and enforces a hard budget B on the number of symbols it will ever
// emit. Sources generate lazily, so scanning at e^{nh} scale never
// materializes a stream.

#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "recur/core.hpp"

namespace recur {

template <typename S>
concept SymbolSource = requires(S s, const S cs) {
  { s.next() } -> std::same_as<Symbol>;
  { cs.position() } -> std::same_as<std::uint64_t>;
  { cs.budget() } -> std::same_as<std::uint64_t>;
};

template <SymbolSource S>
bool exhausted(const S& s) {
  return s.position() >= s.budget();
}

// Wraps a generator callable () -> Symbol with position/budget bookkeeping.
template <typename Gen>
class StreamCursor {
 public:
  StreamCursor(Gen gen, std::uint64_t budget)
      : gen_(std::move(gen)), budget_(budget) {}

  Symbol next() {
    if (pos_ >= budget_) throw std::logic_error("StreamCursor: budget exceeded");
    ++pos_;
    return gen_();
  }

  std::uint64_t position() const { return pos_; }
  std::uint64_t budget() const { return budget_; }

 private:
  Gen gen_;
  std::uint64_t pos_ = 0;
  std::uint64_t budget_;
};

// Fixed-word stream (budget = word length). Test and file-input pathway.
class WordCursor {
 public:
  explicit WordCursor(Word w) : word_(std::move(w)) {}

  Symbol next() {
    if (pos_ >= word_.size()) throw std::logic_error("WordCursor: exhausted");
    return word_[pos_++];
  }

  std::uint64_t position() const { return pos_; }
  std::uint64_t budget() const { return word_.size(); }

 private:
  Word word_;
  std::uint64_t pos_ = 0;
};

// Periodic repetition of a word up to the given budget ("abab...").
class PeriodicCursor {
 public:
  PeriodicCursor(Word w, std::uint64_t budget)
      : word_(std::move(w)), budget_(budget) {
    if (word_.empty()) throw std::invalid_argument("PeriodicCursor: empty word");
  }

  Symbol next() {
    if (pos_ >= budget_) throw std::logic_error("PeriodicCursor: exhausted");
    Symbol s = word_[pos_ % word_.size()];
    ++pos_;
    return s;
  }

  std::uint64_t position() const { return pos_; }
  std::uint64_t budget() const { return budget_; }

 private:
  Word word_;
  std::uint64_t pos_ = 0;
  std::uint64_t budget_;
};

// Append-only materialization of another cursor, for algorithms that revisit
// earlier positions (index is 0-based here; position semantics stay 1-based
// at the cursor level).
template <SymbolSource S>
class BufferedStream {
 public:
  explicit BufferedStream(S cursor) : cursor_(std::move(cursor)) {}

  // Returns symbol at 1-based position p, pulling as needed.
  Symbol at(std::uint64_t p) {
    while (buf_.size() < p) buf_.push_back(cursor_.next());
    return buf_[p - 1];
  }

  bool can_reach(std::uint64_t p) const {
    return p <= cursor_.budget();
  }

  std::uint64_t budget() const { return cursor_.budget(); }

 private:
  S cursor_;
  std::vector<Symbol> buf_;
};

}  // namespace recur
