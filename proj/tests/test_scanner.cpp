// Scanner tests. The reference point throughout is a naive O(Bn)
// re-comparison oracle; the streaming KMP scanners must agree with it
// exhaustively on small alphabets before anything downstream is trusted.

#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <vector>

#include "recur/pattern.hpp"
#include "recur/rng.hpp"
#include "recur/scanner.hpp"
#include "recur/stream.hpp"

using namespace recur;

namespace {

Word w(const std::string& s) { return word_from_string(s); }

// All 1-based positions j with text[j..j+n-1] == pat, by direct comparison.
std::vector<std::uint64_t> naive_matches(const Word& pat, const Word& text) {
  std::vector<std::uint64_t> out;
  if (pat.empty() || text.size() < pat.size()) return out;
  for (std::size_t j = 0; j + pat.size() <= text.size(); ++j) {
    bool ok = true;
    for (std::size_t i = 0; i < pat.size(); ++i)
      if (text[j + i] != pat[i]) ok = false;
    if (ok) out.push_back(j + 1);
  }
  return out;
}

// Smallest shift k >= 1 with a_{i+k} = a_i on the overlap, by definition.
std::uint32_t naive_min_period(const Word& a) {
  for (std::uint32_t k = 1; k < a.size(); ++k) {
    bool ok = true;
    for (std::size_t i = 0; i + k < a.size(); ++i)
      if (a[i + k] != a[i]) ok = false;
    if (ok) return k;
  }
  return static_cast<std::uint32_t>(a.size());
}

Word random_word(Rng& rng, std::size_t len, unsigned alphabet) {
  Word out(len);
  for (auto& s : out) s = static_cast<Symbol>(rng.next_u64() % alphabet);
  return out;
}

}  // namespace

TEST_CASE("hitting_time matches the definition on hand cases") {
  // alphabet mapping: a=0 b=1 c=2
  {
    WordCursor s(w("2201xxxx"));  // "ccab..."
    REQUIRE(hitting_time(Pattern(w("01")), s).value() == 3);
  }
  {
    WordCursor s(w("0111"));
    REQUIRE(hitting_time(Pattern(w("0")), s).value() == 1);
  }
  {
    PeriodicCursor s(w("01"), 16);  // "ababab..."
    REQUIRE(hitting_time(Pattern(w("010")), s).value() == 1);
  }
  {
    PeriodicCursor s(w("01"), 16);
    REQUIRE(hitting_time(Pattern(w("101")), s).value() == 2);
  }
}

TEST_CASE("hitting_time consumes exactly j+n-1 symbols") {
  PeriodicCursor s(w("01"), 16);
  auto r = hitting_time(Pattern(w("101")), s);
  REQUIRE(r.value() == 2);
  REQUIRE(s.position() == 4);  // j + n - 1
}

TEST_CASE("hitting_time censors when no match fits the budget") {
  PeriodicCursor s(w("0"), 10);
  auto r = hitting_time(Pattern(w("1")), s);
  REQUIRE(r.censored());
  REQUIRE(r.censor_budget() == 10);
  REQUIRE(r.value_or_bound() == 10);  // no match ending <= 10: j >= B - n + 2
  REQUIRE_THROWS_AS(r.value(), std::logic_error);
}

TEST_CASE("hitting_time rejects budgets below the pattern length") {
  WordCursor s(w("01"));
  REQUIRE_THROWS_AS(hitting_time(Pattern(w("010")), s), std::invalid_argument);
}

TEST_CASE("empty patterns are rejected") {
  REQUIRE_THROWS_AS(Pattern(Word{}), std::invalid_argument);
}

TEST_CASE("return_time on hand cases") {
  {
    PeriodicCursor s(w("0"), 32);  // "aaaa..."
    REQUIRE(return_time(s, 2).result.value() == 2);
  }
  {
    PeriodicCursor s(w("01"), 32);  // "abab..."
    REQUIRE(return_time(s, 2).result.value() == 3);
  }
  {
    PeriodicCursor s(w("012"), 32);  // "abcabc..."
    REQUIRE(return_time(s, 3).result.value() == 4);
  }
}

TEST_CASE("return_time requires budget >= 2n") {
  PeriodicCursor s(w("01"), 5);
  REQUIRE_THROWS_AS(return_time(s, 3), std::invalid_argument);
}

TEST_CASE("non_overlapping_return_time on hand cases") {
  {
    PeriodicCursor s(w("01"), 32);  // blocks ab|ab|...
    REQUIRE(non_overlapping_return_time(s, 2).value() == 1);
  }
  {
    WordCursor s(w("011001"));  // blocks ab|ba|ab
    REQUIRE(non_overlapping_return_time(s, 2).value() == 2);
  }
  {
    PeriodicCursor s(w("0"), 32);
    REQUIRE(non_overlapping_return_time(s, 2).value() == 1);
  }
}

TEST_CASE("min_period on hand cases") {
  REQUIRE(Pattern(w("000")).min_period() == 1);
  REQUIRE(Pattern(w("010")).min_period() == 2);
  REQUIRE(Pattern(w("012")).min_period() == 3);
  REQUIRE(Pattern(w("0")).min_period() == 1);
  REQUIRE(Pattern(w("0010")).min_period() == 3);
}

TEST_CASE("min_period equals the definition-level oracle exhaustively") {
  for (unsigned len = 1; len <= 10; ++len) {
    for (std::uint64_t bits = 0; bits < (1ull << len); ++bits) {
      Word word(len);
      for (unsigned i = 0; i < len; ++i)
        word[i] = static_cast<Symbol>((bits >> i) & 1);
      REQUIRE(Pattern(word).min_period() == naive_min_period(word));
    }
  }
}

TEST_CASE("scan_all on hand cases") {
  {
    WordCursor s(w("010101"));
    REQUIRE(scan_all(Pattern(w("01")), s) ==
            std::vector<std::uint64_t>{1, 3, 5});
  }
  {
    WordCursor s(w("0000"));
    REQUIRE(scan_all(Pattern(w("00")), s) ==
            std::vector<std::uint64_t>{1, 2, 3});
  }
  {
    WordCursor s(w("01"));
    REQUIRE(scan_all(Pattern(w("012")), s).empty());
  }
}

TEST_CASE("scanners agree with the naive oracle exhaustively") {
  // Every binary stream of length 12, every pattern of length <= 4.
  const unsigned stream_len = 12;
  for (std::uint64_t sbits = 0; sbits < (1ull << stream_len); ++sbits) {
    Word text(stream_len);
    for (unsigned i = 0; i < stream_len; ++i)
      text[i] = static_cast<Symbol>((sbits >> i) & 1);

    for (unsigned plen = 1; plen <= 4; ++plen) {
      for (std::uint64_t pbits = 0; pbits < (1ull << plen); ++pbits) {
        Word pword(plen);
        for (unsigned i = 0; i < plen; ++i)
          pword[i] = static_cast<Symbol>((pbits >> i) & 1);
        Pattern pat(pword);

        auto expected = naive_matches(pword, text);
        {
          WordCursor s(text);
          REQUIRE(scan_all(pat, s) == expected);
        }
        {
          WordCursor s(text);
          auto hit = hitting_time(pat, s);
          if (expected.empty()) {
            REQUIRE(hit.censored());  // censoring soundness
          } else {
            REQUIRE(hit.value() == expected.front());
          }
        }
      }
    }
  }
}

TEST_CASE("return scanners agree with the naive oracle exhaustively") {
  const unsigned stream_len = 12;
  for (std::uint64_t sbits = 0; sbits < (1ull << stream_len); ++sbits) {
    Word text(stream_len);
    for (unsigned i = 0; i < stream_len; ++i)
      text[i] = static_cast<Symbol>((sbits >> i) & 1);

    for (unsigned n = 1; n <= 4; ++n) {
      Word head(text.begin(), text.begin() + n);
      auto matches = naive_matches(head, text);
      // overlapping return: first match position >= 2
      std::uint64_t expected_r = 0;
      for (auto j : matches)
        if (j >= 2 && expected_r == 0) expected_r = j;
      {
        WordCursor s(text);
        auto rs = return_time(s, n);
        REQUIRE(rs.pattern == head);
        if (expected_r == 0) {
          REQUIRE(rs.result.censored());
        } else {
          REQUIRE(rs.result.value() == expected_r);
        }
      }
      // non-overlapping return: first block k >= 1 equal to block 0
      std::uint64_t expected_rhat = 0;
      for (std::uint64_t k = 1; (k + 1) * n <= stream_len && expected_rhat == 0; ++k) {
        bool eq = true;
        for (unsigned i = 0; i < n; ++i)
          if (text[k * n + i] != head[i]) eq = false;
        if (eq) expected_rhat = k;
      }
      {
        WordCursor s(text);
        auto rhat = non_overlapping_return_time(s, n);
        if (expected_rhat == 0) {
          REQUIRE(rhat.censored());
        } else {
          REQUIRE(rhat.value() == expected_rhat);
        }
      }
    }
  }
}

TEST_CASE("hitting times are monotone in the pattern length") {
  Rng rng(7);
  for (int rep = 0; rep < 200; ++rep) {
    Word x = random_word(rng, 8, 2);
    Word y = random_word(rng, 2048, 2);
    std::uint64_t prev = 0;
    bool censored_seen = false;
    for (unsigned n = 1; n <= 8; ++n) {
      WordCursor s(y);
      auto hn = hitting_time(Pattern(Word(x.begin(), x.begin() + n)), s);
      if (hn.censored()) {
        censored_seen = true;
        continue;
      }
      REQUIRE_FALSE(censored_seen);  // once censored, longer prefixes stay censored
      REQUIRE(hn.value() >= prev);
      prev = hn.value();
    }
  }
}

TEST_CASE("first reoccurrence offset dominates the minimal period") {
  Rng rng(11);
  for (int rep = 0; rep < 500; ++rep) {
    Word x = random_word(rng, 4096, 2);
    WordCursor s(x);
    auto rs = return_time(s, 6);
    if (rs.result.censored()) continue;
    REQUIRE(rs.result.value() - 1 >= Pattern(rs.pattern).min_period());
  }
}

TEST_CASE("restart-based rescans are a subset of scan_all") {
  Rng rng(13);
  for (int rep = 0; rep < 100; ++rep) {
    Word text = random_word(rng, 256, 2);
    Word pword = random_word(rng, 3, 2);
    Pattern pat(pword);

    WordCursor full(text);
    auto all = scan_all(pat, full);

    std::vector<std::uint64_t> restarts;
    WordCursor s(text);
    std::uint64_t base = 0;
    while (s.budget() - s.position() >= pat.size()) {
      auto hit = hitting_time(pat, s);
      if (hit.censored()) break;
      restarts.push_back(base + hit.value());
      base = s.position();
    }
    for (auto pos : restarts)
      REQUIRE(std::find(all.begin(), all.end(), pos) != all.end());
  }
}
