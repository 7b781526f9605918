#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>

#include "oracles.hpp"
#include "symdyn/combinatorics.hpp"
#include "symdyn/factor_index.hpp"
#include "symdyn/word.hpp"

using namespace symdyn;

namespace {

std::size_t brute_recurrence(const FiniteWord& w, std::size_t k) {
  auto all = oracle::factor_set(w, k);
  for (std::size_t window = k; window <= w.size(); ++window) {
    bool ok = true;
    for (std::size_t s = 0; ok && s + window <= w.size(); ++s) {
      FiniteWord part(w.begin() + s, w.begin() + s + window);
      ok = oracle::factor_set(part, k) == all;
    }
    if (ok) return window;
  }
  return w.size();
}

}  // namespace

TEST_CASE("alphabet names, renders and parses") {
  Alphabet ab({"a", "b"});
  CHECK(ab.size() == 2);
  CHECK(ab.find("b") == Symbol{1});
  CHECK_FALSE(ab.find("c"));
  CHECK(ab.render(FiniteWord{0, 1, 1, 0}) == "abba");
  CHECK(ab.parse("abba") == FiniteWord{0, 1, 1, 0});
  CHECK_THROWS_AS(ab.parse("abc"), PreconditionError);
  CHECK(Alphabet({"-1", "0", "1"}).render(FiniteWord{0, 2, 1}) == "-1 1 0");
  CHECK_THROWS_AS(Alphabet({"a", "a"}), PreconditionError);
  CHECK_THROWS_AS(Alphabet(std::vector<std::string>{}), PreconditionError);
}

TEST_CASE("finite word stream memoises, restarts and stops at its end") {
  WordStream s = finite_word_stream(FiniteWord{0, 1, 0, 0, 1}, Alphabet({"a", "b"}));
  CHECK(s.symbol_at(3) == 0);
  CHECK(s.prefix(5).size() == 5);
  CHECK(s.length() == std::size_t{5});
  CHECK_THROWS_AS(s.prefix(6), HorizonError);
  s.restart();
  CHECK(s.symbol_at(4) == 1);
}

TEST_CASE("suffix array is sorted and LCP matches direct comparison") {
  oracle::WordGen gen(5);
  for (int trial = 0; trial < 200; ++trial) {
    FiniteWord w = gen.word(gen.uniform(1, 120), gen.uniform(1, 4));
    auto sa = build_suffix_array(w);
    auto lcp = build_lcp(w, sa);
    REQUIRE(sa.size() == w.size());
    for (std::size_t j = 1; j < sa.size(); ++j) {
      auto a = w.begin() + sa[j - 1], b = w.begin() + sa[j];
      REQUIRE(std::lexicographical_compare(a, w.end(), b, w.end()));
      std::size_t l = 0;
      while (a + l != w.end() && b + l != w.end() && a[l] == b[l]) ++l;
      REQUIRE(static_cast<std::size_t>(lcp[j]) == l);
    }
  }
}

TEST_CASE("factor counts and factor lists match brute force on random words") {
  oracle::WordGen gen(17);
  for (int trial = 0; trial < 300; ++trial) {
    FiniteWord w = gen.word(gen.uniform(1, 200), gen.uniform(1, 5));
    const std::size_t horizon = std::min<std::size_t>(w.size(), 12);
    FactorIndex index(w, horizon);
    CHECK(index.count(0) == 1);
    for (std::size_t k = 1; k <= horizon; ++k) {
      auto brute = oracle::factor_set(w, k);
      REQUIRE(index.count(k) == brute.size());
      auto listed = index.factors(k);
      REQUIRE(std::vector<FiniteWord>(brute.begin(), brute.end()) == listed);
      for (const auto& block : index.blocks(k)) {
        FiniteWord f = index.word(block, k);
        std::size_t expected = 0;
        for (std::size_t i = 0; i + k <= w.size(); ++i) expected += std::equal(f.begin(), f.end(), w.begin() + i);
        auto occ = index.occurrences(block);
        REQUIRE(occ.size() == expected);
        REQUIRE(std::is_sorted(occ.begin(), occ.end()));
        REQUIRE(index.contains(f));
      }
    }
  }
}

TEST_CASE("complexity is non-decreasing on words whose last letter recurs") {
  // T(k+1) >= T(k) whenever every factor extends to the right, which holds
  // if the prefix is the start of a periodic word of period dividing n.
  oracle::WordGen gen(3);
  for (int trial = 0; trial < 100; ++trial) {
    FiniteWord base = gen.word(gen.uniform(1, 9), 3);
    FiniteWord w;
    for (int r = 0; r < 20; ++r) w.insert(w.end(), base.begin(), base.end());
    FactorIndex index(w, std::min<std::size_t>(w.size() - base.size(), 15));
    for (std::size_t k = 1; k < index.horizon(); ++k) REQUIRE(index.count(k) <= index.count(k + 1));
    REQUIRE(index.count(index.horizon()) <= base.size());
  }
}

TEST_CASE("index refuses lengths past its horizon") {
  FactorIndex index(FiniteWord{0, 1, 0, 1, 1}, 3);
  CHECK(index.horizon() == 3);
  CHECK_THROWS_AS(index.count(4), HorizonError);
  CHECK_THROWS_AS(special_factors(index, 3), HorizonError);
  CHECK_THROWS_AS(FactorIndex(FiniteWord{0, 1}, 3), HorizonError);
}

TEST_CASE("complexity CSV") {
  WordStream s = finite_word_stream(FiniteWord{0, 1, 0, 0, 1, 0, 1, 0}, Alphabet({"a", "b"}));
  auto report = complexity_table(s, 8, 3);
  CHECK(report.prefix_len == 8);
  CHECK(report.at(1) == 2);
  CHECK(report.at(2) == 3);
  CHECK(report.at(3) == 4);
  CHECK(report.to_csv() == "k,T\n1,2\n2,3\n3,4\n");
}

TEST_CASE("special factors match brute-force valences") {
  oracle::WordGen gen(23);
  for (int trial = 0; trial < 150; ++trial) {
    FiniteWord w = gen.word(gen.uniform(4, 150), gen.uniform(2, 3));
    FactorIndex index(w, std::min<std::size_t>(w.size(), 8));
    for (std::size_t k = 1; k + 1 <= index.horizon(); ++k) {
      std::map<FiniteWord, std::set<Symbol>> left, right;
      for (std::size_t i = 0; i + k + 1 <= w.size(); ++i) {
        FiniteWord f(w.begin() + i + 1, w.begin() + i + 1 + k), g(w.begin() + i, w.begin() + i + k);
        left[f].insert(w[i]);
        right[g].insert(w[i + k]);
      }
      auto sf = special_factors(index, k);
      REQUIRE(sf.all.size() == index.count(k));
      for (const auto& v : sf.all) {
        REQUIRE(v.left_valence == left[v.word].size());
        REQUIRE(v.right_valence == right[v.word].size());
      }
      for (const auto& v : sf.bispecial()) REQUIRE((v.left_special() && v.right_special()));
    }
  }
}

TEST_CASE("balance reports a witness pair") {
  Alphabet ab({"a", "b"});
  FactorIndex unbalanced(ab.parse("aabbaabbaa"), 6);
  auto v = is_balanced(unbalanced, 0, 4);
  CHECK_FALSE(v.balanced);
  CHECK(v.k == std::size_t{2});
  REQUIRE(v.witness);
  CHECK(ab.render(v.witness->first) == "bb");
  CHECK(ab.render(v.witness->second) == "aa");

  FactorIndex sturm(ab.parse("abaababaabaababaababa"), 10);
  CHECK(is_balanced(sturm, 0, 10).balanced);
  CHECK(is_balanced(sturm, 1, 10).balanced);
}

TEST_CASE("balance agrees with brute-force letter counts") {
  oracle::WordGen gen(31);
  for (int trial = 0; trial < 150; ++trial) {
    FiniteWord w = gen.word(gen.uniform(2, 80), 2);
    const std::size_t max_k = std::min<std::size_t>(w.size(), 10);
    FactorIndex index(w, max_k);
    std::optional<std::size_t> first;
    for (std::size_t k = 1; k <= max_k && !first; ++k) {
      std::size_t lo = k, hi = 0;
      for (const auto& f : oracle::factor_set(w, k)) {
        std::size_t c = std::count(f.begin(), f.end(), Symbol{0});
        lo = std::min(lo, c);
        hi = std::max(hi, c);
      }
      if (hi - lo > 1) first = k;
    }
    auto v = is_balanced(index, 0, max_k);
    REQUIRE(v.balanced == !first.has_value());
    REQUIRE(v.k == first);
    if (v.witness) {
      auto c1 = std::count(v.witness->first.begin(), v.witness->first.end(), Symbol{0});
      auto c2 = std::count(v.witness->second.begin(), v.witness->second.end(), Symbol{0});
      REQUIRE(c2 - c1 >= 2);
    }
  }
}

TEST_CASE("recurrence function matches sliding-window brute force") {
  oracle::WordGen gen(41);
  for (int trial = 0; trial < 120; ++trial) {
    FiniteWord w = gen.word(gen.uniform(4, 90), gen.uniform(1, 3));
    FactorIndex index(w, std::min<std::size_t>(w.size(), 4));
    for (std::size_t k = 1; k <= index.horizon(); ++k) {
      const std::size_t brute = brute_recurrence(w, k);
      auto r = recurrence_function(index, k);
      if (2 * brute > w.size()) {
        REQUIRE_FALSE(r);
      } else {
        REQUIRE(r == brute);
      }
    }
  }
}

TEST_CASE("word distance and exact mismatch density") {
  Alphabet ab({"a", "b"});
  WordStream w = finite_word_stream(ab.parse("aaaaaaaa"), ab);
  WordStream v = finite_word_stream(ab.parse("abaaaaab"), ab);
  auto d = word_distance(w, v, 8);
  CHECK(d.mismatches == 2);
  CHECK(d.hamming == doctest::Approx(0.5 + 1.0 / 128));
  CHECK(d.density() == Rational(1, 4));
  CHECK(word_distance(w, w, 8).hamming == 0.0);
  CHECK_THROWS_AS(word_distance(w, v, 0), PreconditionError);
}

TEST_CASE("factor equivalence finds the first differing length") {
  Alphabet ab({"a", "b"});
  WordStream w = finite_word_stream(ab.parse("abababababab"), ab);
  WordStream v = finite_word_stream(ab.parse("babababababa"), ab);
  WordStream u = finite_word_stream(ab.parse("aabaabaabaab"), ab);
  CHECK(factor_equivalent(w, v, 12, 6).equivalent);
  auto e = factor_equivalent(w, u, 12, 6);
  CHECK_FALSE(e.equivalent);
  CHECK(e.first_k == std::size_t{2});
}

TEST_CASE("letter frequencies are exact") {
  Alphabet abc({"a", "b", "c"});
  WordStream w = finite_word_stream(abc.parse("aabacab"), abc);
  auto f = letter_frequencies(w, 7);
  CHECK(f == std::vector<Rational>{Rational(4, 7), Rational(2, 7), Rational(1, 7)});
}
