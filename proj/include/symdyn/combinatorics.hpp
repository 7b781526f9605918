#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symdyn/factor_index.hpp"
#include "symdyn/real_constant.hpp"
#include "symdyn/word.hpp"

namespace symdyn {

/// Empirical subword complexity of a prefix. Values are lower bounds for the
/// infinite word; the prefix length is part of the report for that reason.
struct ComplexityReport {
  std::size_t prefix_len = 0;
  std::vector<std::pair<std::size_t, std::size_t>> table;  // (k, T(k)), k = 1..max_k

  std::size_t at(std::size_t k) const;
  /// "k,T" header followed by one row per k.
  std::string to_csv() const;
};

ComplexityReport complexity_table(WordStream& stream, std::size_t prefix_len, std::size_t max_k);
ComplexityReport complexity_table(const FactorIndex& index, std::size_t max_k);

struct FactorValence {
  FiniteWord word;
  std::size_t left_valence = 0;
  std::size_t right_valence = 0;

  bool left_special() const { return left_valence >= 2; }
  bool right_special() const { return right_valence >= 2; }
  bool bispecial() const { return left_special() && right_special(); }
};

struct SpecialFactors {
  std::size_t k = 0;
  /// Every length-k factor with its valences, lexicographic order.
  std::vector<FactorValence> all;

  std::vector<FactorValence> left_special() const;
  std::vector<FactorValence> right_special() const;
  std::vector<FactorValence> bispecial() const;
};

/// Valences come from the length-(k+1) factors, so k + 1 must be within the
/// index horizon.
SpecialFactors special_factors(const FactorIndex& index, std::size_t k);

struct BalanceVerdict {
  bool balanced = true;
  /// First violating length and a pair whose counts of the symbol differ by
  /// at least two (fewer occurrences first).
  std::optional<std::size_t> k;
  std::optional<std::pair<FiniteWord, FiniteWord>> witness;
};

BalanceVerdict is_balanced(const FactorIndex& index, Symbol symbol, std::size_t max_k);

/// Smallest W such that every length-W window of the prefix contains every
/// length-k factor. Absent when W exceeds half the prefix: the prefix then
/// holds fewer than two disjoint windows and gives no evidence of uniform
/// recurrence.
std::optional<std::size_t> recurrence_function(const FactorIndex& index, std::size_t k);

struct WordDistance {
  /// sum_{n < horizon} [w_n != v_n] 2^-n
  double hamming = 0.0;
  std::size_t mismatches = 0;
  std::size_t horizon = 0;
  /// mismatches / horizon, exact.
  Rational density() const {
    Rational q(static_cast<unsigned long>(mismatches), static_cast<unsigned long>(horizon));
    q.canonicalize();
    return q;
  }
};

WordDistance word_distance(WordStream& w, WordStream& v, std::size_t horizon);

struct EquivalenceVerdict {
  bool equivalent = true;
  std::optional<std::size_t> first_k;  // shortest length where factor sets differ
};

/// Finite-horizon test of F(W) = F(V): compares factor sets of length <= max_k
/// of the two prefixes, symbol ids compared directly.
EquivalenceVerdict factor_equivalent(WordStream& w, WordStream& v, std::size_t prefix_len, std::size_t max_k);
EquivalenceVerdict factor_equivalent(const FactorIndex& w, const FactorIndex& v, std::size_t max_k);

/// Exact letter frequencies over the prefix, indexed by symbol id.
std::vector<Rational> letter_frequencies(WordStream& stream, std::size_t prefix_len);

}  // namespace symdyn
