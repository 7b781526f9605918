#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "symdyn/word.hpp"

namespace symdyn {

/// Distinct factors of a finite prefix, for every length up to a horizon.
///
/// Backed by a suffix array with LCP, so each factor of length k is a
/// contiguous SA block and T(k) for all k comes out of one pass over the LCP
/// array. Factors are the blocks fully inside the prefix; nothing is inferred
/// beyond it. Immutable after construction.
class FactorIndex {
 public:
  /// A distinct factor of some length k: its first occurrence in SA order
  /// and the SA range of all suffixes that start with it.
  struct Block {
    std::size_t position;
    std::size_t sa_begin;
    std::size_t sa_end;
  };

  FactorIndex(FiniteWord prefix, std::size_t horizon);
  static FactorIndex from_stream(WordStream& stream, std::size_t prefix_len, std::size_t horizon);

  std::size_t prefix_length() const { return prefix_.size(); }
  std::size_t horizon() const { return counts_.size() - 1; }
  std::span<const Symbol> prefix() const { return prefix_; }

  /// T(k); T(0) = 1 for the empty word.
  std::size_t count(std::size_t k) const;

  /// Distinct length-k factors in lexicographic (symbol id) order.
  std::vector<Block> blocks(std::size_t k) const;
  std::vector<FiniteWord> factors(std::size_t k) const;
  /// Sorted start positions of a block's occurrences.
  std::vector<std::size_t> occurrences(const Block& block) const;
  FiniteWord word(const Block& block, std::size_t k) const;

  bool contains(std::span<const Symbol> word) const;

  const std::vector<std::int32_t>& suffix_array() const { return sa_; }
  const std::vector<std::int32_t>& lcp() const { return lcp_; }

 private:
  void check_length(std::size_t k) const;

  FiniteWord prefix_;
  std::vector<std::int32_t> sa_;
  std::vector<std::int32_t> lcp_;    // lcp_[j] = LCP(sa_[j-1], sa_[j]); lcp_[0] = 0
  std::vector<std::size_t> counts_;  // counts_[k] = T(k), k <= horizon
};

/// Suffix array by prefix doubling with counting sorts, O(n log n).
std::vector<std::int32_t> build_suffix_array(std::span<const Symbol> text);
/// Kasai et al. LCP array aligned with the suffix array.
std::vector<std::int32_t> build_lcp(std::span<const Symbol> text, const std::vector<std::int32_t>& sa);

}  // namespace symdyn
