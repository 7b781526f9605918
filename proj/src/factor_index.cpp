#include "symdyn/factor_index.hpp"

#include <algorithm>
#include <limits>

namespace symdyn {

std::vector<std::int32_t> build_suffix_array(std::span<const Symbol> text) {
  const auto n = static_cast<std::int32_t>(text.size());
  std::vector<std::int32_t> sa(text.size()), rank(text.size()), tmp(text.size());
  if (n == 0) return sa;
  if (text.size() > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max())) {
    throw PreconditionError("prefix too long for 32-bit suffix array");
  }

  std::size_t classes = 256;
  {
    std::vector<std::int32_t> cnt(classes + 1, 0);
    for (Symbol s : text) ++cnt[s + 1];
    for (std::size_t c = 1; c <= classes; ++c) cnt[c] += cnt[c - 1];
    for (std::int32_t i = 0; i < n; ++i) sa[cnt[text[i]]++] = i;
    for (std::int32_t i = 0; i < n; ++i) rank[i] = text[i];
  }

  std::vector<std::int32_t> cnt;
  for (std::int32_t k = 1;; k <<= 1) {
    // Order by second key: suffixes shorter than k + 1 come first.
    std::int32_t p = 0;
    for (std::int32_t i = n - k; i < n; ++i) {
      if (i >= 0) tmp[p++] = i;
    }
    for (std::int32_t j = 0; j < n; ++j) {
      if (sa[j] >= k) tmp[p++] = sa[j] - k;
    }
    // Stable counting sort by first key.
    cnt.assign(classes + 1, 0);
    for (std::int32_t i = 0; i < n; ++i) ++cnt[rank[i] + 1];
    for (std::size_t c = 1; c <= classes; ++c) cnt[c] += cnt[c - 1];
    for (std::int32_t j = 0; j < n; ++j) sa[cnt[rank[tmp[j]]]++] = tmp[j];

    auto second = [&](std::int32_t i) { return i + k < n ? rank[i + k] : -1; };
    tmp[sa[0]] = 0;
    std::int32_t c = 0;
    for (std::int32_t j = 1; j < n; ++j) {
      std::int32_t a = sa[j - 1], b = sa[j];
      if (rank[a] != rank[b] || second(a) != second(b)) ++c;
      tmp[b] = c;
    }
    rank.swap(tmp);
    classes = static_cast<std::size_t>(c) + 1;
    if (classes == text.size()) break;
  }
  return sa;
}

std::vector<std::int32_t> build_lcp(std::span<const Symbol> text, const std::vector<std::int32_t>& sa) {
  const auto n = static_cast<std::int32_t>(text.size());
  std::vector<std::int32_t> rank(text.size()), lcp(text.size(), 0);
  for (std::int32_t j = 0; j < n; ++j) rank[sa[j]] = j;
  std::int32_t h = 0;
  for (std::int32_t i = 0; i < n; ++i) {
    if (rank[i] == 0) {
      h = 0;
      continue;
    }
    std::int32_t prev = sa[rank[i] - 1];
    while (i + h < n && prev + h < n && text[i + h] == text[prev + h]) ++h;
    lcp[rank[i]] = h;
    if (h > 0) --h;
  }
  return lcp;
}

FactorIndex::FactorIndex(FiniteWord prefix, std::size_t horizon) : prefix_(std::move(prefix)) {
  if (prefix_.empty()) throw PreconditionError("factor index needs a non-empty prefix");
  if (horizon > prefix_.size()) {
    throw HorizonError("horizon " + std::to_string(horizon) + " exceeds prefix length " +
                       std::to_string(prefix_.size()));
  }
  sa_ = build_suffix_array(prefix_);
  lcp_ = build_lcp(prefix_, sa_);

  // Suffix j opens a new length-k factor iff lcp[j] < k <= its length.
  std::vector<std::ptrdiff_t> diff(horizon + 2, 0);
  const std::size_t n = prefix_.size();
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t lo = static_cast<std::size_t>(lcp_[j]) + 1;
    std::size_t hi = std::min(n - static_cast<std::size_t>(sa_[j]), horizon);
    if (lo <= hi) {
      ++diff[lo];
      --diff[hi + 1];
    }
  }
  counts_.assign(horizon + 1, 0);
  counts_[0] = 1;
  std::ptrdiff_t running = 0;
  for (std::size_t k = 1; k <= horizon; ++k) {
    running += diff[k];
    counts_[k] = static_cast<std::size_t>(running);
  }
}

FactorIndex FactorIndex::from_stream(WordStream& stream, std::size_t prefix_len, std::size_t horizon) {
  auto p = stream.prefix(prefix_len);
  return FactorIndex(FiniteWord(p.begin(), p.end()), horizon);
}

void FactorIndex::check_length(std::size_t k) const {
  if (k > horizon()) {
    throw HorizonError("factor length " + std::to_string(k) + " exceeds index horizon " +
                       std::to_string(horizon()));
  }
}

std::size_t FactorIndex::count(std::size_t k) const {
  check_length(k);
  return counts_[k];
}

std::vector<FactorIndex::Block> FactorIndex::blocks(std::size_t k) const {
  check_length(k);
  std::vector<Block> out;
  out.reserve(counts_[k]);
  const std::size_t n = prefix_.size();
  std::size_t j = 0;
  while (j < n) {
    auto start = static_cast<std::size_t>(sa_[j]);
    // Short suffixes never sit inside a block: anything sorted between two
    // suffixes sharing k symbols shares them too.
    if (n - start < k) {
      ++j;
      continue;
    }
    std::size_t end = j + 1;
    while (end < n && static_cast<std::size_t>(lcp_[end]) >= k) ++end;
    out.push_back(Block{start, j, end});
    j = end;
  }
  return out;
}

std::vector<FiniteWord> FactorIndex::factors(std::size_t k) const {
  std::vector<FiniteWord> out;
  for (const Block& b : blocks(k)) out.push_back(word(b, k));
  return out;
}

FiniteWord FactorIndex::word(const Block& block, std::size_t k) const {
  auto first = prefix_.begin() + static_cast<std::ptrdiff_t>(block.position);
  return FiniteWord(first, first + static_cast<std::ptrdiff_t>(k));
}

std::vector<std::size_t> FactorIndex::occurrences(const Block& block) const {
  std::vector<std::size_t> out;
  out.reserve(block.sa_end - block.sa_begin);
  for (std::size_t j = block.sa_begin; j < block.sa_end; ++j) out.push_back(static_cast<std::size_t>(sa_[j]));
  std::sort(out.begin(), out.end());
  return out;
}

bool FactorIndex::contains(std::span<const Symbol> word) const {
  const std::size_t n = prefix_.size();
  auto compare = [&](std::int32_t pos) {
    std::size_t p = static_cast<std::size_t>(pos);
    std::size_t len = std::min(word.size(), n - p);
    for (std::size_t i = 0; i < len; ++i) {
      if (prefix_[p + i] != word[i]) return prefix_[p + i] < word[i] ? -1 : 1;
    }
    return len == word.size() ? 0 : -1;
  };
  auto it = std::lower_bound(sa_.begin(), sa_.end(), 0,
                             [&](std::int32_t pos, int) { return compare(pos) < 0; });
  return it != sa_.end() && compare(*it) == 0;
}

}  // namespace symdyn
