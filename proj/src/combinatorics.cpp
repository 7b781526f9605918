#include "symdyn/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "symdyn/kernels.hpp"

namespace symdyn {

std::size_t ComplexityReport::at(std::size_t k) const {
  for (const auto& [kk, t] : table) {
    if (kk == k) return t;
  }
  throw HorizonError("complexity report has no entry for k=" + std::to_string(k));
}

std::string ComplexityReport::to_csv() const {
  std::ostringstream os;
  os << "k,T\n";
  for (const auto& [k, t] : table) os << k << ',' << t << '\n';
  return os.str();
}

ComplexityReport complexity_table(const FactorIndex& index, std::size_t max_k) {
  if (max_k > index.horizon()) {
    throw HorizonError("max_k " + std::to_string(max_k) + " exceeds index horizon " +
                       std::to_string(index.horizon()));
  }
  ComplexityReport report;
  report.prefix_len = index.prefix_length();
  for (std::size_t k = 1; k <= max_k; ++k) report.table.emplace_back(k, index.count(k));
  return report;
}

ComplexityReport complexity_table(WordStream& stream, std::size_t prefix_len, std::size_t max_k) {
  if (prefix_len < 1) throw PreconditionError("prefix_len must be at least 1");
  if (max_k > prefix_len) {
    throw HorizonError("max_k " + std::to_string(max_k) + " exceeds prefix_len " +
                       std::to_string(prefix_len));
  }
  return complexity_table(FactorIndex::from_stream(stream, prefix_len, max_k), max_k);
}

namespace {

std::vector<FactorValence> filter(const std::vector<FactorValence>& all, bool (FactorValence::*pred)() const) {
  std::vector<FactorValence> out;
  for (const auto& f : all) {
    if ((f.*pred)()) out.push_back(f);
  }
  return out;
}

}  // namespace

std::vector<FactorValence> SpecialFactors::left_special() const { return filter(all, &FactorValence::left_special); }
std::vector<FactorValence> SpecialFactors::right_special() const { return filter(all, &FactorValence::right_special); }
std::vector<FactorValence> SpecialFactors::bispecial() const { return filter(all, &FactorValence::bispecial); }

SpecialFactors special_factors(const FactorIndex& index, std::size_t k) {
  if (k + 1 > index.horizon()) {
    throw HorizonError("special factors of length " + std::to_string(k) + " need horizon " +
                       std::to_string(k + 1));
  }
  SpecialFactors out;
  out.k = k;
  std::unordered_map<FiniteWord, std::size_t, FiniteWordHash> slot;
  for (FiniteWord& w : index.factors(k)) {
    slot.emplace(w, out.all.size());
    out.all.push_back(FactorValence{std::move(w), 0, 0});
  }
  auto text = index.prefix();
  for (const auto& block : index.blocks(k + 1)) {
    auto first = text.begin() + static_cast<std::ptrdiff_t>(block.position);
    ++out.all[slot.at(FiniteWord(first, first + static_cast<std::ptrdiff_t>(k)))].right_valence;
    ++out.all[slot.at(FiniteWord(first + 1, first + 1 + static_cast<std::ptrdiff_t>(k)))].left_valence;
  }
  return out;
}

BalanceVerdict is_balanced(const FactorIndex& index, Symbol symbol, std::size_t max_k) {
  if (max_k > index.horizon()) {
    throw HorizonError("balance horizon " + std::to_string(max_k) + " exceeds index horizon " +
                       std::to_string(index.horizon()));
  }
  auto text = index.prefix();
  std::vector<std::size_t> running(text.size() + 1, 0);
  for (std::size_t i = 0; i < text.size(); ++i) running[i + 1] = running[i] + (text[i] == symbol);

  BalanceVerdict verdict;
  for (std::size_t k = 1; k <= max_k; ++k) {
    auto blocks = index.blocks(k);
    std::size_t lo_pos = blocks.front().position, hi_pos = lo_pos;
    std::size_t lo = running[lo_pos + k] - running[lo_pos], hi = lo;
    for (const auto& b : blocks) {
      std::size_t c = running[b.position + k] - running[b.position];
      if (c < lo) {
        lo = c;
        lo_pos = b.position;
      }
      if (c > hi) {
        hi = c;
        hi_pos = b.position;
      }
    }
    if (hi - lo > 1) {
      verdict.balanced = false;
      verdict.k = k;
      auto at = [&](std::size_t p) {
        return FiniteWord(text.begin() + static_cast<std::ptrdiff_t>(p),
                          text.begin() + static_cast<std::ptrdiff_t>(p + k));
      };
      verdict.witness = std::make_pair(at(lo_pos), at(hi_pos));
      return verdict;
    }
  }
  return verdict;
}

std::optional<std::size_t> recurrence_function(const FactorIndex& index, std::size_t k) {
  if (k > index.horizon()) {
    throw HorizonError("recurrence length " + std::to_string(k) + " exceeds index horizon");
  }
  const std::size_t n = index.prefix_length();
  std::size_t window = k;
  for (const auto& block : index.blocks(k)) {
    auto occ = index.occurrences(block);
    // Worst windows: the leading one, those starting just after an
    // occurrence, and the trailing one.
    window = std::max(window, occ.front() + k);
    for (std::size_t i = 1; i < occ.size(); ++i) window = std::max(window, occ[i] - occ[i - 1] - 1 + k);
    window = std::max(window, n - occ.back());
  }
  if (2 * window > n) return std::nullopt;
  return window;
}

WordDistance word_distance(WordStream& w, WordStream& v, std::size_t horizon) {
  if (horizon < 1) throw PreconditionError("distance horizon must be at least 1");
  auto a = w.prefix(horizon);
  auto b = v.prefix(horizon);
  WordDistance out;
  out.horizon = horizon;
  out.mismatches = kernels::count_mismatches(a, b);
  // Terms past 2^-1100 vanish in double precision.
  std::size_t i = 0;
  const std::size_t weighted = std::min<std::size_t>(horizon, 1100);
  while (i < weighted) {
    i += kernels::first_mismatch(a.subspan(i, weighted - i), b.subspan(i, weighted - i));
    if (i >= weighted) break;
    out.hamming += std::ldexp(1.0, -static_cast<int>(i));
    ++i;
  }
  return out;
}

EquivalenceVerdict factor_equivalent(const FactorIndex& w, const FactorIndex& v, std::size_t max_k) {
  EquivalenceVerdict out;
  for (std::size_t k = 1; k <= max_k; ++k) {
    if (w.count(k) != v.count(k) || w.factors(k) != v.factors(k)) {
      out.equivalent = false;
      out.first_k = k;
      return out;
    }
  }
  return out;
}

EquivalenceVerdict factor_equivalent(WordStream& w, WordStream& v, std::size_t prefix_len, std::size_t max_k) {
  if (max_k > prefix_len) {
    throw HorizonError("max_k " + std::to_string(max_k) + " exceeds prefix_len " +
                       std::to_string(prefix_len));
  }
  return factor_equivalent(FactorIndex::from_stream(w, prefix_len, max_k),
                           FactorIndex::from_stream(v, prefix_len, max_k), max_k);
}

std::vector<Rational> letter_frequencies(WordStream& stream, std::size_t prefix_len) {
  if (prefix_len < 1) throw PreconditionError("prefix_len must be at least 1");
  auto text = stream.prefix(prefix_len);
  std::vector<Rational> out;
  for (std::size_t s = 0; s < stream.alphabet().size(); ++s) {
    std::size_t c = kernels::count_symbol(text, static_cast<Symbol>(s));
    out.emplace_back(Rational(static_cast<unsigned long>(c), static_cast<unsigned long>(prefix_len)));
    out.back().canonicalize();
  }
  return out;
}

}  // namespace symdyn
