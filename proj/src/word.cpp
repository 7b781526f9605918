#include "symdyn/word.hpp"

#include <algorithm>
#include <set>

namespace symdyn {

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) throw PreconditionError("alphabet must contain at least one symbol");
  if (names_.size() > 256) throw PreconditionError("alphabet larger than 256 symbols");
  std::set<std::string> seen(names_.begin(), names_.end());
  if (seen.size() != names_.size()) throw PreconditionError("alphabet has duplicate symbols");
}

std::optional<Symbol> Alphabet::find(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<Symbol>(it - names_.begin());
}

std::string Alphabet::render(std::span<const Symbol> word) const {
  bool wide = std::any_of(names_.begin(), names_.end(),
                          [](const std::string& n) { return n.size() != 1; });
  std::string out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (wide && i > 0) out += ' ';
    out += names_.at(word[i]);
  }
  return out;
}

FiniteWord Alphabet::parse(std::string_view text) const {
  FiniteWord out;
  out.reserve(text.size());
  for (char c : text) {
    auto s = find(std::string_view(&c, 1));
    if (!s) throw PreconditionError(std::string("symbol '") + c + "' not in alphabet");
    out.push_back(*s);
  }
  return out;
}

WordStream::WordStream(std::unique_ptr<SymbolSource> source) : source_(std::move(source)) {
  if (!source_) throw PreconditionError("word stream needs a source");
}

void WordStream::ensure(std::size_t n) {
  if (cache_.size() >= n) return;
  if (auto len = source_->length(); len && n > *len) {
    throw HorizonError("index " + std::to_string(n - 1) + " beyond finite word of length " +
                       std::to_string(*len));
  }
  // Grow geometrically so repeated symbol_at calls stay amortised O(1).
  std::size_t target = std::max(n, cache_.size() + cache_.size() / 2);
  if (auto len = source_->length()) target = std::min(target, *len);
  cache_.reserve(target);
  source_->generate(target - cache_.size(), cache_);
}

Symbol WordStream::symbol_at(std::size_t n) {
  ensure(n + 1);
  return cache_[n];
}

std::span<const Symbol> WordStream::prefix(std::size_t n) {
  ensure(n);
  return std::span<const Symbol>(cache_.data(), n);
}

void WordStream::restart() {
  cache_.clear();
  cache_.shrink_to_fit();
  source_->reset();
}

namespace {

class FiniteSource final : public SymbolSource {
 public:
  FiniteSource(FiniteWord word, Alphabet alphabet, std::string label)
      : word_(std::move(word)), alphabet_(std::move(alphabet)), label_(std::move(label)) {
    for (Symbol s : word_) {
      if (s >= alphabet_.size()) throw PreconditionError("word uses a symbol outside its alphabet");
    }
  }
  const Alphabet& alphabet() const override { return alphabet_; }
  void generate(std::size_t count, std::vector<Symbol>& out) override {
    std::size_t from = out.size();
    out.insert(out.end(), word_.begin() + static_cast<std::ptrdiff_t>(from),
               word_.begin() + static_cast<std::ptrdiff_t>(from + count));
  }
  void reset() override {}
  std::string describe() const override { return label_; }
  std::optional<std::size_t> length() const override { return word_.size(); }

 private:
  FiniteWord word_;
  Alphabet alphabet_;
  std::string label_;
};

}  // namespace

WordStream finite_word_stream(FiniteWord word, Alphabet alphabet, std::string label) {
  return WordStream(std::make_unique<FiniteSource>(std::move(word), std::move(alphabet),
                                                   std::move(label)));
}

}  // namespace symdyn
