#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace symdyn {

using Symbol = std::uint8_t;

/// A finite word is a sequence of symbol ids; the alphabet that names the ids
/// travels separately.
using FiniteWord = std::vector<Symbol>;

struct FiniteWordHash {
  std::size_t operator()(const FiniteWord& w) const noexcept {
    return std::hash<std::string_view>{}(
        std::string_view(reinterpret_cast<const char*>(w.data()), w.size()));
  }
};

/// Ordered set of distinct symbol names. A symbol's id is its position.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::string& name(Symbol s) const { return names_.at(s); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<Symbol> find(std::string_view name) const;

  /// Concatenates symbol names; a separator is inserted only when some name
  /// is longer than one character.
  std::string render(std::span<const Symbol> word) const;
  /// Inverse of render for single-character alphabets.
  FiniteWord parse(std::string_view text) const;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<std::string> names_;
};

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Requested horizon exceeds what the data supports.
class HorizonError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Sequential producer behind a WordStream.
class SymbolSource {
 public:
  virtual ~SymbolSource() = default;
  virtual const Alphabet& alphabet() const = 0;
  /// Appends the next `count` symbols (indices out.size() onward).
  virtual void generate(std::size_t count, std::vector<Symbol>& out) = 0;
  /// Rewinds internal state to index 0.
  virtual void reset() = 0;
  virtual std::string describe() const = 0;
  /// Finite sources report their length; infinite ones return nullopt.
  virtual std::optional<std::size_t> length() const { return std::nullopt; }
  /// Highest precision rung used so far (0 for exact generators).
  virtual int precision_bits_used() const { return 0; }
};

/// Deterministic, restartable infinite word. Symbols are produced on demand
/// and memoised, so symbol_at(n) never depends on query order.
class WordStream {
 public:
  explicit WordStream(std::unique_ptr<SymbolSource> source);

  const Alphabet& alphabet() const { return source_->alphabet(); }
  std::string describe() const { return source_->describe(); }
  std::optional<std::size_t> length() const { return source_->length(); }
  int precision_bits_used() const { return source_->precision_bits_used(); }

  Symbol symbol_at(std::size_t n);
  /// First n symbols. The span stays valid until the next call that grows
  /// the stream.
  std::span<const Symbol> prefix(std::size_t n);
  /// Drops the memo and rewinds the source.
  void restart();

 private:
  void ensure(std::size_t n);

  std::unique_ptr<SymbolSource> source_;
  std::vector<Symbol> cache_;
};

/// Wraps a finite word; reading past its end is a HorizonError.
WordStream finite_word_stream(FiniteWord word, Alphabet alphabet, std::string label = "finite");

}  // namespace symdyn
