#include "symdyn/generators.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace symdyn {

namespace {

[[noreturn]] void rethrow_at(const PrecisionExhausted& e, std::size_t index) {
  throw PrecisionExhausted(std::string(e.what()) + " at index " + std::to_string(index), e.bits());
}

void require_unit_interval(const RealConstant& v, const char* what, Precision& precision,
                           bool allow_one = false) {
  if (sign(v, precision) < 0 || (allow_one ? sign(v - RealConstant(1), precision) > 0
                                           : sign(v - RealConstant(1), precision) >= 0)) {
    throw PreconditionError(std::string(what) + " must lie in [0, 1" + (allow_one ? "]" : ")"));
  }
}

class MechanicalSource final : public SymbolSource {
 public:
  MechanicalSource(MechanicalParams params, Precision precision)
      : params_(std::move(params)), precision_(precision), alphabet_({"a", "b"}) {
    if (params_.alpha.is_rational()) {
      throw PreconditionError("mechanical word needs irrational alpha, got " + params_.alpha.to_string());
    }
    if (sign(params_.alpha, precision_) <= 0 || sign(params_.alpha - RealConstant(1), precision_) >= 0) {
      throw PreconditionError("alpha must lie in (0, 1)");
    }
    require_unit_interval(params_.x0, "x0", precision_);
    require_unit_interval(params_.arc_begin, "arc begin", precision_, true);
    require_unit_interval(params_.arc_end, "arc end", precision_, true);
    wraps_ = sign(params_.arc_begin - params_.arc_end, precision_) > 0;
    reset();
  }

  const Alphabet& alphabet() const override { return alphabet_; }

  void generate(std::size_t count, std::vector<Symbol>& out) override {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        bool after_begin = sign(point_ - params_.arc_begin, precision_) >= 0;
        bool before_end = sign(point_ - params_.arc_end, precision_) < 0;
        bool inside = wraps_ ? (after_begin || before_end) : (after_begin && before_end);
        out.push_back(inside ? 0 : 1);
        point_ += params_.alpha;
        if (sign(point_ - RealConstant(1), precision_) >= 0) point_ -= RealConstant(1);
      } catch (const PrecisionExhausted& e) {
        rethrow_at(e, out.size());
      }
    }
  }

  void reset() override { point_ = params_.x0; }
  std::string describe() const override {
    return "mechanical(alpha=" + params_.alpha.to_string() + ", x0=" + params_.x0.to_string() +
           ", U=[" + params_.arc_begin.to_string() + ", " + params_.arc_end.to_string() + "))";
  }
  int precision_bits_used() const override { return precision_.max_used; }

 private:
  MechanicalParams params_;
  Precision precision_;
  Alphabet alphabet_;
  bool wraps_ = false;
  RealConstant point_;
};

class MorphicSource final : public SymbolSource {
 public:
  MorphicSource(Morphism morphism, Symbol seed) : morphism_(std::move(morphism)), seed_(seed) {
    if (seed_ >= morphism_.alphabet.size()) throw PreconditionError("seed outside the morphism alphabet");
    const FiniteWord& image = morphism_.images[seed_];
    if (image.size() < 2 || image.front() != seed_) {
      throw PreconditionError("morphism is not prolongable on seed '" + morphism_.alphabet.name(seed_) + "'");
    }
    reset();
  }

  const Alphabet& alphabet() const override { return morphism_.alphabet; }

  void generate(std::size_t count, std::vector<Symbol>& out) override {
    const std::size_t want = out.size() + count;
    // x = phi(x): extend by images of symbols already produced; the read
    // cursor always trails the write end because images are non-empty.
    while (word_.size() < want) {
      const FiniteWord& image = morphism_.images[word_[cursor_++]];
      word_.insert(word_.end(), image.begin(), image.end());
    }
    out.insert(out.end(), word_.begin() + static_cast<std::ptrdiff_t>(out.size()),
               word_.begin() + static_cast<std::ptrdiff_t>(want));
  }

  void reset() override {
    word_ = morphism_.images[seed_];
    cursor_ = 1;
  }

  std::string describe() const override {
    std::ostringstream os;
    os << "morphic(";
    for (std::size_t s = 0; s < morphism_.images.size(); ++s) {
      if (s) os << ", ";
      os << morphism_.alphabet.name(static_cast<Symbol>(s)) << "->"
         << morphism_.alphabet.render(morphism_.images[s]);
    }
    os << "; seed " << morphism_.alphabet.name(seed_) << ")";
    return os.str();
  }

 private:
  Morphism morphism_;
  Symbol seed_;
  FiniteWord word_;
  std::size_t cursor_ = 1;
};

class IETSource final : public SymbolSource {
 public:
  IETSource(IETSpec spec, RealConstant x0, Precision precision)
      : spec_(std::move(spec)), x0_(std::move(x0)), precision_(precision) {
    spec_.validate(precision_);
    require_unit_interval(x0_, "x0", precision_);
    const std::size_t k = spec_.lengths.size();
    std::vector<std::string> names;
    for (std::size_t i = 0; i < k; ++i) names.push_back(std::to_string(i));
    alphabet_ = Alphabet(std::move(names));

    breaks_.assign(k + 1, RealConstant());
    for (std::size_t i = 0; i < k; ++i) breaks_[i + 1] = breaks_[i] + spec_.lengths[i];
    shifts_.assign(k, RealConstant());
    for (std::size_t i = 0; i < k; ++i) {
      RealConstant target;
      for (std::size_t j = 0; j < k; ++j) {
        if (spec_.permutation[j] < spec_.permutation[i]) target += spec_.lengths[j];
      }
      shifts_[i] = target - breaks_[i];
    }
    reset();
  }

  const Alphabet& alphabet() const override { return alphabet_; }

  void generate(std::size_t count, std::vector<Symbol>& out) override {
    const std::size_t k = spec_.lengths.size();
    for (std::size_t c = 0; c < count; ++c) {
      try {
        std::size_t i = 0;
        while (i + 1 < k && sign(point_ - breaks_[i + 1], precision_) >= 0) ++i;
        out.push_back(static_cast<Symbol>(i));
        point_ += shifts_[i];
      } catch (const PrecisionExhausted& e) {
        rethrow_at(e, out.size());
      }
    }
  }

  void reset() override { point_ = x0_; }
  std::string describe() const override {
    std::ostringstream os;
    os << "iet(lengths=[";
    for (std::size_t i = 0; i < spec_.lengths.size(); ++i) os << (i ? ", " : "") << spec_.lengths[i].to_string();
    os << "], permutation=(";
    for (std::size_t i = 0; i < spec_.permutation.size(); ++i) os << (i ? " " : "") << spec_.permutation[i];
    os << "), x0=" << x0_.to_string() << ")";
    return os.str();
  }
  int precision_bits_used() const override { return precision_.max_used; }

 private:
  IETSpec spec_;
  RealConstant x0_;
  Precision precision_;
  Alphabet alphabet_;
  std::vector<RealConstant> breaks_;
  std::vector<RealConstant> shifts_;
  RealConstant point_;
};

std::string describe_polynomial(const PolynomialSpec& p) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t j = p.coeffs.size(); j-- > 0;) {
    if (p.coeffs[j].is_zero()) continue;
    if (!first) os << " + ";
    os << "(" << p.coeffs[j].to_string() << ")";
    if (j >= 1) os << "*n";
    if (j >= 2) os << "^" << j;
    first = false;
  }
  return first ? "0" : os.str();
}

class PolynomialBinarySource final : public SymbolSource {
 public:
  PolynomialBinarySource(PolynomialSpec p, Precision precision)
      : p_(std::move(p)), precision_(precision), alphabet_({"0", "1"}) {
    p_.validate();
  }
  const Alphabet& alphabet() const override { return alphabet_; }

  void generate(std::size_t count, std::vector<Symbol>& out) override {
    for (std::size_t c = 0; c < count; ++c) {
      const std::size_t n = out.size();
      try {
        // floor(2{x}) = floor(2x) mod 2: one enclosure decides the symbol.
        BigInt twice = floor(p_.evaluate(BigInt(static_cast<unsigned long>(n))) * Rational(2), precision_);
        out.push_back(static_cast<Symbol>(mpz_odd_p(twice.get_mpz_t()) ? 1 : 0));
      } catch (const PrecisionExhausted& e) {
        rethrow_at(e, n);
      }
    }
  }
  void reset() override {}
  std::string describe() const override { return "polynomial_binary(" + describe_polynomial(p_) + ")"; }
  int precision_bits_used() const override { return precision_.max_used; }

 private:
  PolynomialSpec p_;
  Precision precision_;
  Alphabet alphabet_;
};

class DifferenceSource final : public SymbolSource {
 public:
  DifferenceSource(PolynomialSpec q, std::size_t d, Precision precision)
      : q_(std::move(q)), d_(d), precision_(precision) {
    q_.validate();
    if (d_ < 1) throw PreconditionError("difference order must be at least 1");
    if (d_ > 16) throw PreconditionError("difference order above 16 is not supported");
    if (q_.degree() > d_) {
      throw PreconditionError("difference order " + std::to_string(d_) +
                              " below polynomial degree gives an unbounded alphabet");
    }
    // Delta^d Q is the constant d! a_d (zero when deg Q < d); subtracting
    // Delta^d {Q} moves it by strictly less than 2^{d-1}.
    RealConstant centre = q_.degree() == d_ ? q_.coeffs.back() * Rational(factorial(d_)) : RealConstant();
    const long half = 1L << (d_ - 1);
    BigInt lo = floor(centre - RealConstant(half), precision_) + 1;
    BigInt hi = floor(centre + RealConstant(half), precision_);
    if (centre.is_rational() && (centre + RealConstant(half)).rational_part().get_den() == 1) hi -= 1;
    low_ = lo.get_si();
    std::vector<std::string> names;
    for (BigInt v = lo; v <= hi; ++v) names.push_back(v.get_str());
    alphabet_ = Alphabet(std::move(names));
    weights_.resize(d_ + 1);
    for (std::size_t j = 0; j <= d_; ++j) {
      BigInt c = binomial(d_, j);
      weights_[j] = ((d_ - j) % 2 == 0) ? c : BigInt(-c);
    }
    reset();
  }

  const Alphabet& alphabet() const override { return alphabet_; }

  void generate(std::size_t count, std::vector<Symbol>& out) override {
    for (std::size_t c = 0; c < count; ++c) {
      const std::size_t n = out.size();
      try {
        while (floors_.size() < d_ + 1) {
          floors_.push_back(floor(q_.evaluate(BigInt(static_cast<unsigned long>(next_arg_))), precision_));
          ++next_arg_;
        }
      } catch (const PrecisionExhausted& e) {
        rethrow_at(e, n);
      }
      BigInt value = 0;
      for (std::size_t j = 0; j <= d_; ++j) value += weights_[j] * floors_[j];
      long id = value.get_si() - low_;
      if (id < 0 || static_cast<std::size_t>(id) >= alphabet_.size()) {
        throw std::logic_error("difference value " + value.get_str() + " outside the alphabet");
      }
      out.push_back(static_cast<Symbol>(id));
      floors_.erase(floors_.begin());
    }
  }

  void reset() override {
    floors_.clear();
    next_arg_ = 0;
  }
  std::string describe() const override {
    return "difference(d=" + std::to_string(d_) + ", Q=" + describe_polynomial(q_) + ")";
  }
  int precision_bits_used() const override { return precision_.max_used; }

 private:
  static unsigned long factorial(std::size_t n) {
    unsigned long f = 1;
    for (std::size_t i = 2; i <= n; ++i) f *= i;
    return f;
  }

  PolynomialSpec q_;
  std::size_t d_;
  Precision precision_;
  Alphabet alphabet_;
  long low_ = 0;
  std::vector<BigInt> weights_;
  std::vector<BigInt> floors_;
  std::size_t next_arg_ = 0;
};

class TorusSource final : public SymbolSource {
 public:
  TorusSource(TorusSkewSpec spec, Precision precision)
      : spec_(std::move(spec)), precision_(precision), alphabet_({"0", "1"}) {
    if (spec_.dimension < 1 || spec_.initial.size() != spec_.dimension) {
      throw PreconditionError("torus spec dimension does not match its initial state");
    }
    if (spec_.epsilon.is_rational()) throw PreconditionError("torus shift epsilon must be irrational");
    require_unit_interval(spec_.epsilon, "epsilon", precision_);
    for (const auto& x : spec_.initial) require_unit_interval(x, "initial coordinate", precision_);
    reset();
  }

  const Alphabet& alphabet() const override { return alphabet_; }

  void generate(std::size_t count, std::vector<Symbol>& out) override {
    for (std::size_t c = 0; c < count; ++c) {
      try {
        BigInt half = floor(state_.back() * Rational(2), precision_);
        out.push_back(half == 0 ? 0 : 1);
        step();
      } catch (const PrecisionExhausted& e) {
        rethrow_at(e, out.size());
      }
    }
  }

  void reset() override { state_ = spec_.initial; }
  std::string describe() const override {
    return "torus(m=" + std::to_string(spec_.dimension) + ", eps=" + spec_.epsilon.to_string() + ")";
  }
  int precision_bits_used() const override { return precision_.max_used; }

 private:
  void step() {
    for (std::size_t i = state_.size(); i-- > 1;) {
      state_[i] += state_[i - 1];
      wrap(state_[i]);
    }
    state_[0] += spec_.epsilon;
    wrap(state_[0]);
  }
  void wrap(RealConstant& x) {
    if (sign(x - RealConstant(1), precision_) >= 0) x -= RealConstant(1);
  }

  TorusSkewSpec spec_;
  Precision precision_;
  Alphabet alphabet_;
  std::vector<RealConstant> state_;
};

}  // namespace

MechanicalParams MechanicalParams::canonical(RealConstant alpha, RealConstant x0) {
  MechanicalParams p;
  p.arc_begin = RealConstant();
  p.arc_end = alpha;
  p.alpha = std::move(alpha);
  p.x0 = std::move(x0);
  return p;
}

WordStream mechanical_word(const MechanicalParams& params, Precision precision) {
  return WordStream(std::make_unique<MechanicalSource>(params, precision));
}

Alphabet sturmian_alphabet() { return Alphabet({"a", "b"}); }

FiniteWord sturmian_substitution_limit(const std::vector<std::size_t>& k_sequence,
                                       const std::vector<SubstitutionKind>& kinds, std::size_t steps) {
  if (steps < 1) throw PreconditionError("substitution limit needs at least one step");
  if (steps > 1 && (k_sequence.empty() || kinds.empty())) {
    throw PreconditionError("substitution limit needs k values and kinds");
  }
  for (std::size_t k : k_sequence) {
    if (k < 1) throw PreconditionError("substitution exponents must be positive");
  }
  constexpr Symbol a = 0, b = 1;
  FiniteWord word{a};
  for (std::size_t i = steps - 1; i-- > 0;) {
    const std::size_t k = k_sequence[i % k_sequence.size()];
    const bool a_type = kinds[i % kinds.size()] == SubstitutionKind::a_type;
    // a-type: a -> a^{k+1} b, b -> a^k b; b-type swaps the roles of a and b.
    const Symbol repeated = a_type ? a : b;
    const Symbol closing = a_type ? b : a;
    FiniteWord next;
    for (Symbol s : word) {
      next.insert(next.end(), s == repeated ? k + 1 : k, repeated);
      next.push_back(closing);
    }
    word = std::move(next);
  }
  return word;
}

Morphism Morphism::from_strings(const std::map<std::string, std::string>& rules) {
  Morphism m;
  std::vector<std::string> names;
  for (const auto& [from, to] : rules) {
    if (from.size() != 1) throw PreconditionError("morphism symbols must be single characters");
    names.push_back(from);
  }
  m.alphabet = Alphabet(names);
  for (const auto& [from, to] : rules) {
    if (to.empty()) throw PreconditionError("morphism image of '" + from + "' is empty");
    m.images.push_back(m.alphabet.parse(to));
  }
  return m;
}

FiniteWord Morphism::apply(std::span<const Symbol> word) const {
  FiniteWord out;
  for (Symbol s : word) out.insert(out.end(), images.at(s).begin(), images.at(s).end());
  return out;
}

WordStream morphic_fixed_point(const Morphism& morphism, Symbol seed) {
  if (morphism.images.size() != morphism.alphabet.size()) {
    throw PreconditionError("morphism needs one image per symbol");
  }
  for (const auto& image : morphism.images) {
    if (image.empty()) throw PreconditionError("morphism images must be non-empty");
    for (Symbol s : image) {
      if (s >= morphism.alphabet.size()) throw PreconditionError("morphism image leaves the alphabet");
    }
  }
  return WordStream(std::make_unique<MorphicSource>(morphism, seed));
}

void IETSpec::validate(Precision& precision) const {
  const std::size_t k = lengths.size();
  if (k < 1) throw PreconditionError("interval exchange needs at least one interval");
  if (permutation.size() != k) throw PreconditionError("permutation size differs from interval count");
  std::vector<bool> seen(k, false);
  for (std::size_t p : permutation) {
    if (p < 1 || p > k || seen[p - 1]) throw PreconditionError("permutation is not a bijection of 1..k");
    seen[p - 1] = true;
  }
  RealConstant total;
  for (const auto& l : lengths) {
    if (sign(l, precision) <= 0) throw PreconditionError("interval lengths must be positive");
    total += l;
  }
  if (total != RealConstant(1)) throw PreconditionError("interval lengths sum to " + total.to_string() + ", not 1");
}

WordStream iet_coding(const IETSpec& spec, const RealConstant& x0, Precision precision) {
  return WordStream(std::make_unique<IETSource>(spec, x0, precision));
}

RealConstant PolynomialSpec::evaluate(const BigInt& n) const {
  RealConstant acc;
  const Rational x(n);
  for (std::size_t j = coeffs.size(); j-- > 0;) {
    acc *= x;
    acc += coeffs[j];
  }
  return acc;
}

void PolynomialSpec::validate() const {
  if (coeffs.size() < 2) throw PreconditionError("polynomial degree must be at least 1");
  if (coeffs.back().is_rational()) {
    throw PreconditionError("leading coefficient " + coeffs.back().to_string() + " must be irrational");
  }
}

TorusSkewSpec derive_skew_spec(const PolynomialSpec& p, Precision precision) {
  p.validate();
  const std::size_t m = p.degree();
  TorusSkewSpec spec;
  spec.dimension = m;
  spec.initial.assign(m, RealConstant());
  std::vector<RealConstant> current = p.coeffs;  // P_m
  for (std::size_t i = m; i >= 1; --i) {
    spec.initial[i - 1] = fractional_part(current.front(), precision);
    // P(n+1) - P(n): coefficient of n^t is sum_{j>t} a_j C(j, t).
    std::vector<RealConstant> next(current.size() - 1);
    for (std::size_t t = 0; t < next.size(); ++t) {
      for (std::size_t j = t + 1; j < current.size(); ++j) {
        next[t] += current[j] * Rational(binomial(j, t));
      }
    }
    current = std::move(next);
  }
  spec.epsilon = fractional_part(current.front(), precision);  // P_0 = m! a_m
  return spec;
}

std::vector<RealConstant> torus_state_after(const TorusSkewSpec& spec, std::uint64_t k, Precision& precision) {
  std::vector<RealConstant> out(spec.dimension);
  for (std::size_t i = 1; i <= spec.dimension; ++i) {
    RealConstant sum;
    for (std::size_t j = 0; j <= i; ++j) {
      const RealConstant& base = (i - j == 0) ? spec.epsilon : spec.initial[i - j - 1];
      sum += base * Rational(binomial(k, j));
    }
    out[i - 1] = fractional_part(sum, precision);
  }
  return out;
}

std::vector<RealConstant> torus_state_iterated(const TorusSkewSpec& spec, std::uint64_t k, Precision& precision) {
  std::vector<RealConstant> x = spec.initial;
  for (std::uint64_t step = 0; step < k; ++step) {
    for (std::size_t i = x.size(); i-- > 1;) x[i] = fractional_part(x[i] + x[i - 1], precision);
    x[0] = fractional_part(x[0] + spec.epsilon, precision);
  }
  return x;
}

WordStream torus_skew_coding(const TorusSkewSpec& spec, Precision precision) {
  return WordStream(std::make_unique<TorusSource>(spec, precision));
}

WordStream polynomial_binary_word(const PolynomialSpec& p, Precision precision) {
  return WordStream(std::make_unique<PolynomialBinarySource>(p, precision));
}

WordStream difference_word(const PolynomialSpec& q, std::size_t d, Precision precision) {
  return WordStream(std::make_unique<DifferenceSource>(q, d, precision));
}

}  // namespace symdyn
