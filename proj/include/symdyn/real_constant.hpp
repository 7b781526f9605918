#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace symdyn {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Raised when a value cannot be separated from a decision threshold before
/// the working precision reaches its cap.
class PrecisionExhausted : public std::runtime_error {
 public:
  PrecisionExhausted(const std::string& what, int bits)
      : std::runtime_error(what), bits_(bits) {}
  int bits() const { return bits_; }

 private:
  int bits_;
};

/// Precision ladder shared by all decisions of one generator: start at
/// `start_bits` fractional bits and double until `cap_bits`.
struct Precision {
  int start_bits = 64;
  int cap_bits = 4096;
  int max_used = 0;  // highest rung actually needed so far
};

/// Closed dyadic interval [lo, hi] * 2^-bits.
struct DyadicInterval {
  BigInt lo;
  BigInt hi;
  int bits = 0;

  double midpoint() const;
};

/// A real number of the form q_0 + sum_i q_i * sqrt(d_i) with rational q_i and
/// distinct squarefree d_i > 1. Square roots of distinct squarefree integers
/// are linearly independent over Q, so equality and zero tests are exact;
/// order decisions go through interval enclosures.
class RealConstant {
 public:
  RealConstant() = default;
  RealConstant(long value) : RealConstant(Rational(value)) {}  // NOLINT
  RealConstant(const Rational& value);                          // NOLINT

  /// coeff * sqrt(radicand); square factors of `radicand` are pulled out.
  static RealConstant sqrt(std::uint64_t radicand, const Rational& coeff = 1);

  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const;
  bool is_irrational() const { return !is_rational(); }
  Rational rational_part() const;

  /// (radicand, coefficient) pairs sorted by radicand; radicand 1 is the
  /// rational part. Zero coefficients are never stored.
  const std::vector<std::pair<std::uint64_t, Rational>>& terms() const { return terms_; }

  RealConstant& operator+=(const RealConstant& other);
  RealConstant& operator-=(const RealConstant& other);
  RealConstant& operator*=(const Rational& factor);
  RealConstant operator-() const;

  friend RealConstant operator+(RealConstant a, const RealConstant& b) { return a += b; }
  friend RealConstant operator-(RealConstant a, const RealConstant& b) { return a -= b; }
  friend RealConstant operator*(RealConstant a, const Rational& f) { return a *= f; }
  friend RealConstant operator*(const Rational& f, RealConstant a) { return a *= f; }
  friend bool operator==(const RealConstant& a, const RealConstant& b);
  friend bool operator!=(const RealConstant& a, const RealConstant& b) { return !(a == b); }

  /// Interval of width at most 2^-bits containing the value.
  DyadicInterval enclose(int bits) const;

  double approx() const;
  std::string to_string() const;

 private:
  void add_term(std::uint64_t radicand, const Rational& coeff);

  std::vector<std::pair<std::uint64_t, Rational>> terms_;
};

/// Exact sign, refining along the ladder. Throws PrecisionExhausted at the cap.
int sign(const RealConstant& value, Precision& precision);

/// floor(value), exact for rationals, otherwise by interval refinement.
BigInt floor(const RealConstant& value, Precision& precision);

/// value - floor(value), in [0, 1).
RealConstant fractional_part(const RealConstant& value, Precision& precision);

/// a < b, decided exactly.
inline bool less(const RealConstant& a, const RealConstant& b, Precision& precision) {
  return sign(a - b, precision) < 0;
}

BigInt binomial(std::uint64_t n, std::uint64_t k);

}  // namespace symdyn
