#include "symdyn/real_constant.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace symdyn {

namespace {

int bit_length(const BigInt& v) {
  return v == 0 ? 0 : static_cast<int>(mpz_sizeinbase(v.get_mpz_t(), 2));
}

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

BigInt ceil_div(const BigInt& a, const BigInt& b) {
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

BigInt shift_floor(const BigInt& a, int bits) {
  BigInt q;
  mpz_fdiv_q_2exp(q.get_mpz_t(), a.get_mpz_t(), static_cast<mp_bitcnt_t>(bits));
  return q;
}

// floor(sqrt(radicand) * 2^bits); bits is always a multiple of 64 so the
// cache stays small.
const BigInt& scaled_sqrt(std::uint64_t radicand, int bits) {
  thread_local std::map<std::pair<std::uint64_t, int>, BigInt> cache;
  auto key = std::make_pair(radicand, bits);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  BigInt arg = radicand;
  arg <<= static_cast<mp_bitcnt_t>(2 * bits);
  BigInt root;
  mpz_sqrt(root.get_mpz_t(), arg.get_mpz_t());
  return cache.emplace(key, std::move(root)).first->second;
}

}  // namespace

double DyadicInterval::midpoint() const {
  mpf_class lo_f(lo, 256), hi_f(hi, 256);
  mpf_class mid = (lo_f + hi_f) / 2;
  mpf_div_2exp(mid.get_mpf_t(), mid.get_mpf_t(), static_cast<mp_bitcnt_t>(bits));
  return mid.get_d();
}

RealConstant::RealConstant(const Rational& value) {
  if (value != 0) terms_.emplace_back(1, value);
}

RealConstant RealConstant::sqrt(std::uint64_t radicand, const Rational& coeff) {
  RealConstant out;
  if (radicand == 0 || coeff == 0) return out;
  Rational c = coeff;
  std::uint64_t rest = radicand;
  for (std::uint64_t p = 2; p <= rest / p; ++p) {
    while (rest % (p * p) == 0) {
      rest /= p * p;
      c *= static_cast<unsigned long>(p);
    }
  }
  out.add_term(rest, c);
  return out;
}

bool RealConstant::is_rational() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.front().first == 1);
}

Rational RealConstant::rational_part() const {
  if (!terms_.empty() && terms_.front().first == 1) return terms_.front().second;
  return 0;
}

void RealConstant::add_term(std::uint64_t radicand, const Rational& coeff) {
  if (coeff == 0) return;
  auto it = std::lower_bound(terms_.begin(), terms_.end(), radicand,
                             [](const auto& t, std::uint64_t r) { return t.first < r; });
  if (it != terms_.end() && it->first == radicand) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  } else {
    terms_.insert(it, {radicand, coeff});
  }
}

RealConstant& RealConstant::operator+=(const RealConstant& other) {
  for (const auto& [r, c] : other.terms_) add_term(r, c);
  return *this;
}

RealConstant& RealConstant::operator-=(const RealConstant& other) {
  for (const auto& [r, c] : other.terms_) add_term(r, -c);
  return *this;
}

RealConstant& RealConstant::operator*=(const Rational& factor) {
  if (factor == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.second *= factor;
  return *this;
}

RealConstant RealConstant::operator-() const {
  RealConstant out = *this;
  for (auto& t : out.terms_) t.second = -t.second;
  return out;
}

bool operator==(const RealConstant& a, const RealConstant& b) { return a.terms_ == b.terms_; }

DyadicInterval RealConstant::enclose(int bits) const {
  DyadicInterval out;
  if (terms_.empty()) {
    out.bits = bits;
    return out;
  }
  // Each term contributes at most |coeff| + 2 units of slack at the working
  // precision, so pad by the bit length of that total.
  Rational magnitude = 0;
  for (const auto& t : terms_) magnitude += abs(t.second);
  BigInt slack = ceil_div(magnitude.get_num(), magnitude.get_den()) +
                 2 * static_cast<long>(terms_.size());
  int work = bits + bit_length(slack) + 1;
  work = (work + 63) / 64 * 64;

  BigInt lo = 0, hi = 0;
  for (const auto& [radicand, coeff] : terms_) {
    const BigInt& num = coeff.get_num();
    const BigInt& den = coeff.get_den();
    if (radicand == 1) {
      BigInt scaled = num;
      scaled <<= static_cast<mp_bitcnt_t>(work);
      lo += floor_div(scaled, den);
      hi += ceil_div(scaled, den);
      continue;
    }
    const BigInt& root = scaled_sqrt(radicand, work);  // sqrt(d) * 2^work in [root, root + 1)
    BigInt a = num * root;
    BigInt b = num * (root + 1);
    if (num < 0) std::swap(a, b);
    lo += floor_div(a, den);
    hi += ceil_div(b, den);
  }
  out.lo = std::move(lo);
  out.hi = std::move(hi);
  out.bits = work;
  return out;
}

double RealConstant::approx() const { return enclose(64).midpoint(); }

std::string RealConstant::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [r, c] : terms_) {
    if (!first) os << (c < 0 ? " - " : " + ");
    Rational shown = first ? c : abs(c);
    if (r == 1) {
      os << shown.get_str();
    } else {
      if (shown == -1) os << "-";
      else if (shown != 1) os << shown.get_str() << "*";
      os << "sqrt(" << r << ")";
    }
    first = false;
  }
  return os.str();
}

int sign(const RealConstant& value, Precision& precision) {
  if (value.is_zero()) return 0;
  if (value.is_rational()) return sgn(value.rational_part());
  for (int bits = precision.start_bits;; bits = std::min(2 * bits, precision.cap_bits)) {
    precision.max_used = std::max(precision.max_used, bits);
    DyadicInterval iv = value.enclose(bits);
    if (iv.lo > 0) return 1;
    if (iv.hi < 0) return -1;
    if (bits >= precision.cap_bits) {
      throw PrecisionExhausted("sign of " + value.to_string() + " undecided at " +
                                   std::to_string(bits) + " bits",
                               bits);
    }
  }
}

BigInt floor(const RealConstant& value, Precision& precision) {
  if (value.is_rational()) {
    Rational q = value.rational_part();
    return floor_div(q.get_num(), q.get_den());
  }
  for (int bits = precision.start_bits;; bits = std::min(2 * bits, precision.cap_bits)) {
    precision.max_used = std::max(precision.max_used, bits);
    DyadicInterval iv = value.enclose(bits);
    BigInt lo = shift_floor(iv.lo, iv.bits);
    if (lo == shift_floor(iv.hi, iv.bits)) return lo;
    if (bits >= precision.cap_bits) {
      throw PrecisionExhausted("floor of " + value.to_string() + " undecided at " +
                                   std::to_string(bits) + " bits",
                               bits);
    }
  }
}

RealConstant fractional_part(const RealConstant& value, Precision& precision) {
  return value - RealConstant(Rational(floor(value, precision)));
}

BigInt binomial(std::uint64_t n, std::uint64_t k) {
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

}  // namespace symdyn
