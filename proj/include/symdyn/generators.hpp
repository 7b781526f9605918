#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "symdyn/real_constant.hpp"
#include "symdyn/word.hpp"

namespace symdyn {

/// Orbit of x0 under rotation by alpha, coded 'a' inside the half-open arc
/// [arc_begin, arc_end) of the circle R/Z and 'b' outside. An arc with
/// arc_begin > arc_end wraps through 0.
struct MechanicalParams {
  RealConstant alpha;
  RealConstant x0;
  RealConstant arc_begin;
  RealConstant arc_end;

  /// U = [0, alpha), the canonical Sturmian coding.
  static MechanicalParams canonical(RealConstant alpha, RealConstant x0 = RealConstant());
};

WordStream mechanical_word(const MechanicalParams& params, Precision precision = {});

enum class SubstitutionKind {
  a_type,  // a -> a^{k+1} b, b -> a^k b
  b_type,  // a -> b^k a,     b -> b^{k+1} a
};

/// Approximant w_steps = s_1 o ... o s_{steps-1}(a) of the Sturmian word
/// directed by (k_i, kind_i). Both lists are cycled when shorter than the
/// number of steps; w_1 is the seed "a". Alphabet {a, b}.
FiniteWord sturmian_substitution_limit(const std::vector<std::size_t>& k_sequence,
                                       const std::vector<SubstitutionKind>& kinds, std::size_t steps);
Alphabet sturmian_alphabet();

struct Morphism {
  Alphabet alphabet;
  std::vector<FiniteWord> images;  // images[s] = image of symbol s

  /// Parses e.g. {{"0","01"},{"1","02"},{"2","0"}} with single-character symbols.
  static Morphism from_strings(const std::map<std::string, std::string>& rules);
  FiniteWord apply(std::span<const Symbol> word) const;
};

/// lim phi^n(seed). Requires phi(seed) to start with seed and have length >= 2.
WordStream morphic_fixed_point(const Morphism& morphism, Symbol seed);

/// Interval exchange on [0, 1): interval i (in natural order) has length
/// lengths[i] and lands at position permutation[i] (1-based). Coding symbol i
/// for points of interval i.
struct IETSpec {
  std::vector<RealConstant> lengths;
  std::vector<std::size_t> permutation;

  void validate(Precision& precision) const;
};

WordStream iet_coding(const IETSpec& spec, const RealConstant& x0, Precision precision = {});

/// P(n) = sum_j coeffs[j] n^j; the leading coefficient must be irrational.
struct PolynomialSpec {
  std::vector<RealConstant> coeffs;  // lowest degree first

  std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  RealConstant evaluate(const BigInt& n) const;
  /// Checks degree >= 1 and irrational leading coefficient.
  void validate() const;
};

/// Skew product x_1 += eps, x_i += x_{i-1} (mod 1) on the m-torus whose last
/// coordinate follows {P(n)}.
struct TorusSkewSpec {
  std::size_t dimension = 0;
  RealConstant epsilon;
  std::vector<RealConstant> initial;  // x_1(0) .. x_m(0)

  std::size_t coding_coordinate() const { return dimension; }  // 1-based
};

/// Differences P_m = P, P_{i-1}(n) = P_i(n+1) - P_i(n) down to the constant
/// P_0 = m! a_m; eps = {P_0}, x_i(0) = {P_i(0)}.
TorusSkewSpec derive_skew_spec(const PolynomialSpec& p, Precision precision = {});

/// State after k steps from the binomial closed form
/// x_i(k) = { sum_{j=0}^{i} C(k, j) x_{i-j}(0) } with x_0 = eps.
std::vector<RealConstant> torus_state_after(const TorusSkewSpec& spec, std::uint64_t k,
                                            Precision& precision);
/// Same state, by stepping the map k times.
std::vector<RealConstant> torus_state_iterated(const TorusSkewSpec& spec, std::uint64_t k,
                                               Precision& precision);

/// 0 while x_m in [0, 1/2), else 1.
WordStream torus_skew_coding(const TorusSkewSpec& spec, Precision precision = {});

/// floor(2 {P(n)}) in {0, 1}.
WordStream polynomial_binary_word(const PolynomialSpec& p, Precision precision = {});

/// Delta^d floor(Q(n)). Requires d >= deg Q so the alphabet is finite; the
/// alphabet is every integer within 2^{d-1} of Delta^d Q, which has 2^d
/// elements when Delta^d Q is irrational.
WordStream difference_word(const PolynomialSpec& q, std::size_t d, Precision precision = {});

}  // namespace symdyn
