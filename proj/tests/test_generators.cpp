#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "symdyn/combinatorics.hpp"
#include "symdyn/generators.hpp"

using namespace symdyn;

namespace {

RealConstant sqrt2_minus_1() { return RealConstant::sqrt(2) - RealConstant(1); }

PolynomialSpec sqrt2_n2() { return PolynomialSpec{{RealConstant(), RealConstant(), RealConstant::sqrt(2)}}; }

}  // namespace

TEST_CASE("canonical mechanical word for sqrt(2) - 1 matches the floor oracle") {
  WordStream w = mechanical_word(MechanicalParams::canonical(sqrt2_minus_1()));
  CHECK(w.alphabet() == sturmian_alphabet());
  auto p = w.prefix(5000);
  for (unsigned long n = 0; n < p.size(); ++n) {
    const bool a = n == 0 || oracle::floor_n_sqrt2_minus_1(n) - oracle::floor_n_sqrt2_minus_1(n - 1) == 1;
    REQUIRE(p[n] == (a ? 0 : 1));
  }
}

TEST_CASE("mechanical words have complexity k + 1") {
  Precision p;
  for (unsigned long d : {2ul, 3ul, 5ul, 7ul}) {
    RealConstant alpha = fractional_part(RealConstant::sqrt(d), p);
    WordStream w = mechanical_word(MechanicalParams::canonical(alpha, RealConstant(Rational(1, 3))));
    auto report = complexity_table(w, 20000, 60);
    for (const auto& [k, t] : report.table) REQUIRE(t == k + 1);
  }
}

TEST_CASE("mechanical word with a wrapping arc is the complement of the plain arc") {
  RealConstant alpha = sqrt2_minus_1();
  MechanicalParams plain{alpha, RealConstant(), RealConstant(Rational(1, 5)), RealConstant(Rational(3, 5))};
  MechanicalParams wrapped{alpha, RealConstant(), RealConstant(Rational(3, 5)), RealConstant(Rational(1, 5))};
  WordStream a = mechanical_word(plain), b = mechanical_word(wrapped);
  auto pa = a.prefix(3000), pb = b.prefix(3000);
  for (std::size_t i = 0; i < pa.size(); ++i) REQUIRE(pa[i] != pb[i]);
}

TEST_CASE("mechanical parameters are validated") {
  CHECK_THROWS_AS(mechanical_word(MechanicalParams::canonical(RealConstant(Rational(1, 2)))), PreconditionError);
  CHECK_THROWS_AS(mechanical_word(MechanicalParams::canonical(RealConstant::sqrt(2))), PreconditionError);
  CHECK_THROWS_AS(mechanical_word(MechanicalParams::canonical(sqrt2_minus_1(), RealConstant(1))), PreconditionError);
}

TEST_CASE("Tribonacci fixed point") {
  auto m = Morphism::from_strings({{"0", "01"}, {"1", "02"}, {"2", "0"}});
  WordStream w = morphic_fixed_point(m, 0);
  CHECK(w.alphabet().render(w.prefix(14)) == "01020100102010");
  // Fixed point: phi(prefix) is again a prefix.
  FiniteWord head(w.prefix(500).begin(), w.prefix(500).end());
  FiniteWord image = m.apply(head);
  auto longer = w.prefix(image.size());
  CHECK(std::equal(image.begin(), image.end(), longer.begin()));
  auto report = complexity_table(w, 20000, 40);
  for (const auto& [k, t] : report.table) REQUIRE(t == 2 * k + 1);
}

TEST_CASE("morphisms that cannot be iterated are rejected") {
  auto m = Morphism::from_strings({{"a", "ba"}, {"b", "b"}});
  CHECK_THROWS_AS(morphic_fixed_point(m, 0), PreconditionError);
  CHECK_THROWS_AS(Morphism::from_strings({{"ab", "a"}}), PreconditionError);
  CHECK_THROWS_AS(Morphism::from_strings({{"a", ""}}), PreconditionError);
  CHECK_THROWS_AS(Morphism::from_strings({{"a", "ac"}}), PreconditionError);
}

TEST_CASE("substitution limit with constant directive is a morphic fixed point") {
  FiniteWord limit = sturmian_substitution_limit({1}, {SubstitutionKind::a_type}, 8);
  auto m = Morphism::from_strings({{"a", "aab"}, {"b", "ab"}});
  WordStream fixed = morphic_fixed_point(m, 0);
  auto p = fixed.prefix(limit.size());
  CHECK(std::equal(limit.begin(), limit.end(), p.begin()));

  FiniteWord b_limit = sturmian_substitution_limit({2}, {SubstitutionKind::b_type}, 6);
  CHECK(sturmian_alphabet().render(std::span<const Symbol>(b_limit).first(4)) == "bbba");
  // a -> b^2 a, b -> b^3 a; w_2 = "bba"
  CHECK(sturmian_alphabet().render(sturmian_substitution_limit({2}, {SubstitutionKind::b_type}, 2)) == "bba");
}

TEST_CASE("substitution limits of varying directives are Sturmian") {
  FiniteWord w = sturmian_substitution_limit({1, 2, 3}, {SubstitutionKind::a_type, SubstitutionKind::b_type}, 10);
  REQUIRE(w.size() > 5000);
  FactorIndex index(w, 40);
  for (std::size_t k = 1; k <= 30; ++k) REQUIRE(index.count(k) == k + 1);
  CHECK(is_balanced(index, 0, 30).balanced);
  CHECK_THROWS_AS(sturmian_substitution_limit({0}, {SubstitutionKind::a_type}, 3), PreconditionError);
  CHECK_THROWS_AS(sturmian_substitution_limit({1}, {SubstitutionKind::a_type}, 0), PreconditionError);
}

TEST_CASE("two-interval exchange is a rotation coding") {
  RealConstant alpha = sqrt2_minus_1();
  IETSpec spec{{RealConstant(1) - alpha, alpha}, {2, 1}};
  RealConstant x0(Rational(1, 7));
  WordStream iet = iet_coding(spec, x0);
  WordStream rot = mechanical_word(MechanicalParams{alpha, x0, RealConstant(), RealConstant(1) - alpha});
  auto a = iet.prefix(5000), b = rot.prefix(5000);
  CHECK(std::equal(a.begin(), a.end(), b.begin()));
}

TEST_CASE("three-interval exchange has complexity 2k + 1") {
  RealConstant a = sqrt2_minus_1() * Rational(1, 2);
  RealConstant b = (RealConstant(3) - RealConstant::sqrt(5)) * Rational(1, 2);
  IETSpec spec{{a, b, RealConstant(1) - a - b}, {3, 2, 1}};
  WordStream w = iet_coding(spec, RealConstant());
  auto report = complexity_table(w, 30000, 40);
  for (const auto& [k, t] : report.table) REQUIRE(t == 2 * k + 1);
}

TEST_CASE("interval exchange specs are validated") {
  Precision p;
  IETSpec bad_sum{{RealConstant(Rational(1, 2)), RealConstant(Rational(1, 3))}, {2, 1}};
  CHECK_THROWS_AS(bad_sum.validate(p), PreconditionError);
  IETSpec bad_perm{{RealConstant(Rational(1, 2)), RealConstant(Rational(1, 2))}, {1, 1}};
  CHECK_THROWS_AS(bad_perm.validate(p), PreconditionError);
  IETSpec negative{{RealConstant(Rational(3, 2)), RealConstant(Rational(-1, 2))}, {2, 1}};
  CHECK_THROWS_AS(negative.validate(p), PreconditionError);
}

TEST_CASE("polynomial binary word matches integer square roots") {
  WordStream w = polynomial_binary_word(sqrt2_n2());
  auto p = w.prefix(20000);
  for (unsigned long n = 0; n < p.size(); ++n) REQUIRE(p[n] == oracle::binary_sqrt2_n2(n));
  CHECK_THROWS_AS(polynomial_binary_word(PolynomialSpec{{RealConstant(), RealConstant(Rational(1, 2))}}),
                  PreconditionError);
  CHECK_THROWS_AS(polynomial_binary_word(PolynomialSpec{{RealConstant::sqrt(2)}}), PreconditionError);
}

TEST_CASE("second difference word of floor(sqrt(2) n^2)") {
  WordStream w = difference_word(sqrt2_n2(), 2);
  CHECK(w.alphabet().names() == std::vector<std::string>{"1", "2", "3", "4"});
  auto p = w.prefix(20000);
  for (unsigned long n = 0; n < p.size(); ++n) {
    mpz_class v = oracle::floor_sqrt2_n2(n + 2) - 2 * oracle::floor_sqrt2_n2(n + 1) + oracle::floor_sqrt2_n2(n);
    REQUIRE(w.alphabet().name(p[n]) == v.get_str());
  }
}

TEST_CASE("difference word of higher order than the degree") {
  // Delta^3 of a quadratic sits within 4 of zero.
  WordStream w = difference_word(sqrt2_n2(), 3);
  CHECK(w.alphabet().names() == std::vector<std::string>{"-3", "-2", "-1", "0", "1", "2", "3"});
  auto p = w.prefix(3000);
  for (unsigned long n = 0; n < p.size(); ++n) {
    mpz_class v = oracle::floor_sqrt2_n2(n + 3) - 3 * oracle::floor_sqrt2_n2(n + 2) +
                  3 * oracle::floor_sqrt2_n2(n + 1) - oracle::floor_sqrt2_n2(n);
    REQUIRE(w.alphabet().name(p[n]) == v.get_str());
  }
  CHECK_THROWS_AS(difference_word(sqrt2_n2(), 1), PreconditionError);
  CHECK_THROWS_AS(difference_word(sqrt2_n2(), 17), PreconditionError);
}

TEST_CASE("skew product parameters derived from sqrt(2) n^2") {
  TorusSkewSpec spec = derive_skew_spec(sqrt2_n2());
  CHECK(spec.dimension == 2);
  CHECK(spec.epsilon == RealConstant::sqrt(2, 2) - RealConstant(2));
  CHECK(spec.initial[0] == RealConstant::sqrt(2) - RealConstant(1));  // {P(1) - P(0)}
  CHECK(spec.initial[1].is_zero());
}

TEST_CASE("torus closed form agrees with iteration") {
  PolynomialSpec cubic{{RealConstant(Rational(1, 3)), RealConstant::sqrt(3), RealConstant(Rational(-2, 7)),
                        RealConstant::sqrt(5, Rational(1, 4))}};
  TorusSkewSpec spec = derive_skew_spec(cubic);
  Precision p;
  for (std::uint64_t k : {0u, 1u, 2u, 7u, 30u, 101u}) {
    REQUIRE(torus_state_after(spec, k, p) == torus_state_iterated(spec, k, p));
    // The last coordinate is {P(k)}.
    REQUIRE(torus_state_after(spec, k, p).back() == fractional_part(cubic.evaluate(BigInt(k)), p));
  }
}

TEST_CASE("torus coding equals the polynomial binary word") {
  PolynomialSpec p = sqrt2_n2();
  WordStream torus = torus_skew_coding(derive_skew_spec(p));
  WordStream binary = polynomial_binary_word(p);
  auto a = torus.prefix(2000), b = binary.prefix(2000);
  CHECK(std::equal(a.begin(), a.end(), b.begin()));

  PolynomialSpec cubic{{RealConstant(), RealConstant(Rational(1, 2)), RealConstant(), RealConstant::sqrt(3)}};
  WordStream t3 = torus_skew_coding(derive_skew_spec(cubic));
  WordStream b3 = polynomial_binary_word(cubic);
  auto c = t3.prefix(1000), d = b3.prefix(1000);
  CHECK(std::equal(c.begin(), c.end(), d.begin()));
}

TEST_CASE("precision exhaustion names the failing index") {
  // P(n) = (sqrt(2) - p/q) n with p/q a Pell convergent: P(1) is about 1e-80.
  mpz_class p0 = 1, q0 = 1;
  for (int i = 0; i < 130; ++i) {
    mpz_class p1 = p0 + 2 * q0, q1 = p0 + q0;
    p0 = p1;
    q0 = q1;
  }
  PolynomialSpec huge{{RealConstant(), RealConstant::sqrt(2) - RealConstant(Rational(p0, q0))}};
  WordStream w = polynomial_binary_word(huge, Precision{64, 128});
  CHECK(w.symbol_at(0) == 0);
  try {
    w.symbol_at(1);
    FAIL("expected precision exhaustion");
  } catch (const PrecisionExhausted& e) {
    CHECK(std::string(e.what()).find("at index 1") != std::string::npos);
    CHECK(e.bits() == 128);
  }
  WordStream ok = polynomial_binary_word(huge, Precision{64, 4096});
  CHECK_NOTHROW(ok.prefix(50));
  CHECK(ok.precision_bits_used() > 64);
}

TEST_CASE("streams restart to the same word") {
  WordStream w = iet_coding(IETSpec{{RealConstant(1) - sqrt2_minus_1(), sqrt2_minus_1()}, {2, 1}}, RealConstant());
  FiniteWord first(w.prefix(700).begin(), w.prefix(700).end());
  w.restart();
  auto again = w.prefix(700);
  CHECK(std::equal(first.begin(), first.end(), again.begin()));
}
