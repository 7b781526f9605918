#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "symdyn/real_constant.hpp"

namespace symdyn {

/// prod_{i<j} (ks[j] - ks[i]); 1 for fewer than two entries.
BigInt vandermonde(const std::vector<BigInt>& ks);
BigInt vandermonde(const std::vector<long>& ks);

/// p_d(n) = sum over 0 <= k_1 < ... < k_d <= n+d-1 of V(k_1..k_d), divided
/// by V(0..d-1). Throws std::logic_error if the division is not exact.
BigInt arnoux_mauduit_pd(unsigned long n, unsigned long d);

/// Q(k) = sum over 0 <= k_1 < ... < k_m <= k of det[C(k_i, j)], i = 1..m,
/// j = 0..m-1, each determinant by fraction-free elimination.
BigInt theorem_q(unsigned long k, unsigned long m);

/// Determinant of a square integer matrix (Bareiss).
BigInt bareiss_determinant(std::vector<std::vector<BigInt>> a);

struct DifferenceTable {
  /// rows[0] is the input, rows[j+1] the forward differences of rows[j].
  /// Stops at a row of length one or a row of zeros.
  std::vector<std::vector<BigInt>> rows;

  /// First row of length >= 2 whose entries are all equal.
  std::optional<std::size_t> constant_row() const;
};

DifferenceTable difference_table(const std::vector<BigInt>& values);

/// Polynomial in k agreeing with a table from onset to its last entry.
struct PolynomialFit {
  std::size_t degree = 0;
  std::vector<Rational> coefficients;  // lowest degree first
  std::size_t onset = 0;               // k0
  std::size_t last = 0;                // verified on [onset, last]

  Rational evaluate(long k) const;
  Rational leading_coefficient() const { return coefficients.back(); }
  std::size_t run_length() const { return last - onset + 1; }
  std::string to_string() const;
};

/// Smallest degree d <= max_degree, then smallest onset k0, such that the
/// table from k0 to its end has at least min_run values and constant d-th
/// differences. The fit is rebuilt in Newton forward form and checked
/// value by value. k must be consecutive.
std::optional<PolynomialFit> detect_eventual_polynomial(const std::vector<std::pair<std::size_t, BigInt>>& values,
                                                        std::size_t max_degree, std::size_t min_run = 6);

/// Report shape shared by the verification suites.
struct VerificationReport {
  std::string formula;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  std::vector<std::pair<std::size_t, BigInt>> empirical_table;
  std::optional<PolynomialFit> fitted_polynomial;
  bool verdict = false;
  std::vector<std::string> notes;

  nlohmann::ordered_json to_json() const;
};

nlohmann::ordered_json fit_to_json(const PolynomialFit& fit);
std::string rational_string(const Rational& q);

}  // namespace symdyn
