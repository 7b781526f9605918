#include "symdyn/analysis.hpp"

#include <functional>
#include <sstream>
#include <stdexcept>

#include "symdyn/word.hpp"

namespace symdyn {

BigInt vandermonde(const std::vector<BigInt>& ks) {
  BigInt v = 1;
  for (std::size_t j = 0; j < ks.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) v *= ks[j] - ks[i];
  }
  return v;
}

BigInt vandermonde(const std::vector<long>& ks) {
  std::vector<BigInt> big(ks.begin(), ks.end());
  return vandermonde(big);
}

namespace {

/// Calls f on every strictly increasing d-tuple drawn from [0, top].
void for_each_increasing(unsigned long d, unsigned long top, const std::function<void(const std::vector<BigInt>&)>& f) {
  if (d == 0) {
    f({});
    return;
  }
  if (d > top + 1) return;
  std::vector<unsigned long> idx(d);
  for (unsigned long i = 0; i < d; ++i) idx[i] = i;
  std::vector<BigInt> tuple(d);
  for (;;) {
    for (unsigned long i = 0; i < d; ++i) tuple[i] = idx[i];
    f(tuple);
    long i = static_cast<long>(d) - 1;
    while (i >= 0 && idx[i] == top - (d - 1 - i)) --i;
    if (i < 0) return;
    ++idx[i];
    for (unsigned long j = i + 1; j < d; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

BigInt arnoux_mauduit_pd(unsigned long n, unsigned long d) {
  if (d < 1) throw PreconditionError("arnoux_mauduit_pd needs d >= 1");
  BigInt sum = 0;
  for_each_increasing(d, n + d - 1, [&](const std::vector<BigInt>& ks) { sum += vandermonde(ks); });
  std::vector<BigInt> base;
  for (unsigned long i = 0; i < d; ++i) base.emplace_back(i);
  const BigInt norm = vandermonde(base);
  BigInt q, r;
  mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), sum.get_mpz_t(), norm.get_mpz_t());
  if (r != 0) throw std::logic_error("p_d normalisation left a remainder");
  return q;
}

BigInt bareiss_determinant(std::vector<std::vector<BigInt>> a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  BigInt sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t swap = k + 1;
      while (swap < n && a[swap][k] == 0) ++swap;
      if (swap == n) return 0;
      std::swap(a[k], a[swap]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        BigInt t = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

BigInt theorem_q(unsigned long k, unsigned long m) {
  if (m < 1) throw PreconditionError("theorem_q needs m >= 1");
  if (k + 1 < m) throw PreconditionError("theorem_q needs k >= m - 1");
  BigInt sum = 0;
  for_each_increasing(m, k, [&](const std::vector<BigInt>& ks) {
    std::vector<std::vector<BigInt>> matrix(m, std::vector<BigInt>(m));
    for (unsigned long i = 0; i < m; ++i) {
      for (unsigned long j = 0; j < m; ++j) matrix[i][j] = binomial(ks[i].get_ui(), j);
    }
    sum += bareiss_determinant(std::move(matrix));
  });
  return sum;
}

std::optional<std::size_t> DifferenceTable::constant_row() const {
  for (std::size_t j = 0; j < rows.size(); ++j) {
    const auto& row = rows[j];
    if (row.size() < 2) continue;
    bool constant = true;
    for (const auto& v : row) constant = constant && v == row.front();
    if (constant) return j;
  }
  return std::nullopt;
}

DifferenceTable difference_table(const std::vector<BigInt>& values) {
  if (values.size() < 2) throw PreconditionError("difference table needs at least two values");
  DifferenceTable t;
  t.rows.push_back(values);
  for (;;) {
    const auto& row = t.rows.back();
    bool zero = true;
    for (const auto& v : row) zero = zero && v == 0;
    if (row.size() <= 1 || (zero && t.rows.size() > 1)) break;
    std::vector<BigInt> next(row.size() - 1);
    for (std::size_t i = 0; i + 1 < row.size(); ++i) next[i] = row[i + 1] - row[i];
    t.rows.push_back(std::move(next));
  }
  return t;
}

Rational PolynomialFit::evaluate(long k) const {
  Rational acc = 0;
  for (std::size_t j = coefficients.size(); j-- > 0;) acc = acc * k + coefficients[j];
  return acc;
}

std::string rational_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_den() == 1 ? c.get_num().get_str() : c.get_num().get_str() + "/" + c.get_den().get_str();
}

std::string PolynomialFit::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t j = coefficients.size(); j-- > 0;) {
    if (coefficients[j] == 0) continue;
    os << (first ? "" : " + ") << "(" << rational_string(coefficients[j]) << ")";
    if (j >= 1) os << "*k";
    if (j >= 2) os << "^" << j;
    first = false;
  }
  return first ? "0" : os.str();
}

std::optional<PolynomialFit> detect_eventual_polynomial(const std::vector<std::pair<std::size_t, BigInt>>& values,
                                                        std::size_t max_degree, std::size_t min_run) {
  if (min_run < max_degree + 2) throw PreconditionError("min_run must be at least max_degree + 2");
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i].first != values[i - 1].first + 1) throw PreconditionError("table arguments must be consecutive");
  }
  const std::size_t n = values.size();
  if (n < min_run) return std::nullopt;

  std::vector<BigInt> row;
  for (const auto& v : values) row.push_back(v.second);
  for (std::size_t d = 0; d <= max_degree; ++d) {
    if (d > 0) {
      for (std::size_t i = 0; i + 1 < row.size(); ++i) row[i] = row[i + 1] - row[i];
      row.pop_back();
    }
    // row[i] = Delta^d T at table position i; the d-th differences of the
    // values from position s onward are row[s..]. Longest constant tail:
    std::size_t start = row.size() - 1;
    while (start > 0 && row[start - 1] == row.back()) --start;
    if (n - start < min_run) continue;

    // Newton forward form at k0: Q(k) = sum_j Delta^j T(k0) C(k - k0, j).
    const long k0 = static_cast<long>(values[start].first);
    std::vector<BigInt> lead;  // Delta^j T(k0), j = 0..d
    {
      std::vector<BigInt> r;
      for (std::size_t i = start; i < n; ++i) r.push_back(values[i].second);
      for (std::size_t j = 0; j <= d; ++j) {
        lead.push_back(r.front());
        for (std::size_t i = 0; i + 1 < r.size(); ++i) r[i] = r[i + 1] - r[i];
        r.pop_back();
      }
    }
    PolynomialFit fit;
    fit.degree = d;
    fit.onset = values[start].first;
    fit.last = values.back().first;
    fit.coefficients.assign(d + 1, Rational(0));
    std::vector<Rational> basis{Rational(1)};  // C(k - k0, j) in powers of k
    for (std::size_t j = 0; j <= d; ++j) {
      if (j > 0) {
        // multiply by (k - k0 - (j - 1)) / j
        std::vector<Rational> next(basis.size() + 1, Rational(0));
        const Rational shift(-(k0 + static_cast<long>(j) - 1));
        for (std::size_t t = 0; t < basis.size(); ++t) {
          next[t + 1] += basis[t];
          next[t] += basis[t] * shift;
        }
        for (auto& c : next) c /= static_cast<long>(j);
        basis = std::move(next);
      }
      for (std::size_t t = 0; t < basis.size(); ++t) fit.coefficients[t] += basis[t] * Rational(lead[j]);
    }
    for (auto& c : fit.coefficients) c.canonicalize();
    for (std::size_t i = start; i < n; ++i) {
      if (fit.evaluate(static_cast<long>(values[i].first)) != Rational(values[i].second)) {
        throw std::logic_error("Newton reconstruction disagrees with the table");
      }
    }
    if (d > 0 && fit.coefficients.back() == 0) continue;  // lower degree would have matched
    return fit;
  }
  return std::nullopt;
}

nlohmann::ordered_json fit_to_json(const PolynomialFit& fit) {
  nlohmann::ordered_json j;
  j["degree"] = fit.degree;
  auto coeffs = nlohmann::ordered_json::array();
  for (const auto& c : fit.coefficients) coeffs.push_back(rational_string(c));
  j["coefficients"] = coeffs;
  j["leading_coefficient"] = rational_string(fit.leading_coefficient());
  j["verified_range"] = {fit.onset, fit.last};
  j["text"] = fit.to_string();
  return j;
}

nlohmann::ordered_json VerificationReport::to_json() const {
  nlohmann::ordered_json j;
  j["formula"] = formula;
  j["parameters"] = parameters;
  auto table = nlohmann::ordered_json::array();
  for (const auto& [k, t] : empirical_table) {
    if (t.fits_slong_p()) {
      table.push_back({{"k", k}, {"T", t.get_si()}});
    } else {
      table.push_back({{"k", k}, {"T", t.get_str()}});
    }
  }
  j["empirical_table"] = table;
  j["fitted_polynomial"] = fitted_polynomial ? fit_to_json(*fitted_polynomial) : nlohmann::ordered_json(nullptr);
  j["onset"] = fitted_polynomial ? nlohmann::ordered_json(fitted_polynomial->onset) : nlohmann::ordered_json(nullptr);
  j["verdict"] = verdict ? "PASS" : "FAIL";
  if (!notes.empty()) j["notes"] = notes;
  return j;
}

}  // namespace symdyn
