#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace gpac {

/// Sparse exponent vector: (variable, power) pairs sorted by variable,
/// powers strictly positive.
using Monomial = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

Monomial multiply(const Monomial& a, const Monomial& b);
unsigned total_degree(const Monomial& m);

/// Coefficients carry the 64-bit mantissa of long double: interpolants
/// expanded into monomials cancel heavily at the grid nodes, and double
/// coefficients leave errors near 1e-11 there.
using Coefficient = long double;

/// Sparse multivariate polynomial sum a_alpha X^alpha with real
/// coefficients. Variables are plain indices into a state vector.
class Polynomial {
 public:
  Polynomial() = default;
  static Polynomial constant(Coefficient c);
  static Polynomial variable(std::uint32_t index, Coefficient coeff = 1.0L);

  const std::map<Monomial, Coefficient>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add_term(const Monomial& m, Coefficient coeff);

  unsigned degree() const;
  /// sum |a_alpha|
  double coefficient_sum() const;
  /// One past the largest variable index used (0 for constants).
  std::uint32_t variable_bound() const;

  Polynomial derivative(std::uint32_t var) const;
  /// Renames variable i to map[i].
  Polynomial remap(const std::vector<std::uint32_t>& map) const;
  Polynomial shifted(std::uint32_t offset) const;
  /// Replaces variable `var` by the polynomial `replacement`.
  Polynomial substitute(std::uint32_t var, const Polynomial& replacement) const;

  template <class Scalar>
  Scalar eval(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& y) const {
    Scalar sum = 0;
    for (const auto& [mono, coeff] : terms_) {
      Scalar term = Scalar(coeff);
      for (const auto& [var, power] : mono)
        for (std::uint32_t p = 0; p < power; ++p) term *= y[var];
      sum += term;
    }
    return sum;
  }

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(Coefficient s);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(Polynomial a) { return a *= -1.0L; }
  friend Polynomial operator*(Polynomial a, Coefficient s) { return a *= s; }
  friend Polynomial operator*(Coefficient s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  bool operator==(const Polynomial&) const = default;

  std::string to_string(const std::vector<std::string>& names = {}) const;

 private:
  std::map<Monomial, Coefficient> terms_;
};

using PolyVector = std::vector<Polynomial>;

unsigned degree(const PolyVector& p);
/// max_i sum |a_alpha| over component i.
double coefficient_sum(const PolyVector& p);

/// Flattened form of a PolyVector for repeated evaluation: per-variable
/// power tables are filled once per call, each term is a coefficient times
/// a short list of table lookups.
class PolyEvaluator {
 public:
  PolyEvaluator() = default;
  explicit PolyEvaluator(const PolyVector& p);

  std::size_t outputs() const { return row_start_.empty() ? 0 : row_start_.size() - 1; }

  template <class Scalar>
  void eval(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& y,
            Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& out) const;

 private:
  struct Factor {
    std::uint32_t slot;  // offset into the power table
  };
  std::vector<Coefficient> coeffs_;
  std::vector<std::uint32_t> factor_start_;  // per term, into factors_
  std::vector<Factor> factors_;
  std::vector<std::uint32_t> row_start_;     // per output, into coeffs_
  std::vector<std::uint32_t> power_offset_;  // per variable
  std::vector<std::uint32_t> max_power_;     // per variable
  std::uint32_t table_size_ = 0;
};

template <class Scalar>
void PolyEvaluator::eval(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& y,
                         Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& out) const {
  thread_local std::vector<Scalar> table;
  table.resize(table_size_);
  for (std::size_t v = 0; v < max_power_.size(); ++v) {
    if (max_power_[v] == 0) continue;
    Scalar* row = table.data() + power_offset_[v];
    row[0] = y[static_cast<Eigen::Index>(v)];
    for (std::uint32_t p = 1; p < max_power_[v]; ++p) row[p] = row[p - 1] * row[0];
  }
  out.resize(static_cast<Eigen::Index>(outputs()));
  for (std::size_t r = 0; r + 1 < row_start_.size(); ++r) {
    // Neumaier summation: the expanded interpolants cancel heavily
    Scalar sum = 0, carry = 0;
    for (std::uint32_t t = row_start_[r]; t < row_start_[r + 1]; ++t) {
      Scalar term = Scalar(coeffs_[t]);
      for (std::uint32_t f = factor_start_[t]; f < factor_start_[t + 1]; ++f)
        term *= table[factors_[f].slot];
      const Scalar next = sum + term;
      carry += std::abs(sum) >= std::abs(term) ? (sum - next) + term : (term - next) + sum;
      sum = next;
    }
    out[static_cast<Eigen::Index>(r)] = sum + carry;
  }
}

}  // namespace gpac
