#pragma once

#include "gpac/rational.hpp"
#include "gpac/turing.hpp"

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace gpac {

/// Lagrange interpolant of f over a product grid G = X_1 x ... x X_d:
///
///   L_f(x) = sum_{g in G} f(g) prod_i prod_{a in X_i, a != g_i} (x_i - a) / (g_i - a)
///
/// together with the Lipschitz constant A and magnitude constant B that
/// hold on the box [-K, K]^d.
class InterpPoly {
 public:
  /// `values` is row-major over the axes (last axis fastest). Throws
  /// std::invalid_argument on repeated nodes within an axis.
  InterpPoly(std::vector<std::vector<double>> axes, std::vector<double> values,
             double box_radius);

  int dimension() const { return static_cast<int>(axes_.size()); }
  std::size_t grid_size() const { return values_.size(); }
  const std::vector<std::vector<double>>& axes() const { return axes_; }
  const std::vector<double>& values() const { return values_; }
  double box_radius() const { return box_radius_; }

  // Constants, exact.
  const Rational& delta() const { return delta_; }
  const Rational& max_value() const { return max_value_; }  // F
  const Rational& reach() const { return reach_; }          // M = K + max |g|
  const Rational& lipschitz() const { return lipschitz_; }  // A
  const Rational& magnitude() const { return magnitude_; }  // B

  /// Product formula, factored per axis.
  template <class Scalar>
  Scalar eval(std::span<const Scalar> point) const;

  template <class Scalar>
  Scalar eval(Scalar a, Scalar b) const {
    const Scalar p[2] = {a, b};
    return eval<Scalar>(std::span<const Scalar>(p, 2));
  }

  /// Coefficients (constant term first) of the 1-D basis polynomial for
  /// node j of axis i, exact.
  std::vector<Rational> basis_coefficients(int axis, int node) const;

 private:
  std::vector<std::vector<double>> axes_;
  std::vector<double> values_;
  double box_radius_;
  Rational delta_, max_value_, reach_, lipschitz_, magnitude_;
};

template <class Scalar>
Scalar InterpPoly::eval(std::span<const Scalar> point) const {
  if (point.size() != axes_.size()) throw std::invalid_argument("interpolant dimension mismatch");
  // basis[i][j] = l_{i,j}(x_i)
  std::vector<std::vector<Scalar>> basis(axes_.size());
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    const auto& nodes = axes_[i];
    basis[i].resize(nodes.size());
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      Scalar l = 1;
      for (std::size_t n = 0; n < nodes.size(); ++n) {
        if (n == j) continue;
        l *= (point[i] - Scalar(nodes[n])) / Scalar(nodes[j] - nodes[n]);
      }
      basis[i][j] = l;
    }
  }
  Scalar sum = 0;
  std::vector<std::size_t> index(axes_.size(), 0);
  for (std::size_t g = 0; g < values_.size(); ++g) {
    if (values_[g] != 0) {
      Scalar term = Scalar(values_[g]);
      for (std::size_t i = 0; i < axes_.size(); ++i) term *= basis[i][index[i]];
      sum += term;
    }
    for (std::size_t i = axes_.size(); i-- > 0;) {
      if (++index[i] < axes_[i].size()) break;
      index[i] = 0;
    }
  }
  return sum;
}

enum class TableComponent { State = 1, Symbol = 2, Direction = 3 };

/// K = max(m, k) + 1: every (q, s) within distance 1 of Q x Sigma.
double default_box_radius(const TuringMachine& machine);

/// Interpolates one component of delta over Q x Sigma.
InterpPoly interpolate_transition(const TuringMachine& machine, TableComponent component,
                                  double box_radius);

struct SampledBounds {
  double max_ratio = 0;      // max |L(x) - L(z)| / ||x - z||_inf
  double max_magnitude = 0;  // max |L(x)|
};

/// Random pairs in [-K, K]^d; the ratio must stay below A and the
/// magnitude below B.
SampledBounds lipschitz_check(const InterpPoly& poly, int trials, double box_radius,
                              std::uint64_t seed = 1);

/// |prod x_i - prod y_i| and its bound K^(n-1) sum |x_i - y_i|.
double product_difference(std::span<const double> x, std::span<const double> y);
double product_difference_bound(std::span<const double> x, std::span<const double> y,
                                double bound);

}  // namespace gpac
