#include "gpac/lagrange.hpp"

#include <algorithm>
#include <random>

namespace gpac {

InterpPoly::InterpPoly(std::vector<std::vector<double>> axes, std::vector<double> values,
                       double box_radius)
    : axes_(std::move(axes)), values_(std::move(values)), box_radius_(box_radius) {
  if (axes_.empty()) throw std::invalid_argument("interpolant needs at least one axis");
  if (!(box_radius_ > 0)) throw std::invalid_argument("box radius K must be positive");
  std::size_t count = 1;
  for (const auto& nodes : axes_) {
    if (nodes.empty()) throw std::invalid_argument("empty interpolation axis");
    count *= nodes.size();
  }
  if (count != values_.size()) throw std::invalid_argument("value count does not match grid");

  // delta: smallest per-coordinate separation between distinct nodes.
  bool any_pair = false;
  Rational delta = 0;
  Rational largest_node = 0;
  for (const auto& nodes : axes_) {
    for (std::size_t a = 0; a < nodes.size(); ++a) {
      largest_node = std::max(largest_node, Rational(std::abs(nodes[a])));
      for (std::size_t b = a + 1; b < nodes.size(); ++b) {
        const Rational gap = abs(Rational(nodes[a]) - Rational(nodes[b]));
        if (gap == 0) throw std::invalid_argument("duplicate grid coordinate (delta = 0)");
        if (!any_pair || gap < delta) delta = gap;
        any_pair = true;
      }
    }
  }
  delta_ = any_pair ? delta : Rational(1);

  max_value_ = 0;
  for (double v : values_) max_value_ = std::max(max_value_, Rational(std::abs(v)));
  reach_ = Rational(box_radius_) + largest_node;

  const Rational g = Rational(static_cast<long long>(values_.size()));
  const unsigned n = static_cast<unsigned>(dimension()) * static_cast<unsigned>(values_.size() - 1);
  const Rational ratio = reach_ / delta_;
  magnitude_ = g * max_value_ * pow_of(ratio, n);
  if (n == 0) {
    lipschitz_ = 0;
  } else {
    // The last factor restores the 1/delta that the closed form drops;
    // it is 1 on unit-spaced grids.
    const Rational inv_delta = delta_ < 1 ? Rational(1) / delta_ : Rational(1);
    lipschitz_ = g * max_value_ * pow_of(ratio, n - 1) * Rational(n) * inv_delta;
  }
}

std::vector<Rational> InterpPoly::basis_coefficients(int axis, int node) const {
  const auto& nodes = axes_.at(static_cast<std::size_t>(axis));
  const Rational pivot = nodes.at(static_cast<std::size_t>(node));
  std::vector<Rational> coeffs{1};
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    if (static_cast<int>(n) == node) continue;
    const Rational a = nodes[n];
    const Rational scale = Rational(1) / (pivot - a);
    // multiply by (X - a) * scale
    std::vector<Rational> next(coeffs.size() + 1, Rational(0));
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      next[i + 1] += coeffs[i] * scale;
      next[i] -= coeffs[i] * a * scale;
    }
    coeffs = std::move(next);
  }
  return coeffs;
}

double default_box_radius(const TuringMachine& machine) {
  return static_cast<double>(std::max(machine.states(), machine.base()) + 1);
}

InterpPoly interpolate_transition(const TuringMachine& machine, TableComponent component,
                                  double box_radius) {
  std::vector<double> states(static_cast<std::size_t>(machine.states()));
  std::vector<double> symbols(static_cast<std::size_t>(machine.symbols()));
  for (std::size_t q = 0; q < states.size(); ++q) states[q] = static_cast<double>(q);
  for (std::size_t s = 0; s < symbols.size(); ++s) symbols[s] = static_cast<double>(s);
  std::vector<double> values;
  values.reserve(states.size() * symbols.size());
  for (int q = 0; q < machine.states(); ++q) {
    for (int s = 0; s < machine.symbols(); ++s) {
      const Transition& t = machine.delta(q, s);
      switch (component) {
        case TableComponent::State: values.push_back(t.next_state); break;
        case TableComponent::Symbol: values.push_back(t.write); break;
        case TableComponent::Direction: values.push_back(static_cast<int>(t.dir)); break;
      }
    }
  }
  return InterpPoly({states, symbols}, std::move(values), box_radius);
}

SampledBounds lipschitz_check(const InterpPoly& poly, int trials, double box_radius,
                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> box(-box_radius, box_radius);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto d = static_cast<std::size_t>(poly.dimension());
  std::vector<double> x(d), z(d);
  SampledBounds out;
  for (int t = 0; t < trials; ++t) {
    for (std::size_t i = 0; i < d; ++i) x[i] = box(rng);
    // Mix far pairs with near pairs so both regimes of the ratio show up.
    const double radius = box_radius * std::pow(10.0, -6.0 * unit(rng));
    double gap = 0;
    for (std::size_t i = 0; i < d; ++i) {
      z[i] = std::clamp(x[i] + radius * (2 * unit(rng) - 1), -box_radius, box_radius);
      gap = std::max(gap, std::abs(x[i] - z[i]));
    }
    const double lx = poly.eval<double>(x);
    const double lz = poly.eval<double>(z);
    out.max_magnitude = std::max({out.max_magnitude, std::abs(lx), std::abs(lz)});
    if (gap > 0) out.max_ratio = std::max(out.max_ratio, std::abs(lx - lz) / gap);
  }
  return out;
}

double product_difference(std::span<const double> x, std::span<const double> y) {
  double px = 1, py = 1;
  for (double v : x) px *= v;
  for (double v : y) py *= v;
  return std::abs(px - py);
}

double product_difference_bound(std::span<const double> x, std::span<const double> y,
                                double bound) {
  double sum = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += std::abs(x[i] - y[i]);
  return std::pow(bound, static_cast<double>(x.size()) - 1) * sum;
}

}  // namespace gpac
