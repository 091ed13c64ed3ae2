#include "gpac/corpus.hpp"
#include "gpac/lagrange.hpp"

#include <doctest.h>

#include <random>

using namespace gpac;

namespace {

TuringMachine two_by_two() {
  // k = 3: symbols {0, 1}
  return TuringMachine(2, 3, 0, {1},
                       {{1, 1, Direction::Right}, {0, 0, Direction::Left}, {1, 0, Direction::Left}, {1, 1, Direction::Right}});
}

// max |L(a) - L(b)| / |a - b|_inf and max |L| over random pairs, straight
// from the product formula.
std::pair<double, double> brute_force(const InterpPoly& p, double K, int trials, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-K, K);
  double ratio = 0, mag = 0;
  for (int i = 0; i < trials; ++i) {
    const double a0 = u(rng), a1 = u(rng), b0 = u(rng), b1 = u(rng);
    const double la = p.eval(a0, a1), lb = p.eval(b0, b1);
    const double d = std::max(std::abs(a0 - b0), std::abs(a1 - b1));
    if (d > 0) ratio = std::max(ratio, std::abs(la - lb) / d);
    mag = std::max({mag, std::abs(la), std::abs(lb)});
  }
  return {ratio, mag};
}

}  // namespace

TEST_CASE("interpolants are exact on the grid") {
  for (const auto& w : corpus::all()) {
    const TuringMachine& m = w.machine;
    const double K = default_box_radius(m);
    const InterpPoly L1 = interpolate_transition(m, TableComponent::State, K);
    const InterpPoly L2 = interpolate_transition(m, TableComponent::Symbol, K);
    const InterpPoly L3 = interpolate_transition(m, TableComponent::Direction, K);
    CHECK(L1.delta() == 1);
    for (int q = 0; q < m.states(); ++q)
      for (int s = 0; s < m.symbols(); ++s) {
        const Transition& t = m.delta(q, s);
        CHECK(L1.eval<double>(q, s) == doctest::Approx(t.next_state).epsilon(1e-9));
        CHECK(L2.eval<double>(q, s) == doctest::Approx(t.write).epsilon(1e-9));
        const double d = L3.eval<double>(q, s);
        CHECK(std::abs(d - (t.dir == Direction::Right ? 1.0 : 0.0)) < 1e-9);
      }
  }
}

TEST_CASE("constant and affine tables") {
  InterpPoly c({{0, 1, 2}, {0, 1}}, {4, 4, 4, 4, 4, 4}, 3);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 100; ++i) CHECK(c.eval<double>(u(rng), u(rng)) == doctest::Approx(4.0));
  CHECK(lipschitz_check(c, 1000, 3).max_ratio < 1e-6);  // rounding over close pairs

  // f(q, s) = q + s: the interpolant is that affine function
  InterpPoly lin({{0, 1, 2}, {0, 1, 2}}, {0, 1, 2, 1, 2, 3, 2, 3, 4}, 3);
  CHECK(lin.eval<double>(0.5, 1.5) == doctest::Approx(2.0));
  CHECK(lin.eval<double>(1.5, 1.0) == doctest::Approx((lin.eval<double>(1, 1) + lin.eval<double>(2, 1)) / 2));

  CHECK_THROWS_AS(InterpPoly({{0, 0}, {0}}, {1, 1}, 1), std::invalid_argument);
}

TEST_CASE("sampled Lipschitz ratio and magnitude stay below A and B") {
  const TuringMachine m = two_by_two();
  for (auto comp : {TableComponent::State, TableComponent::Symbol, TableComponent::Direction}) {
    const InterpPoly p = interpolate_transition(m, comp, 1.0);
    const auto [ratio, mag] = brute_force(p, 1.0, 10000, 11);
    CHECK(ratio <= to_double(p.lipschitz()));
    CHECK(mag <= to_double(p.magnitude()));
    const SampledBounds lib = lipschitz_check(p, 10000, 1.0, 12);
    CHECK(lib.max_ratio <= to_double(p.lipschitz()));
    CHECK(lib.max_magnitude <= to_double(p.magnitude()));
  }
  // constants written out for this 2 x 2 grid: |G| = 4, d = 2, delta = 1,
  // M = K + 1 = 2, so A = 4 F 2^5 6 and B = 4 F 2^6
  const InterpPoly p = interpolate_transition(m, TableComponent::State, 1.0);
  CHECK(p.reach() == 2);
  CHECK(p.lipschitz() == 4 * p.max_value() * 32 * 6);
  CHECK(p.magnitude() == 4 * p.max_value() * 64);
}

TEST_CASE("product difference bound") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> len(1, 6);
  for (int i = 0; i < 10000; ++i) {
    const double K = 0.5 + 2.0 * (rng() % 1000) / 1000.0;
    std::uniform_real_distribution<double> u(-K, K);
    const int n = len(rng);
    std::vector<double> x(n), y(n);
    double px = 1, py = 1, sum = 0;
    for (int j = 0; j < n; ++j) {
      x[j] = u(rng);
      y[j] = u(rng);
      px *= x[j];
      py *= y[j];
      sum += std::abs(x[j] - y[j]);
    }
    const double bound = std::pow(K, n - 1) * sum;
    CHECK(std::abs(px - py) <= bound * (1 + 1e-12));
    CHECK(product_difference(x, y) == doctest::Approx(std::abs(px - py)));
    CHECK(product_difference_bound(x, y, K) == doctest::Approx(bound));
  }
}
