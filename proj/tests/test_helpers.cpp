#include "gpac/helpers.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <doctest.h>

#include <random>

using namespace gpac;

TEST_CASE("xi") {
  CHECK(xi(0.0, 5.0, 3.0) == 0.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5, 5), yl(1, 20), ll(0.1, 10);
  for (int i = 0; i < 2000; ++i) {
    const double x = u(rng), y = yl(rng), lambda = ll(rng);
    CHECK(xi(-x, y, lambda) == doctest::Approx(-xi(x, y, lambda)).epsilon(1e-15));
    const double err = std::abs(sign_of(x) - xi(x, y, lambda));
    CHECK(err < 1);
    if (std::abs(x) >= 1 / lambda) CHECK(err < std::exp(-y) + 1e-12);
  }
}

TEST_CASE("xi is not within 1/2 of sgn just off zero") {
  // x = 0.01, y = lambda = 1: tanh(0.01) ~ 0.01
  CHECK(std::abs(sign_of(0.01) - xi(0.01, 1.0, 1.0)) > 0.98);
  CHECK(helper_error_bound(Helper::Xi, {1, 1, 1}, 0.01) == 1.0);
}

TEST_CASE("sigma1") {
  CHECK(sigma1(1.0, 7.0, 3.0) == 0.5);
  const double v = sigma1(2.0, 10.0, 4.0);
  CHECK(v <= 1.0);  // tanh saturates in double
  CHECK(v > 1 - std::exp(-10.0));
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 4), yl(0.1, 20), ll(2.01, 20);
  for (int i = 0; i < 2000; ++i) {
    const double x = u(rng), y = yl(rng), lambda = ll(rng);
    const double int1 = x >= 1 ? 1.0 : 0.0;
    if (std::abs(1 - x) >= 1 / lambda) CHECK(std::abs(int1 - sigma1(x, y, lambda)) < std::exp(-y) + 1e-12);
  }
}

TEST_CASE("sigma_p") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 200; ++i) {
    const double x = u(rng);
    CHECK(sigma_p(1, x, 4.0, 5.0) == doctest::Approx(sigma1(x, 4.0, 5.0)).epsilon(1e-15));
  }
  CHECK(std::abs(3 - sigma_p(5, 3.5, 8.0, 10.0)) < std::exp(-8.0));

  // min(p, floor(x)) clamped at 0, written out independently
  auto int_p = [](int p, double x) { return std::max(0.0, std::min(double(p), std::floor(x))); };
  for (int p : {1, 3, 6}) {
    double prev = -1;
    for (int i = 0; i <= 4000; ++i) {
      const double x = -1 + (p + 3) * i / 4000.0;
      const double v = sigma_p(p, x, 3.0, 12.0);
      CHECK(std::abs(int_p(p, x) - v) <= 0.5 + std::exp(-3.0) + 1e-12);
      CHECK(v >= prev - 1e-15);  // monotone
      prev = v;
    }
  }
}

TEST_CASE("theta") {
  CHECK(theta(0.25, 3.0) == doctest::Approx(1.0));
  CHECK(theta(0.25, 100.0) == doctest::Approx(1.0));
  CHECK(theta(0.75, 2.0) == doctest::Approx(std::exp(-8.0)).epsilon(1e-12));
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-10, 10), half(0.5, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double t = u(rng);
    CHECK(theta(t + 1, 7.0) == doctest::Approx(theta(t, 7.0)).epsilon(1e-9));
    CHECK(theta(half(rng), 7.0) <= std::exp(-7.0) * (1 + 1e-12));
  }
  using boost::math::quadrature::gauss_kronrod;
  for (double lambda : {1.0, 4.0, 10.0, 25.0}) {
    double error = 0;
    const double integral =
        gauss_kronrod<double, 61>::integrate([&](double t) { return theta(t, lambda); }, 0.0, 0.5, 15, 1e-12, &error);
    CHECK(error < 1e-6);
    CHECK(integral >= std::pow(std::numbers::e * lambda, -0.25) / std::numbers::pi);
  }
  const double i10 =
      gauss_kronrod<double, 61>::integrate([](double t) { return theta(t, 10.0); }, 0.0, 0.5, 15, 1e-12);
  CHECK(i10 >= 0.1392);
}

TEST_CASE("error bound regions") {
  CHECK(helper_error_bound(Helper::Xi, {3, 2, 1}, 1.0) == doctest::Approx(std::exp(-3.0)));
  CHECK(helper_error_bound(Helper::SigmaP, {2, 10, 4}, 2.0) == doctest::Approx(0.5 + std::exp(-2.0)));
  CHECK(helper_error_bound(Helper::Xi, {1, 1, 1}, 0.0) == 0.5);
  CHECK_THROWS_AS(helper_error_bound(Helper::Sigma1, {1, 2, 1}, 0.0), std::domain_error);
  CHECK(parse_helper("sigma_p") == Helper::SigmaP);
  CHECK_THROWS(parse_helper("nope"));
  // measured errors stay below the bound along a sweep
  for (Helper h : {Helper::Xi, Helper::Sigma1, Helper::SigmaP, Helper::Theta}) {
    const HelperParams hp{2.5, 6.0, 3};
    for (int i = 0; i <= 2000; ++i) {
      const double x = -2 + 7.0 * i / 2000;
      CHECK(helper_error(h, hp, x) <= helper_error_bound(h, hp, x) + 1e-12);
    }
  }
}
