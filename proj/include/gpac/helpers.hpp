#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string_view>

namespace gpac {

// Analytic stand-ins for sgn, floor and a square-wave clock. All of them
// are compositions of tanh, exp, sin and polynomials, hence generable by
// polynomial ODEs. Templated on the scalar so the same definitions serve
// double, long double and the compiled-system cross checks.

/// tanh(x*y*lambda): an analytic sign function, sharp once |x| >= 1/lambda.
template <class Scalar>
Scalar xi(Scalar x, Scalar y, Scalar lambda) {
  using std::tanh;
  return tanh(x * y * lambda);
}

/// Analytic approximation of int_1(x) = [x >= 1] for x >= 0.
template <class Scalar>
Scalar sigma1(Scalar x, Scalar y, Scalar lambda) {
  return (Scalar(1) + xi(x - Scalar(1), y, lambda)) / Scalar(2);
}

/// Sum of p shifted sigma1 terms with sharpness y + ln p; approximates
/// int_p(x) = min(p, floor(x)) on x >= 0.
template <class Scalar>
Scalar sigma_p(int p, Scalar x, Scalar y, Scalar lambda) {
  using std::log;
  const Scalar sharp = y + log(Scalar(p));
  Scalar sum = 0;
  for (int i = 0; i < p; ++i) sum += sigma1(x - Scalar(i), sharp, lambda);
  return sum;
}

/// exp(-lambda (1 - sin 2 pi t)^2): 1-periodic bump, equal to 1 at t = 1/4
/// and at most exp(-lambda) on [1/2, 1].
template <class Scalar>
Scalar theta(Scalar t, Scalar lambda) {
  using std::exp;
  using std::sin;
  const Scalar w = Scalar(1) - sin(Scalar(2) * std::numbers::pi_v<Scalar> * t);
  return exp(-lambda * w * w);
}

/// Saturated integer part min(p, floor(x)), clamped at 0 below. This is
/// the sum over i < p of [x - i >= 1], which is what sigma_p tracks.
inline double saturated_floor(int p, double x) {
  const double f = std::floor(x);
  return f < 0 ? 0.0 : (f > p ? double(p) : f);
}

inline double sign_of(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

enum class Helper { Xi, Sigma1, SigmaP, Theta };

Helper parse_helper(std::string_view name);
std::string_view helper_name(Helper h);

struct HelperParams {
  double y = 1;       // sharpness exponent (unused by theta)
  double lambda = 1;  // steepness; for theta the exponent scale
  int p = 1;          // saturation level of sigma_p
};

/// Evaluates the named helper at x (t for theta).
double helper_value(Helper h, const HelperParams& params, double x);

/// The quantity each bound controls: |sgn(x) - xi|, |int_1(x) - sigma1|,
/// |int_p(x) - sigma_p|, and theta itself.
double helper_error(Helper h, const HelperParams& params, double x);

/// Tightest proved bound on helper_error at this input: exp(-y) in the
/// sharp regions, 1/2 (or 1/2 + exp(-y) for sigma_p) elsewhere; for theta,
/// exp(-lambda) on [1/2, 1] mod 1 and 1 otherwise. Throws std::domain_error
/// when the parameters are outside the proved region.
double helper_error_bound(Helper h, const HelperParams& params, double x);

}  // namespace gpac
