#include "gpac/helpers.hpp"

#include <string>

namespace gpac {

Helper parse_helper(std::string_view name) {
  if (name == "xi") return Helper::Xi;
  if (name == "sigma1") return Helper::Sigma1;
  if (name == "sigma_p" || name == "sigmap") return Helper::SigmaP;
  if (name == "theta") return Helper::Theta;
  throw std::invalid_argument("unknown helper '" + std::string(name) + "'");
}

std::string_view helper_name(Helper h) {
  switch (h) {
    case Helper::Xi: return "xi";
    case Helper::Sigma1: return "sigma1";
    case Helper::SigmaP: return "sigma_p";
    case Helper::Theta: return "theta";
  }
  return "?";
}

double helper_value(Helper h, const HelperParams& params, double x) {
  switch (h) {
    case Helper::Xi: return xi(x, params.y, params.lambda);
    case Helper::Sigma1: return sigma1(x, params.y, params.lambda);
    case Helper::SigmaP: return sigma_p(params.p, x, params.y, params.lambda);
    case Helper::Theta: return theta(x, params.lambda);
  }
  return 0;
}

double helper_error(Helper h, const HelperParams& params, double x) {
  const double v = helper_value(h, params, x);
  switch (h) {
    case Helper::Xi: return std::abs(sign_of(x) - v);
    case Helper::Sigma1: return std::abs(saturated_floor(1, x) - v);
    case Helper::SigmaP: return std::abs(saturated_floor(params.p, x) - v);
    case Helper::Theta: return std::abs(v);
  }
  return 0;
}

double helper_error_bound(Helper h, const HelperParams& params, double x) {
  const double y = params.y;
  const double lambda = params.lambda;
  const double sharp = std::exp(-y);
  switch (h) {
    case Helper::Xi:
      if (!(lambda > 0) || !(y >= 1)) throw std::domain_error("xi bound needs lambda > 0, y >= 1");
      if (std::abs(x) >= 1 / lambda) return sharp;
      // tanh(x y lambda) is near 0 for small nonzero x, so only the trivial
      // bound holds there; at x = 0 both sides vanish.
      return x == 0 ? 0.5 : 1.0;
    case Helper::Sigma1:
      if (!(lambda > 2) || !(y > 0)) throw std::domain_error("sigma1 bound needs lambda > 2, y > 0");
      return std::abs(1 - x) >= 1 / lambda ? sharp : 0.5;
    case Helper::SigmaP: {
      if (params.p < 1) throw std::domain_error("sigma_p needs p >= 1");
      if (!(lambda > 2) || !(y > 0)) throw std::domain_error("sigma_p bound needs lambda > 2, y > 0");
      // Distance to the nearest natural number; negatives are nearest to 0.
      const double dist = x < 0 ? -x : std::abs(x - std::round(x));
      const bool clear = x < 1 - 1 / lambda || x > params.p + 1 / lambda || dist > 1 / lambda;
      return clear ? sharp : 0.5 + sharp;
    }
    case Helper::Theta: {
      if (!(lambda > 0)) throw std::domain_error("theta needs lambda > 0");
      const double phase = x - std::floor(x);
      return (phase >= 0.5 || phase == 0.0) ? std::exp(-lambda) : 1.0;
    }
  }
  return 0;
}

}  // namespace gpac
