#include "gpac/budget.hpp"

#include <stdexcept>

namespace gpac {

namespace {

WideReal additive_term(const WideReal& K1, const WideReal& lambda, const WideReal& tau) {
  const WideReal el = exp(-lambda);
  return (1 + 3 * el) * K1 * (exp(-tau) + 2 * el) + 5 * el;
}

}  // namespace

std::vector<WideReal> epsilon_sequence(const WideReal& K1, const WideReal& lambda, const WideReal& tau,
                                       const WideReal& eps0, int n) {
  if (n < 0) throw std::invalid_argument("negative horizon");
  const WideReal el = exp(-lambda);
  const WideReal et = exp(-tau);
  std::vector<WideReal> eps{eps0};
  eps.reserve(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i < n; ++i) eps.push_back((1 + 3 * el) * K1 * (et + eps.back() + 2 * el) + 5 * el);
  return eps;
}

WideReal linear_recurrence_bound(const WideReal& a, const WideReal& b, const WideReal& u0, int n) {
  const WideReal an = pow(a, n);
  if (a == 1) return u0 + b * n;
  return an * u0 + b * (an - 1) / (a - 1);
}

WideReal epsilon_closed_form(const WideReal& K1, const WideReal& lambda, const WideReal& tau,
                             const WideReal& eps0, int n) {
  const WideReal a = K1 * (1 + 3 * exp(-lambda));
  return linear_recurrence_bound(a, additive_term(K1, lambda, tau), eps0, n);
}

ErrorBudget error_budget(const StepConstants& constants, double S, int T) {
  if (!(S > 0) || T <= 0) throw std::invalid_argument("S and T must be positive");
  ErrorBudget b;
  b.S = S;
  b.T = T;
  b.K1 = to_wide(constants.K1);
  b.K3 = to_wide(constants.K3);
  b.lambda = WideReal(S) + WideReal(T) * log(b.K3) + log(8 * b.K1 + 5);
  b.tau = b.lambda;
  b.eps = epsilon_sequence(b.K1, b.lambda, b.tau, WideReal(0), T);
  const WideReal a = b.K1 * (1 + 3 * exp(-b.lambda));
  b.closed_form_bound = linear_recurrence_bound(a, (8 * b.K1 + 5) * exp(-b.lambda), WideReal(0), T);
  return b;
}

}  // namespace gpac
