#pragma once

#include "gpac/rational.hpp"
#include "gpac/step_map.hpp"

#include <vector>

namespace gpac {

/// eps_{n+1} = (1 + 3e^-lambda) K1 (e^-tau + eps_n + 2e^-lambda) + 5e^-lambda
std::vector<WideReal> epsilon_sequence(const WideReal& K1, const WideReal& lambda, const WideReal& tau,
                                       const WideReal& eps0, int n);

/// The same recurrence solved in closed form, a^n eps0 + b (a^n - 1)/(a - 1)
/// with a = K1 (1 + 3e^-lambda) and b its exact additive term.
WideReal epsilon_closed_form(const WideReal& K1, const WideReal& lambda, const WideReal& tau,
                             const WideReal& eps0, int n);

/// a^n u0 + b (a^n - 1)/(a - 1), the generic bound for u_{n+1} <= a u_n + b.
WideReal linear_recurrence_bound(const WideReal& a, const WideReal& b, const WideReal& u0, int n);

struct ErrorBudget {
  double S = 0;
  int T = 0;
  WideReal K1, K3;
  WideReal lambda;  // S + T ln K3 + ln(8 K1 + 5)
  WideReal tau;     // = lambda
  std::vector<WideReal> eps;
  /// b(a^T - 1)/(a - 1) with a = K1(1 + 3e^-lambda), b = (8K1 + 5)e^-lambda
  WideReal closed_form_bound;
};

ErrorBudget error_budget(const StepConstants& constants, double S, int T);

}  // namespace gpac
