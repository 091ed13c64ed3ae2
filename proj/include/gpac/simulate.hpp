#pragma once

#include "gpac/compile.hpp"
#include "gpac/integrator.hpp"
#include "gpac/step_map.hpp"
#include "gpac/turing.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gpac {

// Reach: x' = A phi(t) (g - x).

/// g + (x0 - g) exp(-A * phi_integral)
double reach_closed_form(double A, double phi_integral, double g, double x0);

struct ReachRun {
  double x_T = 0;
  double closed_form = 0;
  long steps = 0;
};

/// Integrates the reach equation on [0, T]; Phi is the antiderivative of
/// phi with Phi(0) = 0, used for the closed form.
ReachRun reach_solve(double A, const std::function<double(double)>& phi, const std::function<double(double)>& Phi,
                     double g, double x0, double T, const IntegratorOptions& opt = {});

struct PerturbedVerdict {
  double A = 0;
  double x_T = 0;
  double deviation = 0;  // |x(T) - g|
  double bound = 0;      // eta (1 + e^-lambda) + |x0 - g| e^-lambda
  bool bound_ok = false;
  double sandwich_violation = 0;  // max over samples of how far x leaves [x-, x+]
  bool sandwich_ok = false;
};

/// x' = A phi(t) (gbar(t) - x) with A = lambda / Phi(T). Throws
/// std::invalid_argument if |gbar - g| > eta somewhere on a sampling grid.
PerturbedVerdict reach_perturbed_check(double eta, double lambda, double x0, double g,
                                       const std::function<double(double)>& gbar,
                                       const std::function<double(double)>& phi,
                                       const std::function<double(double)>& Phi, double T,
                                       const IntegratorOptions& opt = {}, double slack = 1e-8);

// Iteration of the robust step.

enum class Backend { Direct, Compiled };

Backend parse_backend(std::string_view name);
std::string_view backend_name(Backend b);

/// Fills the defaults: mu = ln(K2 + 1), tau = iterate_lambda,
/// sigma_lambda = 4k. NaN marks a field as unset.
IterateParams resolve_params(const StepModel& model, const StepConstants& constants, double iterate_lambda,
                             double mu = std::numeric_limits<double>::quiet_NaN(),
                             double tau = std::numeric_limits<double>::quiet_NaN(),
                             double sigma_lambda = std::numeric_limits<double>::quiet_NaN());

/// lambda >= 1, mu >= 0, A >= (lambda + mu) pi (eB)^(1/4) and
/// A e^mu e^-B <= e^-lambda. Throws std::invalid_argument otherwise.
void check_iterate_params(const IterateParams& params);

struct SimulationConfig {
  int horizon = 8;
  IterateParams params;
  Backend backend = Backend::Direct;
  IntegratorOptions integrator;
  int samples_per_unit = 32;
  /// Max step as a fraction of 1/B.
  double direct_step_fraction = 0.25;
  double compiled_step_fraction = 0.25;
  /// Relative accuracy kept by the compiled clock and tanh variables while
  /// they are below the absolute tolerance.
  double small_value_rtol = 1e-5;
};

struct SimulationResult {
  Backend backend = Backend::Direct;
  IterateParams params;
  int horizon = 0;
  std::vector<double> times;                     // sample times
  std::vector<Eigen::Matrix<double, 8, 1>> zu;   // (z, u) at each sample
  std::vector<RealConfig4<double>> u_integer;    // u(n), n = 0..horizon
  double zu_sup_norm = 0;     // max ||z||, ||u|| over accepted steps and samples
  double state_sup_norm = 0;  // every variable except the clock t
  double space_bound = 0;     // e^mu
  std::vector<double> frozen_drift;  // max |u(t) - u(n)| on [n, n + 1/2]
  long steps = 0, rejected = 0, rhs_evaluations = 0;
  double seconds = 0;
  std::size_t dimension = 0;
};

/// Integrates the iteration system from u(0) = z(0) = [start] up to
/// `horizon`. Throws IntegrationError on solver failure; the space bound
/// is recorded, not enforced.
SimulationResult simulate_machine(const StepModel& model, const RationalConfig& start, const SimulationConfig& cfg);

class DecodeAmbiguity : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rounds s and q, then reads tape digits with d = floor(k x + 1/(2k)).
/// Throws DecodeAmbiguity when a component is farther than eps from every
/// admissible value or the tape cannot be resolved at this precision.
Configuration decode_real(const RealConfig4<double>& c, const TuringMachine& machine, double eps,
                          int max_digits = 64);

struct StepVerdict {
  int n = 0;
  bool decoded = false;
  std::string error;  // ambiguity message when !decoded
  Configuration config;
  bool matches_oracle = false;
  double max_error = 0;  // ||u(n) - [c_n]||_inf
  double budget = std::numeric_limits<double>::infinity();
  bool within_budget = true;
};

/// `budget` holds eps_n (may be empty); errors are compared with `slack`
/// added.
std::vector<StepVerdict> decode_trajectory(const SimulationResult& result, const TuringMachine& machine,
                                           const std::vector<Configuration>& oracle, double eps,
                                           const std::vector<double>& budget = {}, double slack = 0);

}  // namespace gpac
