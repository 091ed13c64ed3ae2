#pragma once

#include "gpac/integrator.hpp"
#include "gpac/polynomial.hpp"

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace gpac {

/// A symbolic space bound s(t) asserted to dominate ||y(t)||_inf.
struct SpaceBound {
  std::string text;
  std::function<double(double)> at;

  static SpaceBound constant(double c);
};

SpaceBound bound_sum(const SpaceBound& f, const SpaceBound& g);
SpaceBound bound_product(const SpaceBound& f, const SpaceBound& g);
/// max(s_g, s_f o s_g), reading s_f as non-decreasing in |argument|.
SpaceBound bound_compose(const SpaceBound& f, const SpaceBound& g);

/// y' = p(y), y(t0) = y0. The generated functions are the components
/// listed in `outputs` (the first one is "the" output of a scalar system).
/// Initial values are kept in long double: the clock variables of the
/// iteration system start near exp(-B), below double range for large B.
struct PivpSystem {
  std::vector<std::string> names;
  PolyVector rhs;
  double t0 = 0;
  StateVector<long double> y0;
  std::vector<std::size_t> outputs{0};
  SpaceBound bound = SpaceBound::constant(0);

  std::size_t dimension() const { return rhs.size(); }
  std::size_t output() const { return outputs.front(); }
  /// Throws std::invalid_argument when sizes disagree or the polynomials
  /// reference variables outside the state.
  void check() const;
};

/// sin, cos, tanh, exp, identity or constant (value `c`).
PivpSystem pivp_elementary(std::string_view name, double c = 0);

/// f + sign * g, with one extra variable u' = p_1(y) + sign * q_1(z).
PivpSystem pivp_sum(const PivpSystem& f, const PivpSystem& g, int sign = +1);

/// f * g via u' = p_1(y) z_1 + y_1 q_1(z).
PivpSystem pivp_product(const PivpSystem& f, const PivpSystem& g);

/// f o g: the system of g followed by a copy u of f's variables driven by
/// u' = p(u) q_1(z), started at f's state at time g(t0).
PivpSystem pivp_compose(const PivpSystem& f, const PivpSystem& g);

/// f o h where h = p(state of `inner`) is a polynomial in the inner
/// system's variables; h' comes from the chain rule.
PivpSystem pivp_poly_precompose(const PivpSystem& f, const Polynomial& p, const PivpSystem& inner);

/// Same system, outputs replaced by the listed (1-based) components of the
/// current outputs.
PivpSystem pivp_project(const PivpSystem& g, const std::vector<std::size_t>& components);

/// Moves the anchor to t_new by integrating the system there.
PivpSystem rebase(const PivpSystem& sys, double t_new, const IntegratorOptions& opt = {});

/// Full state at time t (forwards or backwards from t0).
StateVector<long double> state_at(const PivpSystem& sys, double t, const IntegratorOptions& opt = {});

/// Integrates from t0 to t1 recording the samples.
template <class Scalar>
Trajectory<Scalar> integrate_system(const PivpSystem& sys, double t1, std::span<const double> samples,
                                    const IntegratorOptions& opt = {}) {
  PolyEvaluator eval(sys.rhs);
  StateVector<Scalar> y0 = sys.y0.template cast<Scalar>();
  return integrate<Scalar>(
      [&](Scalar, const StateVector<Scalar>& y, StateVector<Scalar>& dy) { eval.eval(y, dy); }, y0,
      Scalar(sys.t0), Scalar(t1), samples, opt);
}

/// JSON interchange document: variable names, per-derivative term lists
/// ({"coef": c, "exps": [[var, power], ...]}), coefficients and initial
/// values as decimal strings, output indices and the space-bound
/// expression.
std::string to_json(const PivpSystem& sys, const std::string& extra_json = "{}");
PivpSystem pivp_from_json(std::string_view text);

}  // namespace gpac
