#pragma once

#include "gpac/pivp.hpp"
#include "gpac/step_map.hpp"

#include <cmath>
#include <numbers>

namespace gpac {

/// The Lagrange interpolant expanded into monomials over the given state
/// variables (one per axis). Coefficients are summed exactly and rounded
/// once.
Polynomial lagrange_polynomial(const InterpPoly& poly, const std::vector<std::uint32_t>& vars);

/// The robust step as polynomials over (x, s, y, q, v_x[0..k), v_y[0..k))
/// where v_x[i] = tanh(w_x[i]) and w_x[i] is affine in x (same for y).
/// These are the tanh terms of the two sigma_k blocks.
struct CompiledStep {
  int k = 0;
  double tau = 0, sigma_lambda = 0;
  std::vector<std::string> names;
  PolyVector aux_arguments;  // w for each tanh auxiliary, over (x, s, y, q)
  PolyVector outputs;        // 4 polynomials

  std::size_t component_count() const { return outputs.size() + aux_arguments.size(); }
  std::size_t aux_count() const { return aux_arguments.size(); }

  /// Fills the tanh auxiliaries from c and evaluates the polynomials.
  template <class Scalar>
  RealConfig4<Scalar> eval(const RealConfig4<Scalar>& c) const {
    using std::tanh;
    StateVector<Scalar> state(static_cast<Eigen::Index>(4 + aux_count()));
    state.template head<4>() = c;
    StateVector<Scalar> base = state.head(4);
    for (std::size_t i = 0; i < aux_count(); ++i)
      state[static_cast<Eigen::Index>(4 + i)] = tanh(aux_arguments[i].eval<Scalar>(base));
    RealConfig4<Scalar> out;
    for (int i = 0; i < 4; ++i) out[i] = outputs[static_cast<std::size_t>(i)].eval<Scalar>(state);
    return out;
  }
};

CompiledStep compile_step_robust(const StepModel& model, double tau, double sigma_lambda);

/// Parameters of the two-phase iteration ODE. sigma_lambda is the
/// sharpness inside the robust step; iterate_lambda is the contraction
/// target of each phase.
struct IterateParams {
  double iterate_lambda = 25;
  double mu = 0;
  double tau = 25;
  double sigma_lambda = 16;

  double A() const { return 10 * (iterate_lambda + mu) * (iterate_lambda + mu); }
  double B() const { return 4 * (iterate_lambda + mu); }
};

/// Variable layout of the compiled iteration system. Each tanh term v of
/// the step is carried as the pair p = (1 + v)/2, r = (1 - v)/2 starting
/// at `aux`: near saturation 1 - |v| rounds to zero while p and r keep
/// their relative precision, and a rounded v = +-1 would be a fixed point
/// of v' = (1 - v^2) w'.
struct IterateLayout {
  static constexpr Eigen::Index time = 0, sin = 1, cos = 2, theta_z = 3, theta_u = 4;
  static constexpr Eigen::Index z = 5, u = 9, aux = 13;
};

struct CompiledIterate {
  PivpSystem system;
  CompiledStep step;
  IterateParams params;

  std::size_t dimension() const { return system.dimension(); }

  /// Embeds (t, z, u) into the full state: clock, theta and tanh
  /// variables take their exact values.
  template <class Scalar>
  StateVector<Scalar> lift(Scalar t, const RealConfig4<Scalar>& z, const RealConfig4<Scalar>& u) const {
    using std::cos;
    using std::exp;
    using std::sin;
    using L = IterateLayout;
    const Scalar two_pi = 2 * std::numbers::pi_v<Scalar>;
    const Scalar B = Scalar(params.B());
    StateVector<Scalar> y(static_cast<Eigen::Index>(dimension()));
    const Scalar S = sin(two_pi * t);
    y[L::time] = t;
    y[L::sin] = S;
    y[L::cos] = cos(two_pi * t);
    y[L::theta_z] = exp(-B * (1 - S) * (1 - S));
    y[L::theta_u] = exp(-B * (1 + S) * (1 + S));
    y.template segment<4>(L::z) = z;
    y.template segment<4>(L::u) = u;
    StateVector<Scalar> base = u;
    for (std::size_t i = 0; i < step.aux_count(); ++i) {
      const Scalar w = step.aux_arguments[i].eval<Scalar>(base);
      const Eigen::Index a = L::aux + 2 * static_cast<Eigen::Index>(i);
      y[a] = 1 / (1 + exp(-2 * w));  // (1 + tanh w) / 2
      y[a + 1] = 1 / (1 + exp(2 * w));
    }
    return y;
  }
};

/// One autonomous polynomial system for the iteration ODE applied to the
/// robust step, started at u = z = [start].
CompiledIterate compile_iterate(const StepModel& model, const IterateParams& params, const RationalConfig& start);

/// Right-hand side of the iteration ODE with elementary functions
/// evaluated directly; state is (z, u).
template <class Scalar>
void direct_iterate_rhs(const StepModel& model, const IterateParams& params, Scalar t,
                        const Eigen::Matrix<Scalar, 8, 1>& zu, Eigen::Matrix<Scalar, 8, 1>& out) {
  const Scalar A = Scalar(params.A()), B = Scalar(params.B());
  const RealConfig4<Scalar> z = zu.template head<4>();
  const RealConfig4<Scalar> u = zu.template tail<4>();
  const RealConfig4<Scalar> F = step_robust<Scalar>(u, Scalar(params.tau), Scalar(params.sigma_lambda), model);
  out.template head<4>() = A * theta<Scalar>(t, B) * (F - z);
  out.template tail<4>() = A * theta<Scalar>(t - Scalar(0.5), B) * (z - u);
}

}  // namespace gpac
