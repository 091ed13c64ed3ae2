#pragma once

#include "gpac/helpers.hpp"
#include "gpac/lagrange.hpp"
#include "gpac/rational.hpp"
#include "gpac/turing.hpp"

#include <Eigen/Core>

#include <array>

namespace gpac {

/// A point of R^4 laid out as (x, s, y, q), possibly off the encoded grid.
template <class Scalar>
using RealConfig4 = Eigen::Matrix<Scalar, 4, 1>;

/// The machine together with the interpolants of its transition table.
struct StepModel {
  TuringMachine machine;
  double box_radius;
  InterpPoly next_state;  // L_{delta_1}
  InterpPoly write;       // L_{delta_2}
  InterpPoly move;        // L_{delta_3}, 0 = left, 1 = right

  explicit StepModel(const TuringMachine& m);
  StepModel(const TuringMachine& m, double radius);
};

/// (1 - L3(q, s)) a + L3(q, s) b.
template <class Scalar>
Scalar choose(Scalar a, Scalar b, Scalar q, Scalar s, const InterpPoly& move) {
  const Scalar w = move.eval(q, s);
  return (Scalar(1) - w) * a + w * b;
}

/// The real step map with a pluggable integer-part function: exact floor
/// gives step_M on encoded configurations, the sigma_k approximation gives
/// the robust analytic version.
template <class Scalar, class IntPart>
std::array<Scalar, 4> step_formula(const StepModel& model, const std::array<Scalar, 4>& c,
                                   IntPart&& int_part) {
  const Scalar k = Scalar(model.machine.base());
  const Scalar& x = c[0];
  const Scalar& s = c[1];
  const Scalar& y = c[2];
  const Scalar& q = c[3];
  const Scalar next_state = model.next_state.eval(q, s);
  const Scalar written = model.write.eval(q, s);
  const Scalar w = model.move.eval(q, s);
  auto pick = [&](const Scalar& left, const Scalar& right) {
    return (Scalar(1) - w) * left + w * right;
  };
  const Scalar kx = k * x;
  const Scalar ky = k * y;
  const Scalar int_x = int_part(kx);
  const Scalar int_y = int_part(ky);
  return {pick(kx - int_x, (x + written) / k),
          pick(int_x, int_y),
          pick((y + written) / k, ky - int_y),
          next_state};
}

/// sigma_k(v + 1/(2k), tau, lambda): the shift centres integers in the
/// gap that encoded tapes never reach.
template <class Scalar>
Scalar robust_int(Scalar v, int k, Scalar tau, Scalar lambda) {
  return sigma_p(k, v + Scalar(1) / Scalar(2 * k), tau, lambda);
}

/// Exact step on rational encodings. Throws EncodingError if rc is not a
/// valid encoded configuration.
RationalConfig step_exact_real(const RationalConfig& rc, const StepModel& model);

/// The robust step map; total on R^4.
template <class Scalar>
RealConfig4<Scalar> step_robust(const RealConfig4<Scalar>& c, Scalar tau, Scalar sigma_lambda,
                                const StepModel& model) {
  const int k = model.machine.base();
  const auto out = step_formula<Scalar>(model, {c[0], c[1], c[2], c[3]}, [&](const Scalar& v) {
    return robust_int(v, k, tau, sigma_lambda);
  });
  return RealConfig4<Scalar>(out[0], out[1], out[2], out[3]);
}

RealConfig4<double> to_real(const RationalConfig& rc);

/// Constants behind the robust-step error bound. A_i, B_i come from the
/// interpolants of delta_i on the box of radius K; K1 is the largest of
/// the per-component perturbation constants, K2 bounds the robust step on
/// [-1,1] x [-m,m] x [-1,1] x [-k,k], and K3 = 4 K1.
struct StepConstants {
  Rational delta, box_radius;
  Rational A1, A2, A3;
  Rational B1, B2, B3;
  Rational K1, K2, K3;
};

StepConstants machine_constants(const StepModel& model);

/// K1 (e^-tau + distance), the perturbation bound of the robust step.
double robust_step_bound(const StepConstants& constants, double tau, double distance);

}  // namespace gpac
