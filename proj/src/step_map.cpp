#include "gpac/step_map.hpp"

#include <algorithm>

namespace gpac {

StepModel::StepModel(const TuringMachine& m) : StepModel(m, default_box_radius(m)) {}

StepModel::StepModel(const TuringMachine& m, double radius)
    : machine(m),
      box_radius(radius),
      next_state(interpolate_transition(m, TableComponent::State, radius)),
      write(interpolate_transition(m, TableComponent::Symbol, radius)),
      move(interpolate_transition(m, TableComponent::Direction, radius)) {}

RationalConfig step_exact_real(const RationalConfig& rc, const StepModel& model) {
  const TuringMachine& machine = model.machine;
  const Rational bound = Rational(machine.base() - 1, machine.base());
  if (rc.x < 0 || rc.x > bound || rc.y < 0 || rc.y > bound)
    throw EncodingError("tape value outside [0, (k-1)/k]");
  if (rc.s < 0 || rc.s >= machine.symbols() || rc.q < 0 || rc.q >= machine.states())
    throw EncodingError("symbol or state outside the machine's ranges");

  const auto out = step_formula<Rational>(
      model, {rc.x, Rational(rc.s), rc.y, Rational(rc.q)},
      [](const Rational& v) { return Rational(floor_of(v)); });
  // On grid points the interpolants reproduce the table, so s and q stay
  // integral.
  if (denominator(out[1]) != 1 || denominator(out[3]) != 1)
    throw EncodingError("non-integral symbol or state after step");
  return {out[0], static_cast<int>(numerator(out[1])), out[2],
          static_cast<int>(numerator(out[3]))};
}

RealConfig4<double> to_real(const RationalConfig& rc) {
  return {to_double(rc.x), double(rc.s), to_double(rc.y), double(rc.q)};
}

StepConstants machine_constants(const StepModel& model) {
  StepConstants c;
  const Rational k = model.machine.base();
  c.delta = model.next_state.delta();
  c.box_radius = Rational(model.box_radius);
  c.A1 = model.next_state.lipschitz();
  c.A2 = model.write.lipschitz();
  c.A3 = model.move.lipschitz();
  c.B1 = model.next_state.magnitude();
  c.B2 = model.write.magnitude();
  c.B3 = model.move.magnitude();
  const Rational tape_components = k + (1 + 2 * c.A3) * (1 + c.A2 / k);
  const Rational symbol_component = 2 * c.A3 * k + 1;
  c.K1 = std::max({tape_components, symbol_component, c.A1});
  c.K2 = c.B1 + (1 + c.B3) * (2 * k + 1 + c.B2 / k);
  c.K3 = 4 * c.K1;
  return c;
}

double robust_step_bound(const StepConstants& constants, double tau, double distance) {
  return to_double(constants.K1) * (std::exp(-tau) + distance);
}

}  // namespace gpac
