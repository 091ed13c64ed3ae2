#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gpac {

template <class Scalar>
using StateVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

class IntegrationError : public std::runtime_error {
 public:
  enum class Kind { StepUnderflow, NonFinite, StepLimit };
  IntegrationError(Kind kind, const std::string& what, double time)
      : std::runtime_error(what), kind_(kind), time_(time) {}
  Kind kind() const { return kind_; }
  double time() const { return time_; }

 private:
  Kind kind_;
  double time_;
};

struct IntegratorOptions {
  double rtol = 1e-10;
  double atol = 1e-10;
  /// Per-component absolute tolerance; overrides `atol` when non-empty.
  std::vector<double> component_atol;
  /// Per-component cap on the absolute part relative to |y|: the error
  /// scale becomes rtol |y| + min(atol_i, floor_i |y|). Keeps components
  /// that sit far below atol from losing their sign. Empty means no cap.
  std::vector<double> component_floor_rtol;
  double max_step = std::numeric_limits<double>::infinity();
  double initial_step = 0;  // 0 picks one from the initial slope
  long max_steps = 200'000'000;
};

template <class Scalar>
struct Trajectory {
  std::vector<double> times;
  std::vector<StateVector<Scalar>> states;
  double sup_norm = 0;  // max ||y||_inf over accepted step endpoints and samples
  long accepted = 0;
  long rejected = 0;
  long rhs_evaluations = 0;
  StateVector<Scalar> final_state;

  /// Sample recorded at exactly time t; throws std::out_of_range if absent.
  const StateVector<Scalar>& at(double t) const {
    auto it = std::lower_bound(times.begin(), times.end(), t);
    if (it == times.end() || *it != t) throw std::out_of_range("no sample at t = " + std::to_string(t));
    return states[static_cast<std::size_t>(it - times.begin())];
  }
};

struct NoStepObserver {
  template <class Scalar>
  void operator()(Scalar, const StateVector<Scalar>&) const {}
};

/// Adaptive Dormand-Prince 5(4) with the 4th-order continuous extension
/// for output at `sample_times` (which must lie between t0 and t1, sorted
/// in the direction of integration). Integrates backwards when t1 < t0.
/// `rhs(t, y, dy)` fills dy; `on_step(t, y)` sees every accepted step.
template <class Scalar, class Rhs, class StepObserver = NoStepObserver>
Trajectory<Scalar> integrate(Rhs&& rhs, const StateVector<Scalar>& y0, Scalar t0, Scalar t1,
                             std::span<const double> sample_times, const IntegratorOptions& opt,
                             StepObserver&& on_step = {}) {
  using V = StateVector<Scalar>;
  using std::abs;
  using std::max;
  using std::min;
  using std::pow;
  using std::sqrt;

  // Dormand-Prince tableau.
  const Scalar c2 = Scalar(1) / 5, c3 = Scalar(3) / 10, c4 = Scalar(4) / 5, c5 = Scalar(8) / 9;
  const Scalar a21 = Scalar(1) / 5;
  const Scalar a31 = Scalar(3) / 40, a32 = Scalar(9) / 40;
  const Scalar a41 = Scalar(44) / 45, a42 = Scalar(-56) / 15, a43 = Scalar(32) / 9;
  const Scalar a51 = Scalar(19372) / 6561, a52 = Scalar(-25360) / 2187,
               a53 = Scalar(64448) / 6561, a54 = Scalar(-212) / 729;
  const Scalar a61 = Scalar(9017) / 3168, a62 = Scalar(-355) / 33, a63 = Scalar(46732) / 5247,
               a64 = Scalar(49) / 176, a65 = Scalar(-5103) / 18656;
  const Scalar a71 = Scalar(35) / 384, a73 = Scalar(500) / 1113, a74 = Scalar(125) / 192,
               a75 = Scalar(-2187) / 6784, a76 = Scalar(11) / 84;
  const Scalar e1 = Scalar(71) / 57600, e3 = Scalar(-71) / 16695, e4 = Scalar(71) / 1920,
               e5 = Scalar(-17253) / 339200, e6 = Scalar(22) / 525, e7 = Scalar(-1) / 40;
  const Scalar d1 = Scalar(-12715105075.0L) / Scalar(11282082432.0L),
               d3 = Scalar(87487479700.0L) / Scalar(32700410799.0L),
               d4 = Scalar(-10690763975.0L) / Scalar(1880347072.0L),
               d5 = Scalar(701980252875.0L) / Scalar(199316789632.0L),
               d6 = Scalar(-1453857185.0L) / Scalar(822651844.0L),
               d7 = Scalar(69997945.0L) / Scalar(29380423.0L);

  const Eigen::Index n = y0.size();
  const Scalar direction = t1 >= t0 ? Scalar(1) : Scalar(-1);
  const Scalar rtol = Scalar(opt.rtol), atol = Scalar(opt.atol);
  if (!opt.component_atol.empty() && static_cast<Eigen::Index>(opt.component_atol.size()) != y0.size())
    throw std::invalid_argument("component_atol size differs from the state");
  if (!opt.component_floor_rtol.empty() && static_cast<Eigen::Index>(opt.component_floor_rtol.size()) != y0.size())
    throw std::invalid_argument("component_floor_rtol size differs from the state");
  auto atol_of = [&](Eigen::Index i, Scalar magnitude) {
    const Scalar a =
        opt.component_atol.empty() ? atol : Scalar(opt.component_atol[static_cast<std::size_t>(i)]);
    if (opt.component_floor_rtol.empty()) return a;
    return min(a, Scalar(opt.component_floor_rtol[static_cast<std::size_t>(i)]) * magnitude);
  };
  const Scalar h_max = std::isinf(opt.max_step) ? abs(t1 - t0) : Scalar(opt.max_step);

  Trajectory<Scalar> out;
  V y = y0, y_new(n), k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), err(n);
  V r2(n), r3(n), r4(n), r5(n);
  auto call = [&](Scalar t, const V& state, V& dy) {
    dy.resize(n);
    rhs(t, state, dy);
    ++out.rhs_evaluations;
  };
  auto track = [&](const V& state) {
    const double norm = n == 0 ? 0.0 : static_cast<double>(state.cwiseAbs().maxCoeff());
    out.sup_norm = std::max(out.sup_norm, norm);
  };

  std::size_t next_sample = 0;
  auto record = [&](double t, const V& state) {
    out.times.push_back(t);
    out.states.push_back(state);
    track(state);
  };
  while (next_sample < sample_times.size() &&
         static_cast<double>(direction) * (sample_times[next_sample] - static_cast<double>(t0)) <= 0) {
    if (sample_times[next_sample] == static_cast<double>(t0)) record(sample_times[next_sample], y);
    ++next_sample;
  }
  track(y);

  Scalar t = t0;
  call(t, y, k1);
  if (!k1.allFinite()) throw IntegrationError(IntegrationError::Kind::NonFinite, "non-finite derivative", double(t));

  Scalar h;
  if (opt.initial_step > 0) {
    h = Scalar(opt.initial_step);
  } else {
    const Scalar sc = atol + rtol * (n == 0 ? Scalar(0) : y.cwiseAbs().maxCoeff());
    const Scalar slope = n == 0 ? Scalar(0) : k1.cwiseAbs().maxCoeff();
    h = slope > 0 ? Scalar(0.01) * pow(sc / slope, Scalar(0.2)) : Scalar(1e-6);
    h = max(h, Scalar(1e-12));
  }
  h = min(h, h_max);
  Scalar fac_old = Scalar(1e-4);
  bool last_rejected = false;

  while (direction * (t1 - t) > 0) {
    if (out.accepted + out.rejected >= opt.max_steps)
      throw IntegrationError(IntegrationError::Kind::StepLimit, "step limit reached", double(t));
    const Scalar remaining = abs(t1 - t);
    bool final_step = false;
    if (h >= remaining) {
      h = remaining;
      final_step = true;
    }
    const Scalar tiny = Scalar(64) * std::numeric_limits<Scalar>::epsilon() * max(Scalar(1), abs(t));
    if (h < tiny)
      throw IntegrationError(IntegrationError::Kind::StepUnderflow,
                             "step size underflow (stiff system?)", double(t));
    const Scalar hs = direction * h;

    tmp.noalias() = y + hs * (a21 * k1);
    call(t + c2 * hs, tmp, k2);
    tmp.noalias() = y + hs * (a31 * k1 + a32 * k2);
    call(t + c3 * hs, tmp, k3);
    tmp.noalias() = y + hs * (a41 * k1 + a42 * k2 + a43 * k3);
    call(t + c4 * hs, tmp, k4);
    tmp.noalias() = y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    call(t + c5 * hs, tmp, k5);
    tmp.noalias() = y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    call(t + hs, tmp, k6);
    y_new.noalias() = y + hs * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    const Scalar t_new = final_step ? t1 : t + hs;
    call(t_new, y_new, k7);

    err.noalias() = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    Scalar acc = 0;
    bool finite = y_new.allFinite() && k7.allFinite();
    for (Eigen::Index i = 0; i < n; ++i) {
      const Scalar mag = min(abs(y[i]), abs(y_new[i]));
      const Scalar sc = max(atol_of(i, mag) + rtol * max(abs(y[i]), abs(y_new[i])), std::numeric_limits<Scalar>::min());
      const Scalar r = err[i] / sc;
      acc += r * r;
    }
    Scalar err_norm = n == 0 ? Scalar(0) : sqrt(acc / Scalar(n));
    if (!finite || !(err_norm == err_norm)) err_norm = Scalar(1e10);

    const Scalar fac11 = pow(max(err_norm, Scalar(1e-30)), Scalar(0.17));
    if (err_norm <= 1) {
      Scalar fac = fac11 / pow(fac_old, Scalar(0.04));
      fac = max(Scalar(0.1), min(Scalar(5), fac / Scalar(0.9)));
      fac_old = max(err_norm, Scalar(1e-4));

      // Continuous extension coefficients.
      r2 = y_new - y;
      r3 = hs * k1 - r2;
      r4 = r2 - hs * k7 - r3;
      r5.noalias() = hs * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
      while (next_sample < sample_times.size() &&
             static_cast<double>(direction) * (sample_times[next_sample] - static_cast<double>(t_new)) <= 0) {
        const double ts = sample_times[next_sample++];
        if (ts == static_cast<double>(t_new)) {
          record(ts, y_new);
          continue;
        }
        const Scalar th = (Scalar(ts) - t) / hs;
        const Scalar th1 = Scalar(1) - th;
        tmp = y + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)));
        record(ts, tmp);
      }

      y.swap(y_new);
      k1.swap(k7);
      t = t_new;
      ++out.accepted;
      track(y);
      on_step(t, y);
      if (!y.allFinite())
        throw IntegrationError(IntegrationError::Kind::NonFinite, "non-finite state", double(t));

      Scalar h_next = h / fac;
      if (last_rejected) h_next = min(h_next, h);
      h = min(h_next, h_max);
      last_rejected = false;
    } else {
      if (!finite && h <= tiny)
        throw IntegrationError(IntegrationError::Kind::NonFinite, "non-finite state", double(t));
      h = h / min(Scalar(5), fac11 / Scalar(0.9));
      ++out.rejected;
      last_rejected = true;
    }
  }
  out.final_state = y;
  return out;
}

}  // namespace gpac
