#include "gpac/simulate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

namespace gpac {

double reach_closed_form(double A, double phi_integral, double g, double x0) {
  return g + (x0 - g) * std::exp(-A * phi_integral);
}

ReachRun reach_solve(double A, const std::function<double(double)>& phi, const std::function<double(double)>& Phi,
                     double g, double x0, double T, const IntegratorOptions& opt) {
  StateVector<double> y0(1);
  y0[0] = x0;
  auto traj = integrate<double>(
      [&](double t, const StateVector<double>& y, StateVector<double>& dy) { dy[0] = A * phi(t) * (g - y[0]); }, y0,
      0.0, T, {}, opt);
  return {traj.final_state[0], reach_closed_form(A, Phi(T), g, x0), traj.accepted};
}

PerturbedVerdict reach_perturbed_check(double eta, double lambda, double x0, double g,
                                       const std::function<double(double)>& gbar,
                                       const std::function<double(double)>& phi,
                                       const std::function<double(double)>& Phi, double T,
                                       const IntegratorOptions& opt, double slack) {
  constexpr int grid = 2000;
  std::vector<double> samples;
  for (int i = 0; i <= grid; ++i) {
    const double t = T * i / grid;
    if (std::abs(gbar(t) - g) > eta) throw std::invalid_argument("|gbar(t) - g| exceeds eta");
    samples.push_back(t);
  }
  const double total = Phi(T);
  if (!(total > 0)) throw std::invalid_argument("integral of phi must be positive");
  PerturbedVerdict v;
  v.A = lambda / total;
  StateVector<double> y0(1);
  y0[0] = x0;
  auto traj = integrate<double>(
      [&](double t, const StateVector<double>& y, StateVector<double>& dy) {
        dy[0] = v.A * phi(t) * (gbar(t) - y[0]);
      },
      y0, 0.0, T, samples, opt);
  v.x_T = traj.final_state[0];
  v.deviation = std::abs(v.x_T - g);
  v.bound = eta * (1 + std::exp(-lambda)) + std::abs(x0 - g) * std::exp(-lambda);
  v.bound_ok = v.deviation <= v.bound + slack;
  // The extreme solutions chase g - eta and g + eta.
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double integral = Phi(traj.times[i]);
    const double lo = reach_closed_form(v.A, integral, g - eta, x0);
    const double hi = reach_closed_form(v.A, integral, g + eta, x0);
    const double x = traj.states[i][0];
    v.sandwich_violation = std::max({v.sandwich_violation, lo - x, x - hi});
  }
  v.sandwich_ok = v.sandwich_violation <= slack;
  return v;
}

Backend parse_backend(std::string_view name) {
  if (name == "direct") return Backend::Direct;
  if (name == "compiled") return Backend::Compiled;
  throw std::invalid_argument("unknown backend '" + std::string(name) + "'");
}

std::string_view backend_name(Backend b) { return b == Backend::Direct ? "direct" : "compiled"; }

IterateParams resolve_params(const StepModel& model, const StepConstants& constants, double iterate_lambda, double mu,
                             double tau, double sigma_lambda) {
  IterateParams p;
  p.iterate_lambda = iterate_lambda;
  p.mu = std::isnan(mu) ? log_of(constants.K2 + 1) : mu;
  p.tau = std::isnan(tau) ? iterate_lambda : tau;
  p.sigma_lambda = std::isnan(sigma_lambda) ? 4.0 * model.machine.base() : sigma_lambda;
  return p;
}

void check_iterate_params(const IterateParams& p) {
  if (!(p.iterate_lambda >= 1)) throw std::invalid_argument("iterate lambda must be at least 1");
  if (!(p.mu >= 0)) throw std::invalid_argument("mu must be non-negative");
  if (!(p.tau > 0) || !(p.sigma_lambda > 0)) throw std::invalid_argument("tau and sigma lambda must be positive");
  const double lm = p.iterate_lambda + p.mu;
  const double A = p.A(), B = p.B();
  if (A < lm * std::numbers::pi * std::pow(std::numbers::e * B, 0.25))
    throw std::invalid_argument("A below (lambda + mu) pi (eB)^(1/4)");
  // A e^mu e^-B <= e^-lambda, in logs.
  if (std::log(A) + p.mu - B > -p.iterate_lambda) throw std::invalid_argument("A e^mu e^-B exceeds e^-lambda");
}

namespace {

std::vector<double> sample_grid(int horizon, int per_unit) {
  std::vector<double> out;
  for (int i = 0; i <= horizon * per_unit; ++i) out.push_back(double(i) / per_unit);
  return out;
}

template <class Scalar>
void track_zu(SimulationResult& r, const StateVector<Scalar>& y, Eigen::Index z, Eigen::Index u) {
  const double zn = static_cast<double>(y.segment(z, 4).cwiseAbs().maxCoeff());
  const double un = static_cast<double>(y.segment(u, 4).cwiseAbs().maxCoeff());
  r.zu_sup_norm = std::max({r.zu_sup_norm, zn, un});
}

}  // namespace

SimulationResult simulate_machine(const StepModel& model, const RationalConfig& start, const SimulationConfig& cfg) {
  check_iterate_params(cfg.params);
  if (cfg.horizon < 0) throw std::invalid_argument("negative horizon");
  if (cfg.samples_per_unit < 2) throw std::invalid_argument("need at least two samples per unit time");
  const auto clock_start = std::chrono::steady_clock::now();
  SimulationResult r;
  r.backend = cfg.backend;
  r.params = cfg.params;
  r.horizon = cfg.horizon;
  r.space_bound = std::exp(cfg.params.mu);
  const std::vector<double> grid = sample_grid(cfg.horizon, cfg.samples_per_unit);
  const double B = cfg.params.B();
  IntegratorOptions opt = cfg.integrator;

  if (cfg.backend == Backend::Direct) {
    opt.max_step = std::min(opt.max_step, cfg.direct_step_fraction / B);
    const RealConfig4<double> c0 = to_real(start);
    StateVector<double> y0(8);
    y0 << c0, c0;
    r.dimension = 8;
    using V8 = Eigen::Matrix<double, 8, 1>;
    auto traj = integrate<double>(
        [&](double t, const StateVector<double>& y, StateVector<double>& dy) {
          V8 out;
          direct_iterate_rhs<double>(model, cfg.params, t, V8(y), out);
          dy = out;
        },
        y0, 0.0, double(cfg.horizon), grid, opt,
        [&](double, const StateVector<double>& y) { track_zu(r, y, 0, 4); });
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      r.times.push_back(traj.times[i]);
      r.zu.push_back(V8(traj.states[i]));
      track_zu(r, traj.states[i], 0, 4);
    }
    r.state_sup_norm = r.zu_sup_norm;
    r.steps = traj.accepted;
    r.rejected = traj.rejected;
    r.rhs_evaluations = traj.rhs_evaluations;
  } else {
    opt.max_step = std::min(opt.max_step, cfg.compiled_step_fraction / B);
    const CompiledIterate ci = compile_iterate(model, cfg.params, start);
    r.dimension = ci.dimension();
    using L = IterateLayout;
    // The theta clocks and the tanh pairs spend most of the time far below
    // any absolute tolerance and are amplified by up to e^B later on, so
    // they keep a relative accuracy while small.
    if (opt.component_floor_rtol.empty()) {
      opt.component_floor_rtol.assign(ci.dimension(), std::numeric_limits<double>::infinity());
      opt.component_floor_rtol[L::theta_z] = opt.component_floor_rtol[L::theta_u] = cfg.small_value_rtol;
      for (std::size_t i = L::aux; i < ci.dimension(); ++i) opt.component_floor_rtol[i] = cfg.small_value_rtol;
    }
    const PolyEvaluator eval(ci.system.rhs);
    auto track_state = [&](const StateVector<long double>& y) {
      track_zu(r, y, L::z, L::u);
      const double rest = static_cast<double>(y.tail(y.size() - 1).cwiseAbs().maxCoeff());
      r.state_sup_norm = std::max(r.state_sup_norm, rest);
    };
    // z and u entries below 1e-300 are rounded to zero before evaluation:
    // they are far below atol, and their products with the clock and tanh
    // variables would otherwise land in the (very slow) x87 subnormal range.
    StateVector<long double> scratch(static_cast<Eigen::Index>(ci.dimension()));
    auto traj = integrate<long double>(
        [&](long double, const StateVector<long double>& y, StateVector<long double>& dy) {
          scratch = y;
          for (Eigen::Index i = L::z; i < L::aux; ++i)
            if (std::abs(scratch[i]) < 1e-300L) scratch[i] = 0;
          eval.eval(scratch, dy);
        },
        ci.system.y0, 0.0L, static_cast<long double>(cfg.horizon), grid, opt,
        [&](long double, const StateVector<long double>& y) { track_state(y); });
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      const auto& y = traj.states[i];
      Eigen::Matrix<double, 8, 1> zu;
      zu << y.segment(L::z, 4).cast<double>(), y.segment(L::u, 4).cast<double>();
      r.times.push_back(traj.times[i]);
      r.zu.push_back(zu);
      track_state(y);
    }
    r.steps = traj.accepted;
    r.rejected = traj.rejected;
    r.rhs_evaluations = traj.rhs_evaluations;
  }

  const int per = cfg.samples_per_unit;
  for (int n = 0; n <= cfg.horizon; ++n) r.u_integer.push_back(r.zu[static_cast<std::size_t>(n * per)].tail<4>());
  for (int n = 0; n < cfg.horizon; ++n) {
    double drift = 0;
    const RealConfig4<double>& un = r.u_integer[static_cast<std::size_t>(n)];
    for (int i = 0; i <= per / 2; ++i) {
      const RealConfig4<double> u = r.zu[static_cast<std::size_t>(n * per + i)].tail<4>();
      drift = std::max(drift, (u - un).cwiseAbs().maxCoeff());
    }
    r.frozen_drift.push_back(drift);
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start).count();
  return r;
}

Configuration decode_real(const RealConfig4<double>& c, const TuringMachine& machine, double eps, int max_digits) {
  const int k = machine.base();
  if (!(eps > 0) || eps >= 0.5) throw std::invalid_argument("decode precision must be in (0, 1/2)");
  auto round_to = [&](double v, int limit, const char* what) {
    const double r = std::round(v);
    if (std::abs(v - r) > eps || r < 0 || r >= limit)
      throw DecodeAmbiguity(std::string(what) + " " + std::to_string(v) + " is not within eps of a valid value");
    return static_cast<int>(r);
  };
  auto tape = [&](double v, const char* what) {
    std::vector<int> digits;
    double scale = eps;  // error bound on the current remainder
    for (int i = 0;; ++i) {
      if (std::abs(v) <= scale) break;
      if (i >= max_digits || scale * k > 1.0 / (2 * k))
        throw DecodeAmbiguity(std::string(what) + " tape cannot be resolved at this precision");
      const double d = std::floor(k * v + 1.0 / (2 * k));
      if (d < 0 || d > k - 2) throw DecodeAmbiguity(std::string(what) + " tape has an invalid digit");
      digits.push_back(static_cast<int>(d));
      v = k * v - d;
      scale *= k;
    }
    return digits;
  };
  Configuration out;
  out.left = tape(c[0], "left");
  out.head = round_to(c[1], machine.symbols(), "symbol");
  out.right = tape(c[2], "right");
  out.state = round_to(c[3], machine.states(), "state");
  out.canonicalize();
  return out;
}

std::vector<StepVerdict> decode_trajectory(const SimulationResult& result, const TuringMachine& machine,
                                           const std::vector<Configuration>& oracle, double eps,
                                           const std::vector<double>& budget, double slack) {
  std::vector<StepVerdict> out;
  for (std::size_t n = 0; n < result.u_integer.size(); ++n) {
    StepVerdict v;
    v.n = static_cast<int>(n);
    const RealConfig4<double>& u = result.u_integer[n];
    try {
      v.config = decode_real(u, machine, eps);
      v.decoded = true;
    } catch (const DecodeAmbiguity& e) {
      v.error = e.what();
    }
    if (n < oracle.size()) {
      const RationalConfig exact = encode(oracle[n], machine);
      v.matches_oracle = v.decoded && v.config == canonical(oracle[n]);
      // Differences taken in long double against the exact encoding.
      const long double ex[4] = {exact.x.convert_to<long double>(), static_cast<long double>(exact.s),
                                 exact.y.convert_to<long double>(), static_cast<long double>(exact.q)};
      for (int i = 0; i < 4; ++i)
        v.max_error = std::max(v.max_error, static_cast<double>(std::abs(static_cast<long double>(u[i]) - ex[i])));
    }
    if (n < budget.size()) {
      v.budget = budget[n];
      v.within_budget = v.max_error <= v.budget + slack;
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace gpac
