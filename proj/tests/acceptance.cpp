// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include "gpac/budget.hpp"
#include "gpac/compile.hpp"
#include "gpac/corpus.hpp"
#include "gpac/helpers.hpp"
#include "gpac/lagrange.hpp"
#include "gpac/simulate.hpp"
#include "gpac/step_map.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

using namespace gpac;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Tally {
  int failed = 0;

  template <class Fn>
  void criterion(int id, const char* title, double limit_seconds, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < limit_seconds;
    const bool pass = o.pass && in_time;
    failed += !pass;
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2f s / %.0f s", secs, limit_seconds);
    std::cout << "criterion " << id << " " << (pass ? "PASS" : "FAIL") << "  " << title << ": " << o.detail << " ["
              << timing << (in_time ? "" : ", over time") << "]" << std::endl;
  }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

constexpr double kSlack = 1e-12;

// 1. Helper bounds.
Outcome helper_suite() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> unit(0, 1);
  auto in = [&](double a, double b) { return a + (b - a) * unit(rng); };
  int violations = 0, over_half = 0;
  const int n = 10000;
  // sign approximation
  for (int i = 0; i < n; ++i) {
    const double lambda = in(0.1, 20), y = in(1, 30);
    const double x = (unit(rng) < 0.5 ? -1 : 1) * in(1 / lambda, 5);
    violations += std::abs(sign_of(x) - xi(x, y, lambda)) >= std::exp(-y) + kSlack;
    const double z = in(-1 / lambda, 1 / lambda);
    const double near = std::abs(sign_of(z) - xi(z, y, lambda));
    violations += near > helper_error_bound(Helper::Xi, {y, lambda, 1}, z) + kSlack;
    over_half += near >= 0.5;
  }
  // step at 1
  for (int i = 0; i < n; ++i) {
    const double lambda = in(2.001, 20), y = in(0.1, 30);
    const double x = unit(rng) < 0.5 ? in(0, 1 - 1 / lambda) : in(1 + 1 / lambda, 5);
    violations += std::abs((x >= 1 ? 1.0 : 0.0) - sigma1(x, y, lambda)) >= std::exp(-y) + kSlack;
  }
  // saturated floor, both branches
  auto int_p = [](int p, double x) { return std::max(0.0, std::min(double(p), std::floor(x))); };
  for (int i = 0; i < n; ++i) {
    const int p = 1 + int(unit(rng) * 8);
    const double lambda = in(2.001, 20), y = in(0.1, 30);
    const double x = in(-1, p + 2);
    const double err = std::abs(int_p(p, x) - sigma_p(p, x, y, lambda));
    violations += err > 0.5 + std::exp(-y) + kSlack;
    const double dist = x < 0 ? -x : std::abs(x - std::round(x));
    if (x < 1 - 1 / lambda || x > p + 1 / lambda || dist > 1 / lambda) violations += err >= std::exp(-y) + kSlack;
  }
  // clock tail
  for (int i = 0; i < n; ++i) {
    const double lambda = in(0.1, 50), t = std::floor(in(-5, 5)) + in(0.5, 1);
    violations += theta(t, lambda) > std::exp(-lambda) * (1 + kSlack);
  }
  // integral over the first half period
  std::ostringstream d;
  using boost::math::quadrature::gauss_kronrod;
  double worst_margin = 1e9;
  for (double lambda : {1.0, 4.0, 10.0, 25.0}) {
    double qerr = 0;
    const double integral =
        gauss_kronrod<double, 61>::integrate([&](double t) { return theta(t, lambda); }, 0.0, 0.5, 20, 1e-13, &qerr);
    const double lower = std::pow(std::numbers::e * lambda, -0.25) / std::numbers::pi;
    violations += qerr > 1e-6 || integral - qerr < lower;
    worst_margin = std::min(worst_margin, integral / lower);
  }
  d << 5 * n << " samples, " << violations << " violations; integral / lower bound >= " << sci(worst_margin)
    << "; xi off by >= 1/2 at " << over_half << " of " << n << " points inside |x| < 1/lambda";
  return {violations == 0, d.str()};
}

// 2. Interpolation constants.
Outcome lagrange_suite() {
  int violations = 0;
  double worst_ratio = 0;
  std::mt19937_64 rng(202);
  for (const auto& w : corpus::all()) {
    const StepModel model(w.machine);
    const double K = model.box_radius;
    std::uniform_real_distribution<double> box(-K, K);
    const InterpPoly* polys[3] = {&model.next_state, &model.write, &model.move};
    for (int c = 0; c < 3; ++c) {
      const InterpPoly& p = *polys[c];
      for (int q = 0; q < w.machine.states(); ++q)
        for (int s = 0; s < w.machine.symbols(); ++s) {
          const Transition& t = w.machine.delta(q, s);
          const double want = c == 0 ? t.next_state : c == 1 ? t.write : (t.dir == Direction::Right ? 1 : 0);
          violations += std::abs(p.eval<double>(q, s) - want) > 1e-9;
        }
      const double A = to_double(p.lipschitz()), B = to_double(p.magnitude());
      for (int i = 0; i < 10000; ++i) {
        const double a0 = box(rng), a1 = box(rng), b0 = box(rng), b1 = box(rng);
        const double la = p.eval<double>(a0, a1), lb = p.eval<double>(b0, b1);
        const double ratio = std::abs(la - lb) / std::max(std::abs(a0 - b0), std::abs(a1 - b1));
        violations += ratio > A || std::abs(la) > B;
        worst_ratio = std::max(worst_ratio, ratio / A);
      }
    }
  }
  std::uniform_int_distribution<int> len(1, 8);
  for (int i = 0; i < 10000; ++i) {
    const double K = 0.25 + 3 * std::uniform_real_distribution<double>(0, 1)(rng);
    std::uniform_real_distribution<double> u(-K, K);
    const int n = len(rng);
    double px = 1, py = 1, sum = 0;
    for (int j = 0; j < n; ++j) {
      const double x = u(rng), y = u(rng);
      px *= x;
      py *= y;
      sum += std::abs(x - y);
    }
    violations += std::abs(px - py) > std::pow(K, n - 1) * sum * (1 + 1e-12);
  }
  return {violations == 0,
          std::to_string(violations) + " violations; largest sampled ratio / A = " + sci(worst_ratio)};
}

// 3. Iterated exact step against the interpreter.
Outcome oracle_equivalence() {
  int mismatches = 0, checked = 0;
  for (const auto& w : corpus::all()) {
    const StepModel model(w.machine);
    const auto trace = run(w.machine, w.start, 200);
    RationalConfig rc = encode(w.start, w.machine);
    for (std::size_t n = 1; n < trace.size(); ++n) {
      rc = step_exact_real(rc, model);
      mismatches += !(rc == encode(trace[n], w.machine));
      ++checked;
    }
  }
  return {mismatches == 0, std::to_string(checked) + " steps, " + std::to_string(mismatches) + " mismatches"};
}

// 4. Robust step under perturbation.
Outcome robust_step_suite() {
  const double tau = 20;
  int violations = 0;
  long samples = 0;
  double worst = 0;
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> unit(-1, 1);
  std::ostringstream d;
  for (const auto& w : corpus::all()) {
    const StepModel model(w.machine);
    const StepConstants c = machine_constants(model);
    const int k = w.machine.base();
    const double sl = 4.0 * k;
    const double radius = 1.0 / (2.0 * k * k) - 1.0 / (k * sl);
    std::set<std::pair<std::string, int>> seen;
    int configs = 0;
    for (const auto& conf : run(w.machine, w.start, 200)) {
      if (!seen.insert({to_string(conf), 0}).second) continue;
      ++configs;
      const RationalConfig rc = encode(conf, w.machine);
      const RationalConfig next = step_exact_real(rc, model);
      const RealConfig4<long double> want(next.x.convert_to<long double>(), next.s, next.y.convert_to<long double>(),
                                          next.q);
      const RealConfig4<double> base = to_real(rc);
      for (int i = 0; i < 1000; ++i) {
        RealConfig4<double> p = base;
        for (int j = 0; j < 4; ++j) p[j] += radius * unit(rng);
        const double dist = (p - base).cwiseAbs().maxCoeff();
        const RealConfig4<long double> got = step_robust<long double>(p.cast<long double>(), tau, sl, model);
        const double err = static_cast<double>((got - want).cwiseAbs().maxCoeff());
        const double bound = robust_step_bound(c, tau, dist);
        violations += err > bound;
        worst = std::max(worst, err / bound);
        ++samples;
      }
    }
    d << w.machine.name() << " " << configs << " configs; ";
  }
  d << samples << " samples, " << violations << " violations, max error / bound " << sci(worst);
  return {violations == 0, d.str()};
}

// 5. Reach equation.
Outcome reach_suite() {
  const double tol = 1e-10;
  IntegratorOptions opt;
  opt.rtol = opt.atol = tol;
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> unit(0, 1);
  auto in = [&](double a, double b) { return a + (b - a) * unit(rng); };
  int failures = 0;
  double worst = 0;
  for (int i = 0; i < 20; ++i) {
    // phi(t) = a + b sin(w t + c) with a > |b|
    const double a = in(0.2, 2), b = in(-0.9, 0.9) * a, w = in(0.5, 20), c = in(0, 6.3);
    auto phi = [=](double t) { return a + b * std::sin(w * t + c); };
    auto Phi = [=](double t) { return a * t - b / w * (std::cos(w * t + c) - std::cos(c)); };
    const double A = in(0.5, 20), g = in(-2, 2), x0 = in(-2, 2), T = in(0.5, 3);
    const ReachRun r = reach_solve(A, phi, Phi, g, x0, T, opt);
    const double err = std::abs(r.x_T - r.closed_form);
    failures += err > 10 * tol;
    worst = std::max(worst, err);
  }
  int perturbed_failures = 0;
  for (int i = 0; i < 20; ++i) {
    const double a = in(0.2, 2), b = in(-0.9, 0.9) * a, w = in(0.5, 20), c = in(0, 6.3);
    auto phi = [=](double t) { return a + b * std::sin(w * t + c); };
    auto Phi = [=](double t) { return a * t - b / w * (std::cos(w * t + c) - std::cos(c)); };
    const double eta = in(0, 0.2), lambda = in(1, 10), g = in(-2, 2), x0 = in(-2, 2), T = in(0.5, 3),
                 freq = in(1, 60);
    const auto v = reach_perturbed_check(eta, lambda, x0, g, [=](double t) { return g + eta * std::sin(freq * t); },
                                         phi, Phi, T, opt, 10 * tol);
    perturbed_failures += !(v.bound_ok && v.sandwich_ok);
  }
  return {failures == 0 && perturbed_failures == 0,
          "closed form: " + std::to_string(failures) + "/20 over 10*tol (worst " + sci(worst) +
              "); perturbed bound and sandwich: " + std::to_string(perturbed_failures) + "/20 failures"};
}

struct MachineRun {
  std::string name;
  std::vector<Configuration> decoded;
  bool ok = false;
};

SimulationConfig end_to_end_config(const StepModel& model, const StepConstants& c, Backend backend) {
  SimulationConfig cfg;
  cfg.horizon = 8;
  cfg.params = resolve_params(model, c, 25, std::numeric_limits<double>::quiet_NaN(), 25);
  cfg.backend = backend;
  cfg.integrator.rtol = cfg.integrator.atol = 1e-10;
  return cfg;
}

// One machine of criterion 6 (or its compiled rerun for 7).
Outcome end_to_end(const corpus::Workload& w, Backend backend, MachineRun& out) {
  const StepModel model(w.machine);
  const StepConstants c = machine_constants(model);
  const SimulationConfig cfg = end_to_end_config(model, c, backend);
  const SimulationResult r = simulate_machine(model, encode(w.start, w.machine), cfg);
  const auto oracle = run(w.machine, w.start, cfg.horizon);
  std::vector<double> budget;
  for (const WideReal& e :
       epsilon_sequence(to_wide(c.K1), WideReal(cfg.params.iterate_lambda), WideReal(cfg.params.tau), WideReal(0), 8))
    budget.push_back(e.convert_to<double>());
  const auto verdicts = decode_trajectory(r, w.machine, oracle, 1e-6, budget, 10 * cfg.integrator.rtol);
  int matched = 0, in_budget = 0;
  double worst = 0;
  out.name = w.machine.name();
  for (const auto& v : verdicts) {
    matched += v.matches_oracle;
    in_budget += v.within_budget;
    worst = std::max(worst, v.max_error);
    out.decoded.push_back(v.decoded ? v.config : Configuration{{}, -1, {}, -1});
  }
  const double k2 = to_double(c.K2) + 1;
  const bool bounded = r.zu_sup_norm <= k2;
  out.ok = matched == 9 && in_budget == 9 && bounded;
  std::ostringstream d;
  d << w.machine.name() << " " << matched << "/9 decoded, " << in_budget << "/9 within eps_n, max error " << sci(worst)
    << ", sup " << sci(r.zu_sup_norm) << " <= K2+1 = " << sci(k2) << " (" << sci(r.seconds) << " s)";
  return {out.ok, d.str()};
}

// 7a. Right-hand sides at random in-box states.
Outcome rhs_equivalence(double& worst_rel, double& worst_abs) {
  int violations = 0;
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> u(-1, 1), tt(0, 8);
  for (const auto& w : corpus::all()) {
    const StepModel model(w.machine);
    const StepConstants c = machine_constants(model);
    const IterateParams p = end_to_end_config(model, c, Backend::Compiled).params;
    const CompiledIterate ci = compile_iterate(model, p, encode(w.start, w.machine));
    const PolyEvaluator ev(ci.system.rhs);
    const int m = w.machine.states(), k = w.machine.base();
    for (int i = 0; i < 1000; ++i) {
      Eigen::Matrix<double, 8, 1> zu;
      for (int b = 0; b < 2; ++b) zu.segment<4>(4 * b) << u(rng), m * u(rng), u(rng), k * u(rng);
      const double t = tt(rng);
      Eigen::Matrix<double, 8, 1> want;
      direct_iterate_rhs<double>(model, p, t, zu, want);
      StateVector<long double> dy;
      ev.eval(ci.lift<long double>(t, zu.head<4>().cast<long double>(), zu.tail<4>().cast<long double>()), dy);
      for (int j = 0; j < 8; ++j) {
        const double diff = std::abs(double(dy[IterateLayout::z + j]) - want[j]);
        const double scale = std::max(1.0, std::abs(want[j]));
        violations += diff > 1e-9 * scale;
        worst_rel = std::max(worst_rel, diff / scale);
        worst_abs = std::max(worst_abs, diff);
      }
    }
  }
  return {violations == 0, std::to_string(violations) + " of 24000 components differ by more than 1e-9"};
}

// 8. Budget arithmetic.
Outcome budget_suite() {
  int failures = 0;
  WideReal worst_rel = 0;
  std::ostringstream d;
  for (const auto& w : corpus::all()) {
    const StepConstants c = machine_constants(StepModel(w.machine));
    for (auto [S, T] : {std::pair{5.0, 5}, {10.0, 8}, {20.0, 10}}) {
      const ErrorBudget b = error_budget(c, S, T);
      failures += !(b.eps.back() <= exp(WideReal(-S)));
      failures += !(b.eps.back() <= b.closed_form_bound);
      const auto seq = epsilon_sequence(b.K1, b.lambda, b.tau, WideReal(0), 50);
      for (int n = 0; n <= 50; ++n) {
        const WideReal closed = epsilon_closed_form(b.K1, b.lambda, b.tau, WideReal(0), n);
        const WideReal& rec = seq[std::size_t(n)];
        const WideReal rel = rec == 0 ? WideReal(abs(closed)) : WideReal(abs(rec - closed) / rec);
        worst_rel = std::max(worst_rel, rel);
        failures += rel > WideReal(1e-40);
      }
      if (w.machine.name() == "binary-counter" && T == 10)
        d << "counter (S,T)=(20,10): lambda " << b.lambda.str(6) << ", eps_T " << b.eps.back().str(4) << "; ";
    }
  }
  d << "recurrence vs closed form max relative gap " << worst_rel.str(3) << ", " << failures << " failures";
  return {failures == 0, d.str()};
}

}  // namespace

int main() {
  std::cout << std::unitbuf;
  Tally tally;
  tally.criterion(1, "helper bounds", 5, helper_suite);
  tally.criterion(2, "interpolation constants", 5, lagrange_suite);
  tally.criterion(3, "oracle equivalence n <= 200", 2, oracle_equivalence);
  tally.criterion(4, "robust step perturbations", 30, robust_step_suite);
  tally.criterion(5, "reach equation", 10, reach_suite);

  std::map<std::string, MachineRun> direct;
  std::vector<std::pair<std::string, double>> seconds;
  for (const auto& w : corpus::all()) {
    const std::string title = "end-to-end simulation, " + w.machine.name();
    tally.criterion(6, title.c_str(), 60, [&] { return end_to_end(w, Backend::Direct, direct[w.machine.name()]); });
  }

  tally.criterion(7, "compiler soundness", 90, [&] {
    double rel = 0, abs_diff = 0;
    Outcome rhs = rhs_equivalence(rel, abs_diff);
    std::ostringstream d;
    d << rhs.detail << " (max relative " << sci(rel) << ", max absolute " << sci(abs_diff) << "); ";
    bool same = true;
    for (const auto& w : corpus::all()) {
      MachineRun compiled;
      const Outcome o = end_to_end(w, Backend::Compiled, compiled);
      const bool identical = compiled.decoded == direct[w.machine.name()].decoded;
      same = same && o.pass && identical;
      d << w.machine.name() << (identical ? " identical" : " DIFFERENT") << " [" << o.detail << "]; ";
    }
    return Outcome{rhs.pass && same, d.str()};
  });

  tally.criterion(8, "budget arithmetic", 1, budget_suite);

  tally.criterion(9, "space growth, counter T in {2,4,6,8}", 120, [] {
    const auto w = corpus::binary_counter();
    const StepModel model(w.machine);
    const StepConstants c = machine_constants(model);
    const double k2 = to_double(c.K2) + 1;
    std::ostringstream d;
    bool ok = true;
    double first = -1;
    for (int T : {2, 4, 6, 8}) {
      SimulationConfig cfg = end_to_end_config(model, c, Backend::Direct);
      cfg.horizon = T;
      const SimulationResult r = simulate_machine(model, encode(w.start, w.machine), cfg);
      const auto verdicts = decode_trajectory(r, w.machine, run(w.machine, w.start, T), 1e-6);
      bool decoded = true;
      for (const auto& v : verdicts) decoded = decoded && v.matches_oracle;
      if (first < 0) first = r.zu_sup_norm;
      ok = ok && decoded && r.zu_sup_norm <= k2;
      d << "T=" << T << " sup " << sci(r.zu_sup_norm) << (decoded ? "" : " (decode mismatch)") << "; ";
    }
    d << "K2+1 = " << sci(k2);
    return Outcome{ok, d.str()};
  });

  std::cout << (tally.failed == 0 ? "all criteria passed" : std::to_string(tally.failed) + " criteria failed")
            << std::endl;
  return tally.failed == 0 ? 0 : 1;
}
