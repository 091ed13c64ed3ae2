#include "gpac/budget.hpp"
#include "gpac/compile.hpp"
#include "gpac/helpers.hpp"
#include "gpac/machine_io.hpp"
#include "gpac/simulate.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <random>
#include <set>
#include <sstream>

using namespace gpac;
using nlohmann::json;

namespace {

constexpr int kInvalidInput = 2;
constexpr int kViolation = 3;
constexpr int kIntegratorFailure = 4;

struct Exit {
  int code;
  std::string message;
};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// GPAC_TOL overrides the default rtol = atol.
double default_tolerance() {
  const char* env = std::getenv("GPAC_TOL");
  if (!env || !*env) return 1e-10;
  char* end = nullptr;
  const double v = std::strtod(env, &end);
  if (*end != '\0' || !(v > 0)) throw Exit{kInvalidInput, std::string("GPAC_TOL is not a positive number: ") + env};
  return v;
}

struct Loaded {
  TuringMachine machine;
  Configuration start;
};

Loaded load(const std::string& path, const std::string& tape) {
  const std::string text = read_file(path);
  TuringMachine machine = parse_machine(text);
  Configuration start;
  if (!tape.empty()) {
    start = parse_tape(tape.front() == '{' ? tape : read_file(tape), machine);
  } else if (auto doc = parse_document_tape(text, machine)) {
    start = *doc;
  } else {
    start.state = machine.initial_state();
  }
  return {machine, canonical(start)};
}

std::string fmt(double v, int precision = 17) {
  std::ostringstream s;
  s << std::setprecision(precision) << v;
  return s.str();
}

std::string wide_text(const WideReal& v) { return v.str(17); }

json config_json(const Configuration& c) {
  return {{"left", c.left}, {"head", c.head}, {"right", c.right}, {"state", c.state}};
}

json encoding_json(const RationalConfig& rc) {
  return {{"x", to_fraction_string(rc.x)}, {"s", rc.s}, {"y", to_fraction_string(rc.y)}, {"q", rc.q}};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Exit{kInvalidInput, "cannot write " + path};
  out << text;
}

// Shared flags of the ODE-facing subcommands.
struct OdeFlags {
  std::string machine, tape;
  int horizon = 8;
  double iterate_lambda = 25, mu = kNaN, tau = kNaN, sigma_lambda = kNaN;
  std::string backend = "direct";
  double rtol = kNaN, atol = kNaN;
  double decode_eps = 1e-6;
  int samples = 32;

  void attach(CLI::App* cmd, bool with_horizon = true) {
    cmd->add_option("machine", machine, "machine description (JSON)")->required();
    cmd->add_option("--tape", tape, "initial tape: JSON object or file; defaults to the document's tape");
    if (with_horizon) cmd->add_option("-T,--horizon", horizon, "T: number of machine steps simulated")->capture_default_str();
    cmd->add_option("--iterate-lambda", iterate_lambda, "lambda: contraction target of each phase (>= 1)")
        ->capture_default_str();
    cmd->add_option("--mu", mu, "mu: log of the space bound M = e^mu; default ln(K2 + 1)");
    cmd->add_option("--tau", tau, "tau: sharpness of the robust step; default lambda");
    cmd->add_option("--sigma-lambda", sigma_lambda, "lambda inside sigma_k of the robust step; default 4k");
    cmd->add_option("--backend", backend, "direct | compiled")->capture_default_str();
    cmd->add_option("--rtol", rtol, "relative tolerance; default GPAC_TOL or 1e-10");
    cmd->add_option("--atol", atol, "absolute tolerance; default GPAC_TOL or 1e-10");
    cmd->add_option("--decode-eps", decode_eps, "decoding radius eps (< 1/(2k^2))")->capture_default_str();
    cmd->add_option("--samples-per-unit", samples, "trace samples per unit time")->capture_default_str();
  }

  SimulationConfig config(const StepModel& model, const StepConstants& constants, int T) const {
    SimulationConfig cfg;
    cfg.horizon = T;
    cfg.params = resolve_params(model, constants, iterate_lambda, mu, tau, sigma_lambda);
    cfg.backend = parse_backend(backend);
    const double tol = default_tolerance();
    cfg.integrator.rtol = std::isnan(rtol) ? tol : rtol;
    cfg.integrator.atol = std::isnan(atol) ? tol : atol;
    cfg.samples_per_unit = samples;
    return cfg;
  }
};

struct RunOutcome {
  SimulationResult result;
  std::vector<StepVerdict> verdicts;
  std::vector<double> budget;
  bool pass = false;
};

RunOutcome simulate_and_check(const Loaded& w, const StepModel& model, const StepConstants& constants,
                              const SimulationConfig& cfg, double decode_eps) {
  RunOutcome o;
  o.result = simulate_machine(model, encode(w.start, w.machine), cfg);
  const auto oracle = run(w.machine, w.start, cfg.horizon);
  for (const WideReal& e : epsilon_sequence(to_wide(constants.K1), WideReal(cfg.params.iterate_lambda),
                                            WideReal(cfg.params.tau), WideReal(0), cfg.horizon))
    o.budget.push_back(e.convert_to<double>());
  const double slack = 10 * std::max(cfg.integrator.rtol, cfg.integrator.atol);
  o.verdicts = decode_trajectory(o.result, w.machine, oracle, decode_eps, o.budget, slack);
  o.pass = o.result.zu_sup_norm <= o.result.space_bound;
  for (const auto& v : o.verdicts) o.pass = o.pass && v.matches_oracle && v.within_budget;
  return o;
}

// Subcommands.

int cmd_validate(const std::string& path) {
  const TuringMachine m = parse_machine(read_file(path));
  std::cout << "name " << (m.name().empty() ? "-" : m.name()) << "\n"
            << "m " << m.states() << "\n"
            << "k " << m.base() << " (tape alphabet 0.." << m.base() - 2 << ", blank 0)\n"
            << "q0 " << m.initial_state() << "\n"
            << "halting";
  for (int h : m.halting()) std::cout << ' ' << h;
  std::cout << "\n"
            << "delta total: ok\n"
            << "halting states loop: ok\n"
            << "written symbols within alphabet: ok\n";
  return 0;
}

int cmd_oracle(const Loaded& w, int T, bool as_json) {
  if (T < 0) throw Exit{kInvalidInput, "T must be non-negative"};
  const auto configs = run(w.machine, w.start, T);
  if (as_json) {
    json rows = json::array();
    for (std::size_t n = 0; n < configs.size(); ++n)
      rows.push_back({{"n", n}, {"config", config_json(configs[n])}, {"encoding", encoding_json(encode(configs[n], w.machine))}});
    std::cout << rows.dump(2) << "\n";
    return 0;
  }
  for (std::size_t n = 0; n < configs.size(); ++n) {
    const RationalConfig rc = encode(configs[n], w.machine);
    std::cout << n << "  " << to_string(configs[n]) << "  x=" << to_fraction_string(rc.x) << " s=" << rc.s
              << " y=" << to_fraction_string(rc.y) << " q=" << rc.q
              << (w.machine.is_halting(configs[n].state) ? "  halted" : "") << "\n";
  }
  return 0;
}

int cmd_constants(const std::string& path, double S, int T) {
  const StepModel model(parse_machine(read_file(path)));
  const StepConstants c = machine_constants(model);
  auto line = [](const char* name, const Rational& v) {
    std::cout << std::left << std::setw(4) << name << ' ' << to_fraction_string(v) << "  (~" << wide_text(to_wide(v))
              << ")\n";
  };
  std::cout << "K (box radius) " << to_fraction_string(c.box_radius) << "\n";
  line("d", c.delta);
  const InterpPoly* polys[3] = {&model.next_state, &model.write, &model.move};
  for (int i = 0; i < 3; ++i) {
    const std::string n = std::to_string(i + 1);
    line(("F" + n).c_str(), polys[i]->max_value());
    line(("M" + n).c_str(), polys[i]->reach());
  }
  line("A1", c.A1);
  line("A2", c.A2);
  line("A3", c.A3);
  line("B1", c.B1);
  line("B2", c.B2);
  line("B3", c.B3);
  line("K1", c.K1);
  line("K2", c.K2);
  line("K3", c.K3);
  if (!std::isnan(S)) {
    if (T <= 0) throw Exit{kInvalidInput, "--T is required with --S"};
    const ErrorBudget b = error_budget(c, S, T);
    std::cout << "lambda(S=" << fmt(S) << ", T=" << T << ") " << wide_text(b.lambda) << "\n"
              << "eps_T " << wide_text(b.eps.back()) << "  e^-S " << fmt(std::exp(-S)) << "\n";
  }
  return 0;
}

int cmd_simulate(const OdeFlags& f, const std::string& csv, const std::string& verdicts_path) {
  const Loaded w = load(f.machine, f.tape);
  const StepModel model(w.machine);
  const StepConstants constants = machine_constants(model);
  const SimulationConfig cfg = f.config(model, constants, f.horizon);
  const RunOutcome o = simulate_and_check(w, model, constants, cfg, f.decode_eps);
  const SimulationResult& r = o.result;

  if (!csv.empty()) {
    std::ostringstream out;
    out << "t,u1,u2,u3,u4,z1,z2,z3,z4,sup_norm\n" << std::setprecision(17);
    double sup = 0;
    for (std::size_t i = 0; i < r.times.size(); ++i) {
      const auto& zu = r.zu[i];
      sup = std::max(sup, zu.cwiseAbs().maxCoeff());
      out << r.times[i];
      for (int j = 4; j < 8; ++j) out << ',' << zu[j];
      for (int j = 0; j < 4; ++j) out << ',' << zu[j];
      out << ',' << sup << "\n";
    }
    write_file(csv, out.str());
  }

  json steps = json::array();
  for (const auto& v : o.verdicts) {
    json row = {{"n", v.n}, {"decoded", v.decoded}, {"matches_oracle", v.matches_oracle},
                {"max_error", v.max_error}, {"budget", std::isfinite(v.budget) ? json(v.budget) : json("inf")},
                {"within_budget", v.within_budget}};
    if (v.decoded) row["config"] = config_json(v.config);
    else row["error"] = v.error;
    steps.push_back(row);
  }
  const json doc = {{"machine", w.machine.name()},
                    {"backend", backend_name(r.backend)},
                    {"horizon", r.horizon},
                    {"params",
                     {{"iterate_lambda", r.params.iterate_lambda},
                      {"mu", r.params.mu},
                      {"tau", r.params.tau},
                      {"sigma_lambda", r.params.sigma_lambda},
                      {"A", r.params.A()},
                      {"B", r.params.B()}}},
                    {"rtol", cfg.integrator.rtol},
                    {"atol", cfg.integrator.atol},
                    {"dimension", r.dimension},
                    {"sup_norm", r.zu_sup_norm},
                    {"state_sup_norm", r.state_sup_norm},
                    {"space_bound", r.space_bound},
                    {"steps", r.steps},
                    {"rejected", r.rejected},
                    {"seconds", r.seconds},
                    {"verdicts", steps},
                    {"pass", o.pass}};
  if (!verdicts_path.empty()) write_file(verdicts_path, doc.dump(2) + "\n");

  for (const auto& v : o.verdicts) {
    std::cout << "n=" << v.n << "  " << (v.decoded ? to_string(v.config) : v.error)
              << "  error=" << fmt(v.max_error, 3) << "  budget=" << fmt(v.budget, 3)
              << (v.matches_oracle ? "  ok" : "  MISMATCH") << (v.within_budget ? "" : "  OVER BUDGET") << "\n";
  }
  std::cout << "backend " << backend_name(r.backend) << "  dim " << r.dimension << "  A " << fmt(r.params.A(), 6)
            << "  B " << fmt(r.params.B(), 6) << "  sup " << fmt(r.zu_sup_norm, 6) << " <= e^mu "
            << fmt(r.space_bound, 6) << "  steps " << r.steps << "  " << fmt(r.seconds, 3) << " s\n"
            << (o.pass ? "PASS" : "FAIL") << "\n";
  return o.pass ? 0 : kViolation;
}

int cmd_compile(const OdeFlags& f, const std::string& out_path) {
  const Loaded w = load(f.machine, f.tape);
  const StepModel model(w.machine);
  const StepConstants constants = machine_constants(model);
  const IterateParams p = resolve_params(model, constants, f.iterate_lambda, f.mu, f.tau, f.sigma_lambda);
  check_iterate_params(p);
  const CompiledIterate ci = compile_iterate(model, p, encode(w.start, w.machine));
  const json meta = {{"machine", w.machine.name()},
                     {"iterate_lambda", p.iterate_lambda},
                     {"mu", p.mu},
                     {"tau", p.tau},
                     {"sigma_lambda", p.sigma_lambda},
                     {"A", p.A()},
                     {"B", p.B()},
                     {"degree", degree(ci.system.rhs)},
                     {"coefficient_sum", coefficient_sum(ci.system.rhs)}};
  const std::string doc = to_json(ci.system, meta.dump());
  if (out_path.empty() || out_path == "-") std::cout << doc << "\n";
  else write_file(out_path, doc + "\n");
  std::cerr << "dimension " << ci.dimension() << "  degree " << degree(ci.system.rhs) << "  sum|a| "
            << fmt(coefficient_sum(ci.system.rhs), 6) << "\n";
  return 0;
}

int cmd_probe_helpers(const std::string& name, const HelperParams& hp, double from, double to, int count) {
  if (count < 2) throw Exit{kInvalidInput, "need at least 2 points"};
  const Helper h = parse_helper(name);
  std::cout << "x,value,error,bound\n" << std::setprecision(17);
  int violations = 0;
  for (int i = 0; i < count; ++i) {
    const double x = from + (to - from) * i / (count - 1);
    const double err = helper_error(h, hp, x), bound = helper_error_bound(h, hp, x);
    violations += err > bound + 1e-12;
    std::cout << x << ',' << helper_value(h, hp, x) << ',' << err << ',' << bound << "\n";
  }
  return violations ? kViolation : 0;
}

int cmd_probe_step(const std::string& path, const std::string& tape, int steps, double tau, double sigma_lambda,
                   double radius, int samples, std::uint64_t seed) {
  const Loaded w = load(path, tape);
  const StepModel model(w.machine);
  const StepConstants constants = machine_constants(model);
  const int k = w.machine.base();
  if (std::isnan(sigma_lambda)) sigma_lambda = 4.0 * k;
  if (std::isnan(radius)) radius = 1.0 / (2.0 * k * k) - 1.0 / (k * sigma_lambda);
  if (!(radius >= 0)) throw Exit{kInvalidInput, "perturbation radius must be non-negative"};
  std::set<std::vector<int>> seen;
  std::vector<Configuration> reachable;
  for (const auto& c : run(w.machine, w.start, steps)) {
    std::vector<int> key = c.left;
    key.push_back(-1);
    key.insert(key.end(), c.right.begin(), c.right.end());
    key.push_back(c.head);
    key.push_back(c.state);
    if (seen.insert(key).second) reachable.push_back(c);
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::cout << "config,perturbation,error,bound\n" << std::setprecision(17);
  int violations = 0;
  for (std::size_t i = 0; i < reachable.size(); ++i) {
    const RationalConfig rc = encode(reachable[i], w.machine);
    const RationalConfig next = step_exact_real(rc, model);
    const RealConfig4<long double> exact(next.x.convert_to<long double>(), next.s, next.y.convert_to<long double>(),
                                         next.q);
    const RealConfig4<double> c = to_real(rc);
    for (int j = 0; j < samples; ++j) {
      RealConfig4<double> cbar = c;
      for (int d = 0; d < 4; ++d) cbar[d] += radius * unit(rng);
      const double dist = (cbar - c).cwiseAbs().maxCoeff();
      const RealConfig4<long double> got =
          step_robust<long double>(cbar.cast<long double>(), tau, sigma_lambda, model);
      const double err = static_cast<double>((got - exact).cwiseAbs().maxCoeff());
      const double bound = robust_step_bound(constants, tau, dist);
      violations += err > bound;
      std::cout << i << ',' << dist << ',' << err << ',' << bound << "\n";
    }
  }
  std::cerr << reachable.size() << " configurations, " << violations << " violations\n";
  return violations ? kViolation : 0;
}

int cmd_sweep(const OdeFlags& f, const std::vector<int>& horizons) {
  const Loaded w = load(f.machine, f.tape);
  const StepModel model(w.machine);
  const StepConstants constants = machine_constants(model);
  const double k2_bound = to_double(constants.K2 + 1);
  // Runs are independent; they execute one after another.
  bool all = true;
  std::cout << "T,sup_norm,space_bound,K2_plus_1,decoded_ok,seconds\n";
  for (int T : horizons) {
    const SimulationConfig cfg = f.config(model, constants, T);
    const RunOutcome o = simulate_and_check(w, model, constants, cfg, f.decode_eps);
    const bool ok = o.pass && o.result.zu_sup_norm <= k2_bound;
    all = all && ok;
    std::cout << T << ',' << fmt(o.result.zu_sup_norm) << ',' << fmt(o.result.space_bound) << ',' << fmt(k2_bound)
              << ',' << (ok ? "true" : "false") << ',' << fmt(o.result.seconds, 4) << "\n";
  }
  return all ? 0 : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compile Turing machines into polynomial ODEs, simulate them and check the result."};
  app.require_subcommand(1);

  std::string machine_path, tape;
  int T = 0;
  bool as_json = false;

  auto* validate = app.add_subcommand("validate", "parse a machine and check its assumptions");
  validate->add_option("machine", machine_path, "machine description (JSON)")->required();

  auto* oracle = app.add_subcommand("oracle", "run the exact interpreter and print c_0..c_T with encodings");
  oracle->add_option("machine", machine_path, "machine description (JSON)")->required();
  oracle->add_option("--tape", tape, "initial tape: JSON object or file");
  oracle->add_option("-T,--horizon", T, "T: number of steps")->capture_default_str();
  oracle->add_flag("--json", as_json, "print JSON instead of text");

  double S = kNaN;
  auto* constants = app.add_subcommand("constants", "print delta, F, M, A1..A3, B1..B3, K1, K2, K3");
  constants->add_option("machine", machine_path, "machine description (JSON)")->required();
  constants->add_option("--S", S, "S: target precision e^-S for the analytic lambda");
  constants->add_option("--T", T, "T: horizon for the analytic lambda");

  OdeFlags ode;
  std::string csv, verdicts;
  auto* simulate = app.add_subcommand("simulate", "integrate the iteration ODE and check it against the interpreter");
  ode.attach(simulate);
  simulate->add_option("--csv", csv, "trace output: t, u1..u4, z1..z4, sup_norm");
  simulate->add_option("--verdicts", verdicts, "per-step verdicts (JSON)");

  std::string out_path;
  auto* compile = app.add_subcommand("compile", "emit the iteration ODE as a polynomial system (JSON)");
  ode.attach(compile, false);
  compile->add_option("-o,--output", out_path, "output path, '-' for stdout");

  std::string helper = "xi";
  HelperParams hp;
  double from = -2, to = 2;
  int count = 101;
  auto* probe_helpers = app.add_subcommand("probe-helpers", "CSV of x, helper value, error and its proved bound");
  probe_helpers->add_option("--helper", helper, "xi | sigma1 | sigma_p | theta")->capture_default_str();
  probe_helpers->add_option("--y", hp.y, "y: sharpness exponent")->capture_default_str();
  probe_helpers->add_option("--lambda", hp.lambda, "lambda: steepness (theta: exponent scale)")->capture_default_str();
  probe_helpers->add_option("--p", hp.p, "p: saturation level of sigma_p")->capture_default_str();
  probe_helpers->add_option("--from", from, "first x (t for theta)")->capture_default_str();
  probe_helpers->add_option("--to", to, "last x")->capture_default_str();
  probe_helpers->add_option("--count", count, "number of points")->capture_default_str();

  double tau = 20, sigma_lambda = kNaN, radius = kNaN;
  int samples = 1000, steps = 20;
  std::uint64_t seed = 1;
  auto* probe_step = app.add_subcommand("probe-step", "perturb reachable configurations and compare the robust step");
  probe_step->add_option("machine", machine_path, "machine description (JSON)")->required();
  probe_step->add_option("--tape", tape, "initial tape: JSON object or file");
  probe_step->add_option("--steps", steps, "configurations c_0..c_steps are probed")->capture_default_str();
  probe_step->add_option("--tau", tau, "tau: sharpness of the robust step")->capture_default_str();
  probe_step->add_option("--sigma-lambda", sigma_lambda, "lambda inside sigma_k; default 4k");
  probe_step->add_option("--radius", radius, "perturbation radius; default 1/(2k^2) - 1/(k lambda)");
  probe_step->add_option("--samples", samples, "perturbations per configuration")->capture_default_str();
  probe_step->add_option("--seed", seed, "random seed")->capture_default_str();

  OdeFlags sweep_flags;
  std::vector<int> horizons{2, 4, 6, 8};
  auto* sweep = app.add_subcommand("sweep", "simulate over several horizons and report sup norms");
  sweep_flags.attach(sweep, false);
  sweep->add_option("--horizons", horizons, "list of T")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInvalidInput;
  }

  try {
    if (*validate) return cmd_validate(machine_path);
    if (*oracle) return cmd_oracle(load(machine_path, tape), T, as_json);
    if (*constants) return cmd_constants(machine_path, S, T);
    if (*simulate) return cmd_simulate(ode, csv, verdicts);
    if (*compile) return cmd_compile(ode, out_path);
    if (*probe_helpers) return cmd_probe_helpers(helper, hp, from, to, count);
    if (*probe_step) return cmd_probe_step(machine_path, tape, steps, tau, sigma_lambda, radius, samples, seed);
    if (*sweep) return cmd_sweep(sweep_flags, horizons);
  } catch (const Exit& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const IntegrationError& e) {
    std::cerr << "integrator failure at t = " << e.time() << ": " << e.what() << "\n";
    return kIntegratorFailure;
  } catch (const DecodeAmbiguity& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kViolation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
  return 0;
}
