#include "gpac/pivp.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <limits>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace gpac {

using nlohmann::json;

namespace {

std::string number_text(double c) {
  std::ostringstream out;
  out.precision(17);
  out << c;
  return out.str();
}

// Round-trips a long double.
std::string decimal(long double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.21Lg", v);
  return buf;
}

long double parse_decimal(const nlohmann::json& v) {
  const std::string text = v.is_string() ? v.get<std::string>() : number_text(v.get<double>());
  char* end = nullptr;
  const long double out = std::strtold(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0') throw std::invalid_argument("bad number '" + text + "'");
  return out;
}

std::string wrap(const std::string& s) {
  return s.find_first_of(" +-*") == std::string::npos ? s : "(" + s + ")";
}

std::vector<std::string> prefixed(const std::vector<std::string>& names, const std::string& prefix) {
  std::vector<std::string> out;
  out.reserve(names.size());
  for (const auto& n : names) out.push_back(prefix + n);
  return out;
}

/// The derivative of f's output as a polynomial in the concatenated state,
/// where f's block starts at `offset`.
Polynomial output_derivative(const PivpSystem& f, std::uint32_t offset) {
  return f.rhs[f.output()].shifted(offset);
}

Polynomial output_variable(const PivpSystem& f, std::uint32_t offset) {
  return Polynomial::variable(static_cast<std::uint32_t>(f.output()) + offset);
}

PivpSystem concatenate(const PivpSystem& f, const PivpSystem& g) {
  PivpSystem out;
  const auto df = static_cast<std::uint32_t>(f.dimension());
  out.names = prefixed(f.names, "f.");
  for (const auto& n : prefixed(g.names, "g.")) out.names.push_back(n);
  out.rhs = f.rhs;
  for (const auto& p : g.rhs) out.rhs.push_back(p.shifted(df));
  out.t0 = f.t0;
  out.y0.resize(static_cast<Eigen::Index>(f.dimension() + g.dimension()));
  out.y0 << f.y0, g.y0;
  return out;
}

// Anchors g at f's t0 when they differ.
PivpSystem common_anchor(const PivpSystem& f, const PivpSystem& g) {
  if (f.t0 == g.t0) return g;
  try {
    return rebase(g, f.t0);
  } catch (const IntegrationError& e) {
    throw std::invalid_argument(std::string("incompatible anchors: ") + e.what());
  }
}

}  // namespace

SpaceBound SpaceBound::constant(double c) {
  return {number_text(c), [c](double) { return c; }};
}

SpaceBound bound_sum(const SpaceBound& f, const SpaceBound& g) {
  return {wrap(f.text) + " + " + wrap(g.text), [a = f.at, b = g.at](double t) { return a(t) + b(t); }};
}

SpaceBound bound_product(const SpaceBound& f, const SpaceBound& g) {
  return {"max(" + f.text + ", " + g.text + ", " + wrap(f.text) + " * " + wrap(g.text) + ")",
          [a = f.at, b = g.at](double t) {
            const double x = a(t), y = b(t);
            return std::max({x, y, x * y});
          }};
}

SpaceBound bound_compose(const SpaceBound& f, const SpaceBound& g) {
  std::string inner = f.text;
  // s_f is written in t; substitute the inner bound textually.
  std::string composed;
  for (std::size_t i = 0; i < inner.size(); ++i) {
    const bool standalone = inner[i] == 't' && (i == 0 || !std::isalnum(static_cast<unsigned char>(inner[i - 1]))) &&
                            (i + 1 == inner.size() || !std::isalnum(static_cast<unsigned char>(inner[i + 1])));
    composed += standalone ? "(" + g.text + ")" : std::string(1, inner[i]);
  }
  return {"max(" + g.text + ", " + composed + ")",
          [a = f.at, b = g.at](double t) {
            const double inner_bound = b(t);
            return std::max(inner_bound, a(inner_bound));
          }};
}

void PivpSystem::check() const {
  if (static_cast<std::size_t>(y0.size()) != rhs.size())
    throw std::invalid_argument("initial condition has " + std::to_string(y0.size()) + " entries, system has " +
                                std::to_string(rhs.size()));
  if (names.size() != rhs.size()) throw std::invalid_argument("one name per variable required");
  for (const auto& p : rhs)
    if (p.variable_bound() > rhs.size()) throw std::invalid_argument("polynomial references unknown variable");
  if (outputs.empty()) throw std::invalid_argument("no output component");
  for (auto o : outputs)
    if (o >= rhs.size()) throw std::invalid_argument("output index out of range");
  if (!bound.at) throw std::invalid_argument("space bound not evaluable");
}

PivpSystem pivp_elementary(std::string_view name, double c) {
  PivpSystem s;
  const auto v0 = Polynomial::variable(0);
  const auto v1 = Polynomial::variable(1);
  if (name == "sin" || name == "cos") {
    // (sin, cos)' = (cos, -sin); cos is the same pair read in the other order.
    const bool is_sin = name == "sin";
    s.names = is_sin ? std::vector<std::string>{"sin", "cos"} : std::vector<std::string>{"cos", "sin"};
    s.rhs = is_sin ? PolyVector{v1, -v0} : PolyVector{-v1, v0};
    s.y0 = StateVector<long double>(2);
    s.y0 << (is_sin ? 0.0L : 1.0L), (is_sin ? 1.0L : 0.0L);
    s.bound = SpaceBound::constant(1);
  } else if (name == "tanh") {
    s.names = {"tanh"};
    s.rhs = {Polynomial::constant(1) - v0 * v0};
    s.y0 = StateVector<long double>::Zero(1);
    s.bound = SpaceBound::constant(1);
  } else if (name == "exp") {
    // Not polynomially bounded; the bound is recorded as it is.
    s.names = {"exp"};
    s.rhs = {v0};
    s.y0 = StateVector<long double>::Ones(1);
    s.bound = {"exp(|t|)", [](double t) { return std::exp(std::abs(t)); }};
  } else if (name == "identity") {
    s.names = {"t"};
    s.rhs = {Polynomial::constant(1)};
    s.y0 = StateVector<long double>::Zero(1);
    s.bound = {"|t|", [](double t) { return std::abs(t); }};
  } else if (name == "constant") {
    s.names = {"c"};
    s.rhs = {Polynomial{}};
    s.y0 = StateVector<long double>::Constant(1, c);
    s.bound = SpaceBound::constant(std::abs(c));
  } else {
    throw std::invalid_argument("unknown elementary function '" + std::string(name) + "'");
  }
  return s;
}

PivpSystem pivp_sum(const PivpSystem& f, const PivpSystem& g_in, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
  const PivpSystem g = common_anchor(f, g_in);
  PivpSystem out = concatenate(f, g);
  const auto df = static_cast<std::uint32_t>(f.dimension());
  out.rhs.push_back(output_derivative(f, 0) + double(sign) * output_derivative(g, df));
  out.names.push_back(sign > 0 ? "f+g" : "f-g");
  const Eigen::Index n = out.y0.size();
  out.y0.conservativeResize(n + 1);
  out.y0[n] = f.y0[static_cast<Eigen::Index>(f.output())] + sign * g.y0[static_cast<Eigen::Index>(g.output())];
  out.outputs = {static_cast<std::size_t>(n)};
  out.bound = bound_sum(f.bound, g.bound);
  out.check();
  return out;
}

PivpSystem pivp_product(const PivpSystem& f, const PivpSystem& g_in) {
  const PivpSystem g = common_anchor(f, g_in);
  PivpSystem out = concatenate(f, g);
  const auto df = static_cast<std::uint32_t>(f.dimension());
  out.rhs.push_back(output_derivative(f, 0) * output_variable(g, df) +
                    output_variable(f, 0) * output_derivative(g, df));
  out.names.push_back("f*g");
  const Eigen::Index n = out.y0.size();
  out.y0.conservativeResize(n + 1);
  out.y0[n] = f.y0[static_cast<Eigen::Index>(f.output())] * g.y0[static_cast<Eigen::Index>(g.output())];
  out.outputs = {static_cast<std::size_t>(n)};
  out.bound = bound_product(f.bound, g.bound);
  out.check();
  return out;
}

namespace {

// g's block first, then a copy of f driven by u' = p(u) * inner_derivative.
PivpSystem chain(const PivpSystem& f, const PivpSystem& inner, const Polynomial& inner_derivative,
                 long double inner_at_t0, const SpaceBound& bound) {
  PivpSystem out;
  const auto dg = static_cast<std::uint32_t>(inner.dimension());
  out.names = prefixed(inner.names, "g.");
  for (const auto& n : prefixed(f.names, "f.")) out.names.push_back(n);
  out.rhs = inner.rhs;
  for (const auto& p : f.rhs) out.rhs.push_back(p.shifted(dg) * inner_derivative);
  out.t0 = inner.t0;
  StateVector<long double> start;
  try {
    start = state_at(f, static_cast<double>(inner_at_t0));
  } catch (const IntegrationError& e) {
    throw std::invalid_argument(std::string("cannot evaluate outer state at g(t0): ") + e.what());
  }
  out.y0.resize(static_cast<Eigen::Index>(dg + f.dimension()));
  out.y0 << inner.y0, start;
  out.outputs.clear();
  for (auto o : f.outputs) out.outputs.push_back(o + dg);
  out.bound = bound;
  out.check();
  return out;
}

}  // namespace

PivpSystem pivp_compose(const PivpSystem& f, const PivpSystem& g) {
  return chain(f, g, output_derivative(g, 0), g.y0[static_cast<Eigen::Index>(g.output())],
               bound_compose(f.bound, g.bound));
}

PivpSystem pivp_poly_precompose(const PivpSystem& f, const Polynomial& p, const PivpSystem& inner) {
  if (p.variable_bound() > inner.dimension())
    throw std::invalid_argument("polynomial references variables outside the inner system");
  // h = p(z), h' = sum_i dp/dz_i * z_i'
  Polynomial h_dot;
  for (std::uint32_t i = 0; i < p.variable_bound(); ++i) {
    const Polynomial dp = p.derivative(i);
    if (!dp.is_zero()) h_dot += dp * inner.rhs[i];
  }
  const long double h0 = p.eval<long double>(inner.y0);
  // |h(t)| <= sum |a_alpha| max(1, s_inner(t))^|alpha|
  const unsigned deg = p.degree();
  const double coeff_sum = p.coefficient_sum();
  SpaceBound p_bound{std::to_string(coeff_sum) + " * max(1, " + inner.bound.text + ")^" + std::to_string(deg),
                     [coeff_sum, deg, s = inner.bound.at](double t) {
                       return coeff_sum * std::pow(std::max(1.0, s(t)), double(deg));
                     }};
  return chain(f, inner, h_dot, h0, bound_compose(f.bound, p_bound));
}

PivpSystem pivp_project(const PivpSystem& g, const std::vector<std::size_t>& components) {
  PivpSystem out = g;
  out.outputs.clear();
  for (auto c : components) {
    if (c < 1 || c > g.outputs.size()) throw std::invalid_argument("projection index out of range");
    out.outputs.push_back(g.outputs[c - 1]);
  }
  // Projections are bounded by 0, so max(s_g, 0 o s_g) = s_g.
  out.check();
  return out;
}

StateVector<long double> state_at(const PivpSystem& sys, double t, const IntegratorOptions& opt) {
  if (t == sys.t0) return sys.y0;
  IntegratorOptions o = opt;
  o.rtol = std::min(o.rtol, 1e-12);
  o.atol = std::min(o.atol, 1e-12);
  return integrate_system<long double>(sys, t, {}, o).final_state;
}

PivpSystem rebase(const PivpSystem& sys, double t_new, const IntegratorOptions& opt) {
  PivpSystem out = sys;
  out.y0 = state_at(sys, t_new, opt);
  out.t0 = t_new;
  return out;
}

std::string to_json(const PivpSystem& sys, const std::string& extra_json) {
  json doc;
  doc["names"] = sys.names;
  doc["t0"] = sys.t0;
  json initial = json::array();
  for (Eigen::Index i = 0; i < sys.y0.size(); ++i) initial.push_back(decimal(sys.y0[i]));
  doc["initial"] = initial;
  doc["outputs"] = sys.outputs;
  doc["space_bound"] = sys.bound.text;
  json derivs = json::array();
  for (const auto& p : sys.rhs) {
    json terms = json::array();
    for (const auto& [mono, coeff] : p.terms()) {
      json exps = json::array();
      for (const auto& [var, power] : mono) exps.push_back({var, power});
      terms.push_back({{"coef", decimal(coeff)}, {"exps", exps}});
    }
    derivs.push_back(terms);
  }
  doc["derivatives"] = derivs;
  doc["meta"] = json::parse(extra_json);
  return doc.dump(1);
}

PivpSystem pivp_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("system document: ") + e.what());
  }
  try {
    PivpSystem s;
    s.names = doc.at("names").get<std::vector<std::string>>();
    s.t0 = doc.at("t0").get<double>();
    const auto& initial = doc.at("initial");
    s.y0.resize(static_cast<Eigen::Index>(initial.size()));
    for (std::size_t i = 0; i < initial.size(); ++i) s.y0[static_cast<Eigen::Index>(i)] = parse_decimal(initial[i]);
    s.outputs = doc.at("outputs").get<std::vector<std::size_t>>();
    for (const auto& terms : doc.at("derivatives")) {
      Polynomial p;
      for (const auto& term : terms) {
        Monomial m;
        for (const auto& e : term.at("exps"))
          m = multiply(m, {{e.at(0).get<std::uint32_t>(), e.at(1).get<std::uint32_t>()}});
        p.add_term(m, parse_decimal(term.at("coef")));
      }
      s.rhs.push_back(std::move(p));
    }
    const std::string bound = doc.at("space_bound").get<std::string>();
    char* end = nullptr;
    const double value = std::strtod(bound.c_str(), &end);
    if (end != bound.c_str() && *end == '\0')
      s.bound = SpaceBound::constant(value);
    else
      s.bound = {bound, [](double) { return std::numeric_limits<double>::infinity(); }};
    s.check();
    return s;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("system document: ") + e.what());
  }
}

}  // namespace gpac
