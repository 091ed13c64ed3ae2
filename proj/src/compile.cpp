#include "gpac/compile.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace gpac {

namespace {

using ExactPoly = std::map<Monomial, Rational>;

ExactPoly exact_multiply(const ExactPoly& a, const ExactPoly& b) {
  ExactPoly out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) out[multiply(ma, mb)] += ca * cb;
  return out;
}

Polynomial rounded(const ExactPoly& p) {
  Polynomial out;
  for (const auto& [mono, coeff] : p) {
    if (coeff == 0) continue;
    const Coefficient c = coeff.convert_to<Coefficient>();
    if (!std::isfinite(c)) throw std::overflow_error("coefficient overflows");
    out.add_term(mono, c);
  }
  return out;
}

}  // namespace

Polynomial lagrange_polynomial(const InterpPoly& poly, const std::vector<std::uint32_t>& vars) {
  if (vars.size() != static_cast<std::size_t>(poly.dimension()))
    throw std::invalid_argument("one variable per axis required");
  const auto& axes = poly.axes();
  // basis[i][j] as an exact polynomial in vars[i]
  std::vector<std::vector<ExactPoly>> basis(axes.size());
  for (std::size_t i = 0; i < axes.size(); ++i) {
    for (std::size_t j = 0; j < axes[i].size(); ++j) {
      ExactPoly b;
      const auto coeffs = poly.basis_coefficients(static_cast<int>(i), static_cast<int>(j));
      for (std::size_t p = 0; p < coeffs.size(); ++p) {
        if (coeffs[p] == 0) continue;
        b[p == 0 ? Monomial{} : Monomial{{vars[i], static_cast<std::uint32_t>(p)}}] = coeffs[p];
      }
      basis[i].push_back(std::move(b));
    }
  }
  ExactPoly sum;
  std::vector<std::size_t> index(axes.size(), 0);
  for (std::size_t g = 0; g < poly.grid_size(); ++g) {
    if (poly.values()[g] != 0) {
      ExactPoly term{{Monomial{}, Rational(poly.values()[g])}};
      for (std::size_t i = 0; i < axes.size(); ++i) term = exact_multiply(term, basis[i][index[i]]);
      for (const auto& [mono, coeff] : term) sum[mono] += coeff;
    }
    for (std::size_t i = axes.size(); i-- > 0;) {
      if (++index[i] < axes[i].size()) break;
      index[i] = 0;
    }
  }
  return rounded(sum);
}

CompiledStep compile_step_robust(const StepModel& model, double tau, double sigma_lambda) {
  const int k = model.machine.base();
  CompiledStep out;
  out.k = k;
  out.tau = tau;
  out.sigma_lambda = sigma_lambda;
  out.names = {"x", "s", "y", "q"};

  // sigma_k(v + 1/(2k)) = sum_i (1 + tanh(c (v + 1/(2k) - i - 1))) / 2 with
  // c = (tau + ln k) * sigma_lambda and v = k x (resp. k y).
  const double c = (tau + std::log(double(k))) * sigma_lambda;
  if (!std::isfinite(c)) throw std::overflow_error("sharpness constant overflows");
  const double kd = k;
  for (std::uint32_t var : {0u, 2u}) {
    for (int i = 0; i < k; ++i) {
      const double shift = 1.0 / (2 * kd) - i - 1;
      out.aux_arguments.push_back(Polynomial::variable(var, c * kd) + Polynomial::constant(c * shift));
      out.names.push_back(std::string(var == 0 ? "vx" : "vy") + std::to_string(i));
    }
  }

  const auto aux = [&](std::uint32_t block, int i) {
    return Polynomial::variable(4 + block * static_cast<std::uint32_t>(k) + static_cast<std::uint32_t>(i));
  };
  Polynomial int_x = Polynomial::constant(kd / 2), int_y = Polynomial::constant(kd / 2);
  for (int i = 0; i < k; ++i) {
    int_x += 0.5 * aux(0, i);
    int_y += 0.5 * aux(1, i);
  }

  // Interpolants over (q, s) = variables (3, 1).
  const Polynomial L1 = lagrange_polynomial(model.next_state, {3, 1});
  const Polynomial L2 = lagrange_polynomial(model.write, {3, 1});
  const Polynomial L3 = lagrange_polynomial(model.move, {3, 1});
  const Polynomial one = Polynomial::constant(1);
  const Polynomial x = Polynomial::variable(0), y = Polynomial::variable(2);
  const auto pick = [&](const Polynomial& left, const Polynomial& right) {
    return (one - L3) * left + L3 * right;
  };
  out.outputs = {pick(kd * x - int_x, (1 / kd) * (x + L2)),
                 pick(int_x, int_y),
                 pick((1 / kd) * (y + L2), kd * y - int_y),
                 L1};
  return out;
}

CompiledIterate compile_iterate(const StepModel& model, const IterateParams& params, const RationalConfig& start) {
  if (!(params.iterate_lambda >= 1)) throw std::invalid_argument("iterate lambda must be at least 1");
  if (!(params.mu >= 0)) throw std::invalid_argument("mu must be non-negative");
  using L = IterateLayout;
  CompiledIterate out;
  out.params = params;
  out.step = compile_step_robust(model, params.tau, params.sigma_lambda);
  const CompiledStep& step = out.step;
  const double A = params.A(), B = params.B();
  const double two_pi = 2 * std::numbers::pi;
  if (!std::isfinite(A)) throw std::overflow_error("A overflows");

  auto v = [](Eigen::Index i) { return Polynomial::variable(static_cast<std::uint32_t>(i)); };
  const Polynomial one = Polynomial::constant(1);
  PivpSystem& sys = out.system;
  sys.names = {"t", "sin2pit", "cos2pit", "theta_z", "theta_u"};
  for (int i = 1; i <= 4; ++i) sys.names.push_back("z" + std::to_string(i));
  for (int i = 1; i <= 4; ++i) sys.names.push_back("u" + std::to_string(i));
  for (std::size_t i = 4; i < step.names.size(); ++i) {
    sys.names.push_back(step.names[i] + "_p");
    sys.names.push_back(step.names[i] + "_r");
  }

  const std::size_t dim = static_cast<std::size_t>(L::aux) + 2 * step.aux_count();
  sys.rhs.assign(dim, Polynomial{});
  sys.rhs[L::time] = one;
  sys.rhs[L::sin] = two_pi * v(L::cos);
  sys.rhs[L::cos] = -two_pi * v(L::sin);
  // theta(t, B) = exp(-B (1 - S)^2), theta(t - 1/2, B) = exp(-B (1 + S)^2)
  sys.rhs[L::theta_z] = (2 * two_pi * B) * v(L::theta_z) * (one - v(L::sin)) * v(L::cos);
  sys.rhs[L::theta_u] = (-2 * two_pi * B) * v(L::theta_u) * (one + v(L::sin)) * v(L::cos);

  // F over the iteration state: (x, s, y, q) -> u block, tanh term i ->
  // p_i - r_i.
  const auto p_index = [](std::size_t i) { return L::aux + 2 * static_cast<Eigen::Index>(i); };
  std::vector<std::uint32_t> remap(4 + step.aux_count());
  for (std::uint32_t i = 0; i < 4; ++i) remap[i] = static_cast<std::uint32_t>(L::u) + i;
  for (std::size_t i = 0; i < step.aux_count(); ++i) remap[4 + i] = static_cast<std::uint32_t>(p_index(i));
  PolyVector u_dot(4);
  for (Eigen::Index i = 0; i < 4; ++i) {
    Polynomial F = step.outputs[static_cast<std::size_t>(i)].remap(remap);
    for (std::size_t j = 0; j < step.aux_count(); ++j)
      F = F.substitute(static_cast<std::uint32_t>(p_index(j)), v(p_index(j)) - v(p_index(j) + 1));
    sys.rhs[static_cast<std::size_t>(L::z + i)] = A * v(L::theta_z) * (F - v(L::z + i));
    u_dot[static_cast<std::size_t>(i)] = A * v(L::theta_u) * (v(L::z + i) - v(L::u + i));
    sys.rhs[static_cast<std::size_t>(L::u + i)] = u_dot[static_cast<std::size_t>(i)];
  }
  // v = tanh(w(u)) gives p' = 2 p r w', r' = -2 p r w' with
  // w' = sum_j dw/du_j u_j'.
  for (std::size_t i = 0; i < step.aux_count(); ++i) {
    const Polynomial w = step.aux_arguments[i].remap(remap);
    Polynomial w_dot;
    for (Eigen::Index j = 0; j < 4; ++j) {
      const Polynomial dw = w.derivative(static_cast<std::uint32_t>(L::u + j));
      if (!dw.is_zero()) w_dot += dw * u_dot[static_cast<std::size_t>(j)];
    }
    const Eigen::Index a = p_index(i);
    const Polynomial flow = 2.0 * v(a) * v(a + 1) * w_dot;
    sys.rhs[static_cast<std::size_t>(a)] = flow;
    sys.rhs[static_cast<std::size_t>(a + 1)] = -flow;
  }

  sys.t0 = 0;
  RealConfig4<long double> c0;
  c0 << start.x.convert_to<long double>(), static_cast<long double>(start.s), start.y.convert_to<long double>(),
      static_cast<long double>(start.q);
  sys.y0 = out.lift<long double>(0.0L, c0, c0);
  sys.outputs = {static_cast<std::size_t>(L::u), static_cast<std::size_t>(L::u + 1),
                 static_cast<std::size_t>(L::u + 2), static_cast<std::size_t>(L::u + 3)};
  const double M = std::exp(params.mu);
  // Clock, sin/cos and theta stay in [-1, 1]; z and u are monitored
  // against e^mu; t itself grows linearly.
  std::ostringstream text;
  text.precision(17);
  text << "max(|t|, " << M << ")";
  sys.bound = {text.str(), [M](double t) { return std::max(std::abs(t), M); }};
  sys.check();
  return out;
}

}  // namespace gpac
