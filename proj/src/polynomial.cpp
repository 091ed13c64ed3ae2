#include "gpac/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gpac {

Monomial multiply(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() || j != b.end()) {
    if (j == b.end() || (i != a.end() && i->first < j->first)) {
      out.push_back(*i++);
    } else if (i == a.end() || j->first < i->first) {
      out.push_back(*j++);
    } else {
      out.emplace_back(i->first, i->second + j->second);
      ++i;
      ++j;
    }
  }
  return out;
}

unsigned total_degree(const Monomial& m) {
  unsigned d = 0;
  for (const auto& [var, power] : m) d += power;
  return d;
}

Polynomial Polynomial::constant(Coefficient c) {
  Polynomial p;
  p.add_term({}, c);
  return p;
}

Polynomial Polynomial::variable(std::uint32_t index, Coefficient coeff) {
  Polynomial p;
  p.add_term({{index, 1}}, coeff);
  return p;
}

void Polynomial::add_term(const Monomial& m, Coefficient coeff) {
  if (coeff == 0) return;
  auto [it, inserted] = terms_.emplace(m, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

unsigned Polynomial::degree() const {
  unsigned d = 0;
  for (const auto& [mono, coeff] : terms_) d = std::max(d, total_degree(mono));
  return d;
}

double Polynomial::coefficient_sum() const {
  double sum = 0;
  for (const auto& [mono, coeff] : terms_) sum += static_cast<double>(std::abs(coeff));
  return sum;
}

std::uint32_t Polynomial::variable_bound() const {
  std::uint32_t bound = 0;
  for (const auto& [mono, coeff] : terms_)
    for (const auto& [var, power] : mono) bound = std::max(bound, var + 1);
  return bound;
}

Polynomial Polynomial::derivative(std::uint32_t var) const {
  Polynomial out;
  for (const auto& [mono, coeff] : terms_) {
    auto it = std::find_if(mono.begin(), mono.end(), [&](const auto& f) { return f.first == var; });
    if (it == mono.end()) continue;
    Monomial reduced = mono;
    auto& factor = reduced[static_cast<std::size_t>(it - mono.begin())];
    const Coefficient scale = factor.second;
    if (--factor.second == 0) reduced.erase(reduced.begin() + (it - mono.begin()));
    out.add_term(reduced, coeff * scale);
  }
  return out;
}

Polynomial Polynomial::remap(const std::vector<std::uint32_t>& map) const {
  Polynomial out;
  for (const auto& [mono, coeff] : terms_) {
    Monomial renamed;
    for (const auto& [var, power] : mono) renamed = multiply(renamed, {{map.at(var), power}});
    out.add_term(renamed, coeff);
  }
  return out;
}

Polynomial Polynomial::shifted(std::uint32_t offset) const {
  Polynomial out;
  for (const auto& [mono, coeff] : terms_) {
    Monomial renamed = mono;
    for (auto& f : renamed) f.first += offset;
    out.terms_.emplace(std::move(renamed), coeff);
  }
  return out;
}

Polynomial Polynomial::substitute(std::uint32_t var, const Polynomial& replacement) const {
  Polynomial out;
  for (const auto& [mono, coeff] : terms_) {
    Monomial rest;
    std::uint32_t power = 0;
    for (const auto& f : mono) {
      if (f.first == var) power = f.second;
      else rest.push_back(f);
    }
    Polynomial term;
    term.add_term(rest, coeff);
    for (std::uint32_t p = 0; p < power; ++p) term = term * replacement;
    out += term;
  }
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  for (const auto& [mono, coeff] : other.terms_) add_term(mono, coeff);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  for (const auto& [mono, coeff] : other.terms_) add_term(mono, -coeff);
  return *this;
}

Polynomial& Polynomial::operator*=(Coefficient s) {
  if (s == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [mono, coeff] : terms_) coeff *= s;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) out.add_term(multiply(ma, mb), ca * cb);
  return out;
}

std::string Polynomial::to_string(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  out.precision(17);
  bool first = true;
  for (const auto& [mono, coeff] : terms_) {
    if (!first) out << (coeff < 0 ? " - " : " + ");
    else if (coeff < 0) out << "-";
    first = false;
    const Coefficient mag = std::abs(coeff);
    if (mag != 1 || mono.empty()) out << mag;
    bool lead = mag == 1;
    for (const auto& [var, power] : mono) {
      if (!lead) out << "*";
      lead = false;
      out << (var < names.size() ? names[var] : "y" + std::to_string(var));
      if (power > 1) out << "^" << power;
    }
  }
  return out.str();
}

unsigned degree(const PolyVector& p) {
  unsigned d = 0;
  for (const auto& c : p) d = std::max(d, c.degree());
  return d;
}

double coefficient_sum(const PolyVector& p) {
  double s = 0;
  for (const auto& c : p) s = std::max(s, c.coefficient_sum());
  return s;
}

PolyEvaluator::PolyEvaluator(const PolyVector& p) {
  std::uint32_t vars = 0;
  for (const auto& c : p) vars = std::max(vars, c.variable_bound());
  max_power_.assign(vars, 0);
  for (const auto& c : p)
    for (const auto& [mono, coeff] : c.terms())
      for (const auto& [var, power] : mono) max_power_[var] = std::max(max_power_[var], power);
  power_offset_.assign(vars, 0);
  for (std::uint32_t v = 0; v < vars; ++v) {
    power_offset_[v] = table_size_;
    table_size_ += max_power_[v];
  }
  row_start_.push_back(0);
  factor_start_.push_back(0);
  for (const auto& c : p) {
    for (const auto& [mono, coeff] : c.terms()) {
      coeffs_.push_back(coeff);
      for (const auto& [var, power] : mono) factors_.push_back({power_offset_[var] + power - 1});
      factor_start_.push_back(static_cast<std::uint32_t>(factors_.size()));
    }
    row_start_.push_back(static_cast<std::uint32_t>(coeffs_.size()));
  }
}

}  // namespace gpac
