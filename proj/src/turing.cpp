#include "gpac/turing.hpp"

#include <algorithm>
#include <sstream>

namespace gpac {

TuringMachine::TuringMachine(int m, int k, int q0, std::vector<int> halting,
                             std::vector<Transition> table, std::string name)
    : m_(m),
      k_(k),
      q0_(q0),
      halting_(std::move(halting)),
      table_(std::move(table)),
      name_(std::move(name)) {
  if (m_ < 1) throw SemanticError("state count", "m must be at least 1");
  if (k_ < 2) throw SemanticError("alphabet size", "k must be at least 2");
  if (q0_ < 0 || q0_ >= m_)
    throw SemanticError("initial state", "q0 = " + std::to_string(q0_) + " is not in Q");
  if (table_.size() != static_cast<std::size_t>(m_ * symbols()))
    throw SemanticError("delta not total",
                        "expected " + std::to_string(m_ * symbols()) + " entries");
  std::sort(halting_.begin(), halting_.end());
  halting_.erase(std::unique(halting_.begin(), halting_.end()), halting_.end());
  for (int h : halting_) {
    if (h < 0 || h >= m_)
      throw SemanticError("halting state", std::to_string(h) + " is not in Q");
  }
  for (int q = 0; q < m_; ++q) {
    for (int s = 0; s < symbols(); ++s) {
      const Transition& t = delta(q, s);
      if (t.next_state < 0 || t.next_state >= m_)
        throw SemanticError("delta range", "next state out of Q at (" +
                                               std::to_string(q) + "," + std::to_string(s) + ")");
      if (t.write < 0 || t.write >= symbols())
        throw SemanticError("delta range", "written symbol out of alphabet at (" +
                                               std::to_string(q) + "," + std::to_string(s) + ")");
      if (is_halting(q) && (t.next_state != q || t.write != s))
        throw SemanticError("halting state must loop",
                            "delta(" + std::to_string(q) + "," + std::to_string(s) +
                                ") leaves the halting state or rewrites the symbol");
    }
  }
}

bool TuringMachine::is_halting(int q) const {
  return std::binary_search(halting_.begin(), halting_.end(), q);
}

namespace {

void trim(std::vector<int>& digits) {
  while (!digits.empty() && digits.back() == 0) digits.pop_back();
}

}  // namespace

void Configuration::canonicalize() {
  trim(left);
  trim(right);
}

Configuration canonical(Configuration c) {
  c.canonicalize();
  return c;
}

void validate(const Configuration& c, const TuringMachine& machine) {
  auto check = [&](int digit) {
    if (digit < 0 || digit >= machine.symbols())
      throw EncodingError("digit " + std::to_string(digit) + " outside alphabet {0.." +
                          std::to_string(machine.symbols() - 1) + "}");
  };
  for (int d : c.left) check(d);
  for (int d : c.right) check(d);
  check(c.head);
  if (c.state < 0 || c.state >= machine.states())
    throw EncodingError("state " + std::to_string(c.state) + " outside Q");
}

Rational encode_tape(std::span<const int> digits, int k) {
  // Horner from the far end: 0.x = (x0 + (x1 + ...)/k)/k.
  Rational value = 0;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    if (*it < 0 || *it > k - 2)
      throw EncodingError("digit " + std::to_string(*it) + " outside {0.." +
                          std::to_string(k - 2) + "}");
    value = (value + *it) / k;
  }
  return value;
}

std::vector<int> decode_tape(const Rational& value, int k, int max_digits) {
  if (value < 0 || value >= 1) throw EncodingError("tape value outside [0,1)");
  std::vector<int> digits;
  Rational rest = value;
  while (rest != 0) {
    if (static_cast<int>(digits.size()) >= max_digits)
      throw EncodingError("expansion does not terminate within " +
                          std::to_string(max_digits) + " digits");
    rest *= k;
    const BigInt d = floor_of(rest);
    if (d == k - 1) throw EncodingError("reserved digit k-1 in tape expansion");
    digits.push_back(static_cast<int>(d));
    rest -= Rational(d);
  }
  return digits;
}

RationalConfig encode(const Configuration& c, const TuringMachine& machine) {
  validate(c, machine);
  const int k = machine.base();
  return {encode_tape(c.left, k), c.head, encode_tape(c.right, k), c.state};
}

Configuration decode(const RationalConfig& rc, const TuringMachine& machine,
                     int max_digits) {
  const int k = machine.base();
  Configuration c{decode_tape(rc.x, k, max_digits), rc.s,
                  decode_tape(rc.y, k, max_digits), rc.q};
  validate(c, machine);
  return c;
}

Configuration step_exact(const Configuration& c, const TuringMachine& machine) {
  const Transition& t = machine.delta(c.state, c.head);
  Configuration next;
  next.state = t.next_state;
  auto& from = t.dir == Direction::Left ? c.left : c.right;
  auto& to = t.dir == Direction::Left ? next.right : next.left;
  auto& stay = t.dir == Direction::Left ? next.left : next.right;

  next.head = from.empty() ? 0 : from.front();
  stay.assign(from.size() > 1 ? from.begin() + 1 : from.end(), from.end());
  const auto& other = t.dir == Direction::Left ? c.right : c.left;
  to.reserve(other.size() + 1);
  to.push_back(t.write);
  to.insert(to.end(), other.begin(), other.end());
  next.canonicalize();
  return next;
}

std::vector<Configuration> run(const TuringMachine& machine, const Configuration& c0,
                               int n) {
  validate(c0, machine);
  std::vector<Configuration> trace;
  trace.reserve(static_cast<std::size_t>(n) + 1);
  trace.push_back(canonical(c0));
  for (int i = 0; i < n; ++i) trace.push_back(step_exact(trace.back(), machine));
  return trace;
}

std::string to_string(const Configuration& c) {
  std::ostringstream out;
  // Left tape printed far-to-near so the line reads like the physical tape.
  out << "q" << c.state << " ";
  for (auto it = c.left.rbegin(); it != c.left.rend(); ++it) out << *it;
  out << "[" << c.head << "]";
  for (int d : c.right) out << d;
  return out.str();
}

}  // namespace gpac
