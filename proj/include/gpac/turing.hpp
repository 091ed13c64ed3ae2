#pragma once

#include "gpac/rational.hpp"

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gpac {

/// Machine-description errors. SyntaxError carries the byte offset of the
/// failure; SemanticError names the violated invariant.
class MachineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public MachineError {
 public:
  SyntaxError(const std::string& what, std::size_t position)
      : MachineError(what), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class SemanticError : public MachineError {
 public:
  SemanticError(std::string invariant, const std::string& detail)
      : MachineError(invariant + ": " + detail), invariant_(std::move(invariant)) {}
  const std::string& invariant() const { return invariant_; }

 private:
  std::string invariant_;
};

/// Raised by the rational codec (digit out of range, non-terminating
/// expansion, reserved digit k-1).
class EncodingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Direction : int { Left = 0, Right = 1 };

struct Transition {
  int next_state = 0;
  int write = 0;
  Direction dir = Direction::Left;

  bool operator==(const Transition&) const = default;
};

/// Deterministic single-tape machine with Q = {0..m-1}, tape alphabet
/// {0..k-2} and blank 0. Digit k-1 never appears on the tape, which keeps
/// every encoded tape inside [0, (k-1)/k].
class TuringMachine {
 public:
  /// `table` is indexed by q * (k - 1) + s. Throws SemanticError when an
  /// invariant does not hold.
  TuringMachine(int m, int k, int q0, std::vector<int> halting,
                std::vector<Transition> table, std::string name = {});

  int states() const { return m_; }
  int base() const { return k_; }
  int symbols() const { return k_ - 1; }
  int initial_state() const { return q0_; }
  const std::vector<int>& halting() const { return halting_; }
  const std::string& name() const { return name_; }

  const Transition& delta(int q, int s) const {
    return table_[static_cast<std::size_t>(q * symbols() + s)];
  }
  bool is_halting(int q) const;

  bool operator==(const TuringMachine&) const = default;

 private:
  int m_;
  int k_;
  int q0_;
  std::vector<int> halting_;
  std::vector<Transition> table_;
  std::string name_;
};

/// Tape around the head: left[0] and right[0] are the cells adjacent to
/// the head. Canonical form has no trailing blanks on either side.
struct Configuration {
  std::vector<int> left;
  int head = 0;
  std::vector<int> right;
  int state = 0;

  void canonicalize();
  bool operator==(const Configuration&) const = default;
};

Configuration canonical(Configuration c);

/// Throws EncodingError if a digit or the state is outside the machine's
/// ranges.
void validate(const Configuration& c, const TuringMachine& machine);

/// The exact encoding (0.x, s, 0.y, q).
struct RationalConfig {
  Rational x;
  int s = 0;
  Rational y;
  int q = 0;

  bool operator==(const RationalConfig&) const = default;
};

Rational encode_tape(std::span<const int> digits, int k);
std::vector<int> decode_tape(const Rational& value, int k, int max_digits);

RationalConfig encode(const Configuration& c, const TuringMachine& machine);
Configuration decode(const RationalConfig& rc, const TuringMachine& machine,
                     int max_digits);

Configuration step_exact(const Configuration& c, const TuringMachine& machine);

/// c0 .. cn, with c_{i+1} = step_exact(c_i).
std::vector<Configuration> run(const TuringMachine& machine,
                               const Configuration& c0, int n);

std::string to_string(const Configuration& c);

}  // namespace gpac
