#include "gpac/corpus.hpp"

namespace gpac::corpus {

namespace {

constexpr Direction L = Direction::Left;
constexpr Direction R = Direction::Right;

}  // namespace

Workload binary_counter() {
  std::vector<Transition> table = {
      {1, 1, R}, {0, 0, L}, {0, 2, L},  // carry
      {1, 0, R}, {1, 1, R}, {0, 2, L},  // return
  };
  TuringMachine machine(2, 4, 1, {}, std::move(table), "binary-counter");
  return {machine, Configuration{{}, 2, {}, 1}};
}

Workload unary_adder() {
  std::vector<Transition> table = {
      {1, 0, L}, {0, 1, R}, {0, 1, R},  // scan right, fill the separator
      {2, 0, L}, {2, 0, L}, {2, 2, L},  // erase the last 1
      {2, 0, L}, {2, 1, L}, {2, 2, L},  // halt
  };
  TuringMachine machine(3, 4, 0, {2}, std::move(table), "unary-adder");
  return {machine, Configuration{{}, 1, {1, 2, 1, 1, 1}, 0}};
}

Workload palindrome_checker() {
  std::vector<Transition> table = {
      {6, 0, R}, {1, 0, R}, {2, 0, R},  // 0: take the leftmost symbol
      {3, 0, L}, {1, 1, R}, {1, 2, R},  // 1: carry 1 to the right end
      {4, 0, L}, {2, 1, R}, {2, 2, R},  // 2: carry 2 to the right end
      {6, 0, R}, {5, 0, L}, {7, 2, R},  // 3: rightmost must be 1
      {6, 0, R}, {7, 1, R}, {5, 0, L},  // 4: rightmost must be 2
      {0, 0, R}, {5, 1, L}, {5, 2, L},  // 5: walk back
      {6, 0, R}, {6, 1, R}, {6, 2, R},  // 6: accept
      {7, 0, R}, {7, 1, R}, {7, 2, R},  // 7: reject
  };
  TuringMachine machine(8, 4, 0, {6, 7}, std::move(table), "palindrome-checker");
  return {machine, Configuration{{}, 1, {2, 1}, 0}};
}

std::vector<Workload> all() { return {binary_counter(), unary_adder(), palindrome_checker()}; }

}  // namespace gpac::corpus
