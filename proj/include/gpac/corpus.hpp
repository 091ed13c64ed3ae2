#pragma once

#include "gpac/turing.hpp"

#include <vector>

namespace gpac::corpus {

struct Workload {
  TuringMachine machine;
  Configuration start;
};

/// Increments a binary number forever. Bits live on the left tape (least
/// significant next to the head), blank doubles as bit 0 and symbol 2 marks
/// the right end. States: 0 = carry, 1 = return to the marker.
Workload binary_counter();

/// 1^a 2 1^b  ->  1^(a+b): overwrite the separator, then erase the last 1.
Workload unary_adder();

/// Accepts palindromes over {1,2}; state 6 accepts, state 7 rejects.
Workload palindrome_checker();

std::vector<Workload> all();

}  // namespace gpac::corpus
