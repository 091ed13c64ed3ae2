#include "gpac/corpus.hpp"
#include "gpac/machine_io.hpp"
#include "gpac/turing.hpp"

#include <doctest.h>

#include <map>
#include <random>

using namespace gpac;

namespace {

// Reference interpreter on an absolute-position tape, kept deliberately
// unlike the library's left/right stack representation.
struct FlatTape {
  std::map<long, int> cells;
  long head = 0;
  int state = 0;

  static FlatTape from(const Configuration& c) {
    FlatTape t;
    for (std::size_t i = 0; i < c.left.size(); ++i) t.cells[-1 - long(i)] = c.left[i];
    t.cells[0] = c.head;
    for (std::size_t i = 0; i < c.right.size(); ++i) t.cells[1 + long(i)] = c.right[i];
    t.state = c.state;
    return t;
  }

  int read(long p) const {
    auto it = cells.find(p);
    return it == cells.end() ? 0 : it->second;
  }

  void step(const TuringMachine& m) {
    const Transition& tr = m.delta(state, read(head));
    cells[head] = tr.write;
    head += tr.dir == Direction::Right ? 1 : -1;
    state = tr.next_state;
  }

  Configuration view() const {
    Configuration c;
    c.head = read(head);
    c.state = state;
    long lo = head, hi = head;
    for (const auto& [p, v] : cells) {
      if (v == 0) continue;
      lo = std::min(lo, p);
      hi = std::max(hi, p);
    }
    for (long p = head - 1; p >= lo; --p) c.left.push_back(read(p));
    for (long p = head + 1; p <= hi; ++p) c.right.push_back(read(p));
    c.canonicalize();
    return c;
  }
};

// Value of a tape read as a base-k fraction, computed with integer
// arithmetic only.
Rational tape_fraction(const std::vector<int>& digits, int k) {
  BigInt num = 0, den = 1;
  for (int d : digits) {
    num = num * k + d;
    den *= k;
  }
  return Rational(num, den);
}

const char* kCounterDoc = R"({
  "name": "tiny", "m": 2, "k": 3, "q0": 0, "halting": [1],
  "delta": [
    {"q": 0, "s": 0, "q2": 1, "s2": 1, "dir": "R"},
    {"q": 0, "s": 1, "q2": 0, "s2": 0, "dir": "L"},
    {"q": 1, "s": 0, "q2": 1, "s2": 0, "dir": "L"},
    {"q": 1, "s": 1, "q2": 1, "s2": 1, "dir": "R"}
  ]})";

}  // namespace

TEST_CASE("encode follows the base-k digit sum") {
  const TuringMachine m4 = parse_machine(R"({"m":1,"k":4,"q0":0,"halting":[0],"delta":[
    {"q":0,"s":0,"q2":0,"s2":0,"dir":"L"},{"q":0,"s":1,"q2":0,"s2":1,"dir":"L"},{"q":0,"s":2,"q2":0,"s2":2,"dir":"L"}]})");
  Configuration c{{1, 2}, 0, {}, 0};
  CHECK(encode(c, m4).x == Rational(3, 8));
  CHECK(encode(Configuration{}, m4).x == 0);

  const TuringMachine m3 = parse_machine(kCounterDoc);
  const Rational x = encode(Configuration{{1}, 0, {}, 0}, m3).x;
  CHECK(x == Rational(1, 3));
  CHECK(x <= Rational(2, 3));

  CHECK_THROWS_AS(encode(Configuration{{3}, 0, {}, 0}, m4), EncodingError);
}

TEST_CASE("decode inverts encode and rejects bad expansions") {
  CHECK(decode_tape(Rational(3, 8), 4, 64) == std::vector<int>{1, 2});
  CHECK(decode_tape(Rational(0), 4, 64).empty());
  CHECK_THROWS_AS(decode_tape(Rational(1, 3), 4, 64), EncodingError);
  // 3/4 is the single digit 3 = k - 1, reserved.
  CHECK_THROWS_AS(decode_tape(Rational(3, 4), 4, 64), EncodingError);
}

TEST_CASE("round trip over random configurations") {
  std::mt19937_64 rng(7);
  for (int k : {2, 3, 4, 7}) {
    std::vector<Transition> table;
    for (int s = 0; s < k - 1; ++s) table.push_back({0, s, Direction::Left});
    const TuringMachine m(1, k, 0, {0}, table);
    std::uniform_int_distribution<int> digit(0, k - 2), len(0, 12);
    for (int trial = 0; trial < 500; ++trial) {
      Configuration c;
      for (int i = len(rng); i > 0; --i) c.left.push_back(digit(rng));
      for (int i = len(rng); i > 0; --i) c.right.push_back(digit(rng));
      c.head = digit(rng);
      c = canonical(c);
      const RationalConfig rc = encode(c, m);
      CHECK(rc.x == tape_fraction(c.left, k));
      CHECK(rc.y == tape_fraction(c.right, k));
      CHECK(decode(rc, m, 64) == c);
    }
  }
}

TEST_CASE("interpreter agrees with an independent flat-tape interpreter") {
  for (const auto& w : corpus::all()) {
    const auto trace = run(w.machine, w.start, 200);
    REQUIRE(trace.size() == 201);
    FlatTape flat = FlatTape::from(w.start);
    for (std::size_t n = 0; n < trace.size(); ++n) {
      INFO(w.machine.name() << " n=" << n);
      CHECK(trace[n] == flat.view());
      // encoded tapes stay in [0, (k-1)/k]
      const RationalConfig rc = encode(trace[n], w.machine);
      const Rational top(w.machine.base() - 1, w.machine.base());
      CHECK((rc.x >= 0 && rc.x <= top && rc.y >= 0 && rc.y <= top));
      flat.step(w.machine);
    }
    CHECK(run(w.machine, w.start, 200) == trace);
  }
}

TEST_CASE("step_exact on small cases") {
  const TuringMachine m = parse_machine(kCounterDoc);
  // one left symbol, move L: the head reads it and the left tape empties
  Configuration c{{1}, 1, {}, 0};
  const Configuration next = step_exact(c, m);
  CHECK(next.left.empty());
  CHECK(next.head == 1);
  CHECK(canonical(next).right.empty());  // the written 0 is a trailing blank
  // blank tape, move R: head reads blank
  const Configuration r = step_exact(Configuration{{}, 0, {}, 0}, m);
  CHECK(r.head == 0);
  CHECK(r.left == std::vector<int>{1});
  CHECK(r.state == 1);
  CHECK(run(m, c, 0) == std::vector<Configuration>{c});
}

TEST_CASE("halting states absorb") {
  for (const auto& w : corpus::all()) {
    bool halted = false;
    int halt_state = -1;
    for (const auto& c : run(w.machine, w.start, 200)) {
      if (halted) CHECK(c.state == halt_state);
      if (w.machine.is_halting(c.state)) {
        halted = true;
        halt_state = c.state;
      }
    }
  }
}

TEST_CASE("binary counter counts") {
  const auto w = corpus::binary_counter();
  // Bits sit on the left tape, least significant next to the head; each
  // time the machine stands on the marker in the return state the tape
  // holds the next integer.
  std::vector<long> values;
  for (const auto& c : run(w.machine, w.start, 400)) {
    if (c.state != 1 || c.head != 2) continue;
    long v = 0;
    for (std::size_t i = c.left.size(); i-- > 0;) v = 2 * v + c.left[i];
    values.push_back(v);
  }
  REQUIRE(values.size() > 8);
  for (std::size_t i = 0; i < values.size(); ++i) CHECK(values[i] == long(i));
}

TEST_CASE("palindrome checker and adder outcomes") {
  const auto p = corpus::palindrome_checker();
  CHECK(run(p.machine, p.start, 40).back().state == 6);  // 121 accepted
  Configuration no{{}, 1, {2}, 0};                      // 12 rejected
  CHECK(run(p.machine, no, 40).back().state == 7);

  const auto a = corpus::unary_adder();
  const Configuration end = run(a.machine, a.start, 40).back();
  CHECK(end.state == 2);
  std::vector<int> tape(end.left.rbegin(), end.left.rend());
  tape.push_back(end.head);
  tape.insert(tape.end(), end.right.begin(), end.right.end());
  CHECK(std::count(tape.begin(), tape.end(), 1) == 5);  // 1 + 4 ones
  CHECK(std::count(tape.begin(), tape.end(), 2) == 0);
}

TEST_CASE("machine documents") {
  const TuringMachine m = parse_machine(kCounterDoc);
  CHECK(m.states() == 2);
  CHECK(parse_machine(serialize_machine(m)) == m);

  // halting state 1 moved to state 0
  std::string leaving = kCounterDoc;
  leaving.replace(leaving.find(R"({"q": 1, "s": 0, "q2": 1)"), 24, R"({"q": 1, "s": 0, "q2": 0)");
  CHECK_THROWS_WITH_AS(parse_machine(leaving), doctest::Contains("halting state must loop"), SemanticError);

  std::string missing = kCounterDoc;
  const auto row = missing.find(R"({"q": 1, "s": 1)");
  missing.erase(missing.rfind(',', row), missing.find('}', row) + 1 - missing.rfind(',', row));
  CHECK_THROWS_WITH_AS(parse_machine(missing), doctest::Contains("delta not total"), SemanticError);

  CHECK_THROWS_AS(parse_machine(R"({"m":1,"k":1,"q0":0,"halting":[],"delta":[]})"), SemanticError);
  try {
    parse_machine(R"({"m": 1, "k": })");
    FAIL("no syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.position() > 0);
  }
}
