// Collatz tag system: encode, phase traces, oracle cross-checks, sweeps.
#include <doctest.h>

#include <cstdint>
#include <limits>
#include <vector>

#include "support/naive.hpp"
#include "taglab/collatz.hpp"

using namespace taglab;

namespace {

// independently walks the accelerated map with 128-bit arithmetic and
// returns the full phase chain n, f(n), ..., 1
std::vector<std::uint64_t> naive_chain(std::uint64_t n) {
  std::vector<std::uint64_t> out{n};
  while (n != 1) {
    n = naive::collatz_shortcut(n);
    out.push_back(n);
  }
  return out;
}

bool all_zero(const naive::SymVec& w) {
  for (Symbol s : w)
    if (s != 0) return false;
  return !w.empty();
}

}  // namespace

TEST_CASE("collatz system shape and compact description") {
  TagSystem sys = collatz_system();
  CHECK(sys.v == 2);
  CHECK(sys.mu() == 3);
  REQUIRE(sys.appendants.size() == 3);
  CHECK(sys.appendants[0] == std::vector<Symbol>{1, 2});
  CHECK(sys.appendants[1] == std::vector<Symbol>{0});
  CHECK(sys.appendants[2] == std::vector<Symbol>{0, 0, 0});
  CHECK(sys.serialize() == "v=2\n0 -> 12\n1 -> 0\n2 -> 000\n");
  // the whole rule table fits in fewer characters than the 30 transition
  // fields of a five-state two-symbol machine table
  CHECK(sys.serialize().size() < 30);
  CHECK(sys.serialize().size() == 28);
}

TEST_CASE("collatz encode is the unary a0 power") {
  CHECK(collatz_encode(1).str(3) == "0");
  CHECK(collatz_encode(2).str(3) == "00");
  CHECK(collatz_encode(7).str(3) == "0000000");
  CHECK(collatz_encode(100).size() == 100);
  Word w = collatz_encode(100);
  for (std::size_t i = 0; i < w.size(); ++i) CHECK(w[i] == 0);
}

TEST_CASE("integer oracle computes the accelerated map") {
  CHECK(shortcut_collatz_oracle(1) == 2);  // (3*1+1)/2
  CHECK(shortcut_collatz_oracle(2) == 1);
  CHECK(shortcut_collatz_oracle(3) == 5);
  CHECK(shortcut_collatz_oracle(4) == 2);
  CHECK(shortcut_collatz_oracle(5) == 8);
  CHECK(shortcut_collatz_oracle(6) == 3);
  CHECK(shortcut_collatz_oracle(7) == 11);
  for (std::uint64_t n = 1; n <= 5000; ++n)
    CHECK(shortcut_collatz_oracle(n) == naive::collatz_shortcut(n));
}

TEST_CASE("integer oracle domain edges") {
  CHECK_THROWS_AS(shortcut_collatz_oracle(0), PreconditionError);
  // largest odd value whose image still fits in 64 bits
  CHECK(shortcut_collatz_oracle(6148914691236517203ull) == 9223372036854775805ull);
  CHECK_THROWS_AS(shortcut_collatz_oracle(6148914691236517205ull), OverflowError);
  CHECK_THROWS_AS(shortcut_collatz_oracle(std::numeric_limits<std::uint64_t>::max()),
                  OverflowError);
  // even values halve without ever overflowing
  CHECK(shortcut_collatz_oracle(1ull << 63) == 1ull << 62);
}

TEST_CASE("trace for n=1 is immediate") {
  CollatzTrace t = run_collatz(1, 100, RunBudget{1000, 1000});
  CHECK(t.n0 == 1);
  CHECK(t.verdict == CollatzVerdict::reached_one);
  CHECK(t.phases == std::vector<std::uint64_t>{1});
  CHECK(t.tag_steps == 0);
  CHECK(t.max_word_length == 1);
}

TEST_CASE("trace for n=2 matches the hand run") {
  // 00 -> 12 -> 0: two tag steps, one halving phase
  CollatzTrace t = run_collatz(2, 100, RunBudget{1000, 1000});
  CHECK(t.verdict == CollatzVerdict::reached_one);
  CHECK(t.phases == std::vector<std::uint64_t>{2, 1});
  CHECK(t.tag_steps == 2);
  CHECK(t.max_word_length == 2);
}

TEST_CASE("trace for n=3 matches the hand run") {
  // 000 -> 012 -> 212 -> 2000 -> 00000 after four steps, then onward to 1
  CollatzTrace t = run_collatz(3, 100, RunBudget{1000, 1000});
  CHECK(t.verdict == CollatzVerdict::reached_one);
  CHECK(t.phases == std::vector<std::uint64_t>{3, 5, 8, 4, 2, 1});
  CHECK(t.tag_steps == 24);
  CHECK(t.max_word_length == 8);
}

TEST_CASE("trace for n=7 covers a longer descent") {
  CollatzTrace t = run_collatz(7, 1000, RunBudget{100'000, 100'000});
  CHECK(t.verdict == CollatzVerdict::reached_one);
  CHECK(t.phases == std::vector<std::uint64_t>{7, 11, 17, 26, 13, 20, 10, 5, 8, 4, 2, 1});
  CHECK(t.tag_steps == 128);
  CHECK(t.max_word_length == 26);
}

TEST_CASE("trace for n=27 reaches the known peak") {
  CollatzTrace t = run_collatz(27, 100'000, RunBudget{10'000'000, 1'000'000});
  CHECK(t.verdict == CollatzVerdict::reached_one);
  REQUIRE(t.phases.size() == 71);
  CHECK(t.phases.front() == 27);
  CHECK(t.phases.back() == 1);
  CHECK(t.phases[1] == 41);
  CHECK(t.phases[2] == 62);
  CHECK(t.tag_steps == 40656);
  CHECK(t.max_word_length == 4616);
  CHECK(t.phases == naive_chain(27));
}

TEST_CASE("phase chains equal the independent arithmetic walk") {
  for (std::uint64_t n = 1; n <= 2000; ++n) {
    CollatzTrace t = run_collatz(n, 100'000, RunBudget{100'000'000, 10'000'000});
    REQUIRE(t.verdict == CollatzVerdict::reached_one);
    CHECK(t.phases == naive_chain(n));
  }
}

TEST_CASE("phases appear exactly at the all-zero words") {
  // step the raw rules with the reference interpreter and log every step
  // whose word is a pure a0 power; the trace must list exactly those
  TagSystem sys = collatz_system();
  for (std::uint64_t n : {2ull, 3ull, 7ull, 10ull, 25ull, 40ull}) {
    naive::SymVec w(n, 0);
    std::vector<std::uint64_t> seen{n};
    while (w.size() != 1) {
      REQUIRE(!naive::halted(sys, w));
      w = naive::step(sys, w);
      if (all_zero(w)) seen.push_back(w.size());
    }
    CollatzTrace t = run_collatz(n, 100'000, RunBudget{1'000'000, 1'000'000});
    CHECK(t.phases == seen);
  }
}

TEST_CASE("tag step cost per phase is m for even m and m+1 for odd m") {
  std::vector<CollatzTrace> rows;
  collatz_sweep(100, 100'000, RunBudget{10'000'000, 1'000'000}, 1, &rows);
  for (const CollatzTrace& t : rows) {
    REQUIRE(t.verdict == CollatzVerdict::reached_one);
    std::uint64_t cost = 0;
    for (std::size_t i = 0; i + 1 < t.phases.size(); ++i) {
      std::uint64_t m = t.phases[i];
      cost += (m % 2 == 0) ? m : m + 1;
    }
    CHECK(cost == t.tag_steps);
  }
}

TEST_CASE("step budget exhaustion is reported, never misread as success") {
  CollatzTrace t = run_collatz(27, 100'000, RunBudget{10, 1'000'000});
  CHECK(t.verdict == CollatzVerdict::budget_exhausted);
  CHECK(t.tag_steps == 10);
  CHECK(t.phases == std::vector<std::uint64_t>{27});
}

TEST_CASE("phase cap stops the trace after max_phases entries") {
  CollatzTrace t = run_collatz(27, 3, RunBudget{10'000'000, 1'000'000});
  CHECK(t.verdict == CollatzVerdict::budget_exhausted);
  CHECK(t.phases == std::vector<std::uint64_t>{27, 41, 62});
}

TEST_CASE("length budget exhaustion is reported") {
  // n=27 needs words of length 4616; a 100-symbol ceiling cannot finish
  CollatzTrace t = run_collatz(27, 100'000, RunBudget{10'000'000, 100});
  CHECK(t.verdict == CollatzVerdict::budget_exhausted);
  CHECK(t.phases.back() != 1);
  // net growth is at most one symbol per step, so the run stops at the
  // first word past the cap, exactly 101 symbols long
  CHECK(t.max_word_length == 101);
}

TEST_CASE("sweep to 100 verifies every start") {
  std::vector<CollatzTrace> rows;
  CollatzSweepResult s = collatz_sweep(100, 100'000, RunBudget{10'000'000, 1'000'000}, 1, &rows);
  CHECK(s.verified == 100);
  CHECK(s.unresolved == 0);
  CHECK(s.total_tag_steps == 681668);
  CHECK(s.max_phase_seen == 4616);
  CHECK(s.max_word_length == 4616);
  REQUIRE(rows.size() == 100);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].n0 == i + 1);
    CHECK(rows[i].verdict == CollatzVerdict::reached_one);
    CHECK(rows[i].phases.front() == i + 1);
    CHECK(rows[i].phases.back() == 1);
  }
  CHECK(rows[26].phases.size() == 71);  // n=27
}

TEST_CASE("sweep under a tiny budget reports unresolved starts") {
  CollatzSweepResult s = collatz_sweep(30, 100'000, RunBudget{50, 1'000'000}, 1, nullptr);
  CHECK(s.verified + s.unresolved == 30);
  CHECK(s.unresolved > 0);
  CHECK(s.verified > 0);
}

TEST_CASE("sweep result is independent of the thread count") {
  std::vector<CollatzTrace> rows1, rows4;
  CollatzSweepResult s1 = collatz_sweep(60, 100'000, RunBudget{10'000'000, 1'000'000}, 1, &rows1);
  CollatzSweepResult s4 = collatz_sweep(60, 100'000, RunBudget{10'000'000, 1'000'000}, 4, &rows4);
  CHECK(s1.verified == s4.verified);
  CHECK(s1.unresolved == s4.unresolved);
  CHECK(s1.total_tag_steps == s4.total_tag_steps);
  CHECK(s1.max_phase_seen == s4.max_phase_seen);
  CHECK(s1.max_word_length == s4.max_word_length);
  REQUIRE(rows1.size() == rows4.size());
  for (std::size_t i = 0; i < rows1.size(); ++i) {
    CHECK(rows1[i].phases == rows4[i].phases);
    CHECK(rows1[i].tag_steps == rows4[i].tag_steps);
  }
}

TEST_CASE("oracle mismatch error carries the disagreeing values") {
  OracleMismatchError e(3, 10, 7);
  CHECK(e.phase_index == 3);
  CHECK(e.expected == 10);
  CHECK(e.got == 7);
  std::string msg = e.what();
  CHECK(msg.find("phase 3") != std::string::npos);
  CHECK(msg.find("10") != std::string::npos);
  CHECK(msg.find("7") != std::string::npos);
}
