// The 3-symbol, v=2 tag system that computes the accelerated Collatz map
// n -> n/2 (n even), n -> (3n+1)/2 (n odd), plus the integer oracle it is
// cross-checked against on every phase.
#pragma once

#include <vector>

#include "taglab/core.hpp"

namespace taglab {

struct OverflowError : Error {
  using Error::Error;
};

struct OracleMismatchError : Error {
  OracleMismatchError(std::uint64_t index, std::uint64_t expected_value, std::uint64_t got_value)
      : Error("phase " + std::to_string(index) + ": tag run produced " +
              std::to_string(got_value) + ", oracle expected " + std::to_string(expected_value)),
        phase_index(index),
        expected(expected_value),
        got(got_value) {}
  std::uint64_t phase_index;
  std::uint64_t expected;
  std::uint64_t got;
};

// v=2, 0 -> 12, 1 -> 0, 2 -> 000.
TagSystem collatz_system();

// One accelerated Collatz step. Throws PreconditionError on n == 0 and
// OverflowError instead of wrapping (phase values reachable by desk-scale
// sweeps sit far below the 64-bit ceiling).
std::uint64_t shortcut_collatz_oracle(std::uint64_t n);

// n as the tag word a0^n.
Word collatz_encode(std::uint64_t n);

enum class CollatzVerdict { reached_one, budget_exhausted };

struct CollatzTrace {
  std::uint64_t n0 = 0;
  std::vector<std::uint64_t> phases;  // n0 first, 1 last when verdict is reached_one
  std::uint64_t tag_steps = 0;
  std::size_t max_word_length = 0;
  CollatzVerdict verdict = CollatzVerdict::budget_exhausted;
};

// Runs the tag system from encode(n). Each time the word is a pure a0-power
// a0^m the phase m is recorded and checked against the oracle applied to the
// previous phase; a mismatch throws OracleMismatchError. Stops at phase 1,
// or once max_phases phases / the step or length budget are spent.
CollatzTrace run_collatz(std::uint64_t n, std::uint64_t max_phases, const RunBudget& budget);

struct CollatzSweepResult {
  std::uint64_t verified = 0;      // traces that reached 1
  std::uint64_t unresolved = 0;    // traces that ran out of budget
  std::uint64_t total_tag_steps = 0;
  std::uint64_t max_phase_seen = 0;
  std::size_t max_word_length = 0;
};

// Runs run_collatz for every 1 <= n <= n_max. Traces are handed to `rows`
// in order of n when provided.
CollatzSweepResult collatz_sweep(std::uint64_t n_max, std::uint64_t max_phases,
                                 const RunBudget& per_n, unsigned threads = 0,
                                 std::vector<CollatzTrace>* rows = nullptr);

}  // namespace taglab
