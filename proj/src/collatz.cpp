#include "taglab/collatz.hpp"

#include <algorithm>

#include "taglab/parallel.hpp"

namespace taglab {

TagSystem collatz_system() { return preset("collatz-ts32"); }

std::uint64_t shortcut_collatz_oracle(std::uint64_t n) {
  if (n == 0) throw PreconditionError("oracle is defined for positive n");
  if (n % 2 == 0) return n / 2;
  if (n > (UINT64_MAX - 1) / 3) throw OverflowError("3n+1 exceeds 64 bits");
  return (3 * n + 1) / 2;
}

Word collatz_encode(std::uint64_t n) {
  if (n == 0) throw PreconditionError("encoding is defined for positive n");
  return Word(std::vector<Symbol>(n, Symbol{0}));
}

CollatzTrace run_collatz(std::uint64_t n, std::uint64_t max_phases, const RunBudget& budget) {
  CollatzTrace trace;
  trace.n0 = n;
  trace.phases.push_back(n);
  if (n == 1) {
    trace.verdict = CollatzVerdict::reached_one;
    trace.max_word_length = 1;
    return trace;
  }

  TagSystem sys = collatz_system();
  Trajectory traj(sys, collatz_encode(n), false);
  // Count of non-a0 symbols, maintained incrementally; zero means the word
  // is a pure a0-power. Appendant contributions: a0 -> a1a2 adds 2,
  // a1 -> a0 adds 0, a2 -> a0a0a0 adds 0.
  static constexpr std::uint64_t appended_non_a0[3] = {2, 0, 0};
  std::uint64_t non_a0 = 0;
  std::uint64_t expected = shortcut_collatz_oracle(n);

  while (!traj.halted() && traj.steps() < budget.max_steps &&
         traj.length() <= budget.max_length && trace.phases.size() < max_phases) {
    auto view = traj.view();
    std::uint64_t dropped = (view[0] != 0) + (view[1] != 0);
    Symbol scanned = traj.advance();
    non_a0 += appended_non_a0[scanned] - dropped;
    if (non_a0 == 0) {
      std::uint64_t m = traj.length();
      assert([&] {
        auto w = traj.view();
        return std::all_of(w.begin(), w.end(), [](Symbol s) { return s == 0; });
      }());
      if (m != expected)
        throw OracleMismatchError(trace.phases.size(), expected, m);
      trace.phases.push_back(m);
      if (m == 1) {
        trace.verdict = CollatzVerdict::reached_one;
        break;
      }
      expected = shortcut_collatz_oracle(m);
    }
  }
  trace.tag_steps = traj.steps();
  trace.max_word_length = traj.max_length();
  return trace;
}

CollatzSweepResult collatz_sweep(std::uint64_t n_max, std::uint64_t max_phases,
                                 const RunBudget& per_n, unsigned threads,
                                 std::vector<CollatzTrace>* rows) {
  std::vector<CollatzTrace> traces(n_max);
  parallel_for(n_max, threads, [&](std::uint64_t i) {
    traces[i] = run_collatz(i + 1, max_phases, per_n);
  });
  CollatzSweepResult out;
  for (const auto& t : traces) {
    if (t.verdict == CollatzVerdict::reached_one) {
      ++out.verified;
    } else {
      ++out.unresolved;
    }
    out.total_tag_steps += t.tag_steps;
    out.max_word_length = std::max(out.max_word_length, t.max_word_length);
    for (std::uint64_t m : t.phases) out.max_phase_seen = std::max(out.max_phase_seen, m);
  }
  if (rows) *rows = std::move(traces);
  return out;
}

}  // namespace taglab
