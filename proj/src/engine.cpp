#include "engine.hpp"

#include <chrono>

namespace taglab {
namespace detail {

namespace {

bool views_equal(std::span<const Symbol> a, std::span<const Symbol> b) {
  return a.size() == b.size() &&
         (a.empty() || std::memcmp(a.data(), b.data(), a.size()) == 0);
}

// Minimal entry step: walk two cursors, one pre-advanced by the period, until
// they coincide. The first meeting index is the entry step because words at
// index i and i+period are equal exactly for i >= entry.
std::uint64_t find_entry_step(const TagSystem& sys, const Word& start, std::uint64_t period) {
  Trajectory lead(sys, start, true);
  for (std::uint64_t i = 0; i < period; ++i) lead.advance();
  Trajectory lag(sys, start, true);
  while (true) {
    if (lag.length() == lead.length() && lag.word_hash() == lead.word_hash() &&
        views_equal(lag.view(), lead.view())) {
      return lag.steps();
    }
    lag.advance();
    lead.advance();
  }
}

}  // namespace

EngineResult engine_run(const TagSystem& sys, const Word& start, const RunBudget& budget,
                        const EngineOptions& opts) {
  bool hashing = opts.detect_cycles || opts.target != nullptr;
  Trajectory traj(sys, start, hashing);

  std::uint64_t target_hash = 0;
  std::size_t target_len = 0;
  if (opts.target) {
    target_hash = opts.target->hash();
    target_len = opts.target->size();
  }

  // Brent checkpoints: the saved word sits at index cp_idx = 2^k - 1 and is
  // compared against every later word until the window of length `power`
  // closes. The first match at distance d from the checkpoint gives the
  // minimal period d once the checkpoint lies inside the cycle.
  Word cp_word = traj.snapshot();
  std::uint64_t cp_hash = hashing ? traj.word_hash() : 0;
  std::size_t cp_len = traj.length();
  std::uint64_t cp_idx = 0;
  std::uint64_t power = 1;

  EngineResult out;
  out.max_length_seen = traj.max_length();

  while (true) {
    std::uint64_t i = traj.steps();

    if (opts.target && traj.length() == target_len && traj.word_hash() == target_hash &&
        views_equal(traj.view(), opts.target->view())) {
      out.found = true;
      out.found_step = i;
      out.outcome = {OutcomeKind::budget_exhausted, i, 0, 0};
      break;
    }

    if (traj.halted()) {
      out.outcome = {OutcomeKind::halted, i, 0, 0};
      out.definitive_miss = opts.target != nullptr;
      break;
    }
    if (traj.length() > budget.max_length) {
      out.outcome = {OutcomeKind::length_bound_exceeded, i, 0, 0};
      break;
    }

    if (opts.detect_cycles && i > cp_idx) {
      if (traj.length() == cp_len && traj.word_hash() == cp_hash &&
          views_equal(traj.view(), cp_word.view())) {
        std::uint64_t period = i - cp_idx;
        std::uint64_t entry = find_entry_step(sys, start, period);
        out.outcome = {OutcomeKind::periodic, i, period, entry};
        out.definitive_miss = opts.target != nullptr;
        break;
      }
      if (i - cp_idx == power) {
        cp_word = traj.snapshot();
        cp_hash = traj.word_hash();
        cp_len = traj.length();
        cp_idx = i;
        power <<= 1;
      }
    }

    if (i >= budget.max_steps) {
      out.outcome = {OutcomeKind::budget_exhausted, i, 0, 0};
      break;
    }
    traj.advance();
  }

  out.final_word = traj.snapshot();
  out.max_length_seen = traj.max_length();
  return out;
}

}  // namespace detail

RunResult run(const TagSystem& sys, const Word& start, const RunBudget& budget,
              bool detect_cycles) {
  detail::EngineOptions opts;
  opts.detect_cycles = detect_cycles;
  auto r = detail::engine_run(sys, start, budget, opts);
  return {r.outcome, std::move(r.final_word), r.max_length_seen};
}

ReachResult reaches(const TagSystem& sys, const Word& start, const Word& target,
                    const RunBudget& budget) {
  for (Symbol s : target.view()) {
    if (s >= sys.mu())
      throw ConfigError("target word uses symbol " + std::to_string(unsigned(s)) +
                        " outside the alphabet");
  }
  detail::EngineOptions opts;
  opts.detect_cycles = true;
  opts.target = &target;
  auto r = detail::engine_run(sys, start, budget, opts);
  ReachResult out;
  out.found = r.found;
  out.found_step = r.found_step;
  out.outcome = r.outcome;
  out.definitive_miss = !r.found && r.definitive_miss;
  return out;
}

BenchResult throughput_bench(const TagSystem& sys, const Word& start, std::uint64_t steps,
                             std::size_t max_length) {
  Trajectory traj(sys, start, false);
  auto t0 = std::chrono::steady_clock::now();
  for (std::uint64_t i = 0; i < steps; ++i) {
    if (traj.halted() || (max_length > 0 && traj.length() > max_length))
      throw EarlyTermination(traj.steps());
    traj.advance();
  }
  auto t1 = std::chrono::steady_clock::now();
  BenchResult out;
  out.steps = steps;
  out.seconds = std::chrono::duration<double>(t1 - t0).count();
  out.steps_per_second = out.seconds > 0 ? static_cast<double>(steps) / out.seconds : 0.0;
  out.max_length_seen = traj.max_length();
  return out;
}

}  // namespace taglab
