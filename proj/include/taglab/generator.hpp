// Heuristic search for interesting tag systems: random sampling of a class,
// a decidability screen, the balance filter, and pilot runs.
#pragma once

#include <optional>

#include "taglab/core.hpp"

namespace taglab {

enum class DecidableReason { v1, lmin_ge_v, lmax_le_v, mu1, ts22 };
std::string_view decidable_reason_name(DecidableReason r);

// First matching decidable class, in this order: v == 1; l_min >= v;
// l_max <= v; mu == 1; mu == 2 and v == 2. nullopt means no known criterion
// settles the system.
std::optional<DecidableReason> decidability_screen(const TagSystem& sys);

// sum over symbols a of count(a across all appendants) * (|w_a| - v).
// Zero is the growth-neutral first-order balance point.
std::int64_t balance(const TagSystem& sys);

enum class ScreenOutcome {
  selected,
  rejected_decidable,
  rejected_balance,
  rejected_growth,  // a pilot word exceeded the length bound
  rejected_pilot,   // a pilot word halted or became periodic
};
std::string_view screen_outcome_name(ScreenOutcome o);

struct ScreenReport {
  std::optional<DecidableReason> decidable;
  std::int64_t balance = 0;
  ScreenOutcome outcome = ScreenOutcome::selected;
  std::uint32_t pilots_run = 0;
  std::uint32_t pilots_survived = 0;  // pilots that exhausted the step budget
};

struct GeneratorConfig {
  std::uint32_t mu = 2;
  std::uint32_t v_min = 3;
  std::uint32_t v_max = 15;
  std::uint32_t excess_max = 4;  // bound on l_max - v and v - l_min

  enum class BalanceMode { eq0, le0 };
  BalanceMode balance_mode = BalanceMode::eq0;

  enum class SurviveMode { all, any };
  SurviveMode survive_mode = SurviveMode::all;

  std::uint32_t pilot_words = 20;
  std::size_t pilot_word_length = 300;
  RunBudget pilot_budget{10'000'000, 15'000};
};

struct Candidate {
  std::uint64_t index = 0;
  TagSystem system;
  ScreenReport report;
};

// Samples one system for candidate stream `index`: v uniform in range, each
// appendant length uniform in [max(0, v-excess), v+excess], resampled until
// 1 <= l_max - v and 1 <= v - l_min, symbols uniform.
TagSystem sample_system(const GeneratorConfig& cfg, std::uint64_t seed, std::uint64_t index);

// Full screening pipeline for an existing system. Pilot words for candidate
// `index` are derived from (seed, index, pilot). Pilot runs only happen when
// the decidability and balance gates pass.
ScreenReport screen_system(const TagSystem& sys, const GeneratorConfig& cfg, std::uint64_t seed,
                           std::uint64_t index = 0);

// count candidates sampled and screened; selected ones are the subset with
// report.outcome == selected.
std::vector<Candidate> generate_candidates(const GeneratorConfig& cfg, std::uint64_t seed,
                                           std::uint64_t count, unsigned threads = 0);

}  // namespace taglab
