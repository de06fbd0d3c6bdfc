// The five computer experiments: outcome census with survival curve, period
// census with classification, single-symbol sensitivity, randomness battery
// and conditional entropy on scanned streams, plus their CSV/JSONL writers.
#pragma once

#include <array>
#include <map>
#include <optional>

#include "taglab/core.hpp"
#include "taglab/cycle.hpp"
#include "taglab/stats.hpp"

namespace taglab {

// Sentinel resolution step for runs that never resolved within budget.
inline constexpr std::uint64_t never_resolved = UINT64_MAX;

struct ExperimentRecord {
  std::string system_id;
  std::uint64_t word_index = 0;
  Word initial_word;
  RunOutcome outcome;
  std::size_t max_length_seen = 0;
  // First step at which the trajectory's fate is visible in the trajectory
  // itself: entry_step + period for periodic runs (the first self-repeat),
  // outcome.steps for halts and length-bound exits, never_resolved for
  // exhausted budgets.
  std::uint64_t resolution_step = never_resolved;
};

struct SurvivalPoint {
  std::uint64_t threshold = 0;
  std::uint64_t unresolved = 0;
};

struct Exp1Result {
  std::vector<ExperimentRecord> records;
  std::vector<SurvivalPoint> survival;        // 64 log-spaced thresholds
  std::array<std::uint64_t, 4> histogram{};   // indexed by OutcomeKind
};

Exp1Result exp1_census(const TagSystem& sys, const std::string& system_id, std::uint64_t n_words,
                       std::size_t word_length, const RunBudget& budget, std::uint64_t seed,
                       unsigned threads = 0);

std::vector<SurvivalPoint> survival_curve(const std::vector<ExperimentRecord>& records,
                                          std::uint64_t max_steps);

struct OrbitRecord {
  std::uint64_t word_index = 0;
  std::uint64_t entry_step = 0;
  PeriodicSet orbit;
  std::optional<PeriodType> type;  // nullopt: unclassifiable
};

struct Exp2Result {
  std::vector<OrbitRecord> orbits;
  std::map<std::string, std::uint64_t> histogram;  // type1..type4, unclassifiable
};

// Re-derives and classifies the orbit behind every periodic record.
Exp2Result exp2_period_census(const TagSystem& sys, const std::vector<ExperimentRecord>& records,
                              unsigned threads = 0);

struct SensitivityRow {
  std::size_t position = 0;
  Symbol replacement = 0;
  OutcomeKind base_kind;
  OutcomeKind variant_kind;
  bool class_changed = false;
  std::uint64_t delta_steps = 0;  // |resolution difference|, saturated at never_resolved
  std::optional<std::uint64_t> first_length_divergence;
};

struct Exp3Result {
  RunOutcome base_outcome;
  std::uint64_t base_resolution = never_resolved;
  std::vector<SensitivityRow> rows;
  double sensitivity_score = 0;  // fraction of substitutions changing the outcome class
};

Exp3Result exp3_sensitivity(const TagSystem& sys, const Word& base, const RunBudget& budget,
                            unsigned threads = 0);

// Scanned-symbol stream of the run (default), or the concatenation of the
// successive words (whole_words). Truncated at `length`; shorter if the run
// ends first.
std::vector<Symbol> collect_stream(const TagSystem& sys, const Word& start, std::uint64_t length,
                                   const RunBudget& budget, bool whole_words = false);

struct Exp4Result {
  BatteryReport report;
  std::uint64_t stream_collected = 0;
  bool whole_words = false;
};

Exp4Result exp4_randomness(const TagSystem& sys, const Word& start, std::uint64_t stream_length,
                           const RunBudget& budget, double alpha = 0.01, bool whole_words = false);

struct Exp5Result {
  EntropyReport report;
  std::uint64_t stream_collected = 0;
};

Exp5Result exp5_entropy(const TagSystem& sys, const Word& start, std::uint64_t stream_length,
                        std::uint32_t order, const RunBudget& budget, double smoothing = 0.0);

// File writers. Every writer emits a fixed column layout; when timestamp is
// set, a "# generated_utc ..." comment line precedes the header so reruns
// with the flag off are byte-identical.
void write_census_csv(const std::string& path, const std::vector<ExperimentRecord>& records,
                      std::uint32_t mu, bool timestamp);
void write_survival_csv(const std::string& path, const std::vector<SurvivalPoint>& survival,
                        bool timestamp);
void write_periods_jsonl(const std::string& path, const Exp2Result& result, std::uint32_t mu,
                         std::uint32_t v);
void write_sensitivity_csv(const std::string& path, const Exp3Result& result, std::uint32_t mu,
                           bool timestamp);
void write_randomness_csv(const std::string& path, const Exp4Result& result, bool timestamp);
void write_entropy_csv(const std::string& path, const Exp5Result& result, bool timestamp);

}  // namespace taglab
