// Cycle detection and periodic-orbit analysis: orbits, their scanned-symbol
// structures, the four-way period classification, and concatenation of
// regular orbits.
#pragma once

#include <optional>

#include "taglab/core.hpp"

namespace taglab {

struct CycleInfo {
  std::uint64_t entry_step = 0;  // minimal i with word(i) on the cycle
  std::uint64_t period = 0;      // minimal period of the cycle
};

// Brent-style detection on the word sequence: one saved checkpoint word plus
// a power-of-two schedule, equality screened by (length, rolling hash) and
// confirmed by full comparison. nullopt when the run halts, exceeds the
// length bound, or exhausts the budget first; `terminal` receives the run
// outcome either way.
std::optional<CycleInfo> detect_cycle(const TagSystem& sys, const Word& start,
                                      const RunBudget& budget, RunOutcome* terminal = nullptr);

// Symbols at positions 1, v+1, 2v+1, ... (1-based): exactly the symbols a
// full pass scans. Its length is ceil(l/v). Throws EmptyWordError on the
// empty word.
Word periodic_structure(const Word& word, std::uint32_t v);

struct PeriodicSet {
  std::vector<Word> words;  // trajectory order; words[0] is the entry word
  std::uint64_t period = 0;
  std::vector<Word> structures;  // periodic structure of each word
};

// Materializes the orbit reached from `start` given a detection result.
PeriodicSet extract_orbit(const TagSystem& sys, const Word& start, const CycleInfo& info);

// Convenience: detect + extract in one call.
std::optional<PeriodicSet> find_orbit(const TagSystem& sys, const Word& start,
                                      const RunBudget& budget, CycleInfo* info = nullptr);

enum class PeriodType { type1 = 1, type2 = 2, type3 = 3, type4 = 4 };
std::string_view period_type_name(PeriodType t);
inline bool is_regular(PeriodType t) { return t == PeriodType::type1 || t == PeriodType::type3; }

struct UnclassifiableOrbit : Error {
  using Error::Error;
};

// Four-way classification of an orbit by comparing the period p with the
// structure lengths across all members:
//   p <= l_S for every member: type 1 if some member has min(p,l_S) dividing
//   max(p,l_S), else type 2. l_S < p strictly for every member: type 3 / 4
//   by the same divisibility test. Orbits mixing both regimes are
//   unclassifiable and throw.
PeriodType classify_period_type(const PeriodicSet& orbit);

struct ConcatResult {
  Word word;
  std::uint64_t period = 0;    // verified by direct simulation
  std::size_t index1 = 0;      // orbit positions of the chosen members
  std::size_t index2 = 0;
};

// Searches the two orbits (each given by a member word, which must itself be
// periodic and of regular type) for members whose concatenation is again a
// periodic word, verifying by simulation within the budget. nullopt when no
// pair verifies.
std::optional<ConcatResult> concat_periodic(const TagSystem& sys, const Word& w1, const Word& w2,
                                            const RunBudget& budget);

// First step t >= 1 with word(t) == start, if the start word reproduces
// itself within the budget.
std::optional<std::uint64_t> word_period(const TagSystem& sys, const Word& start,
                                         const RunBudget& budget);

struct ShearerResult {
  Word word;                        // (001101)^n
  std::uint64_t minimal_period = 0; // measured by detection from the word
  bool reproduces_at_2n = false;    // word(2n) == word(0), checked directly
};

// Probes the n-fold concatenation of 001101 under the Post system.
ShearerResult shearer_period(std::uint32_t n);

}  // namespace taglab
