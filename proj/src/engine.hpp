// Shared budgeted run loop behind run(), reaches() and detect_cycle().
#pragma once

#include "taglab/core.hpp"

namespace taglab::detail {

struct EngineOptions {
  bool detect_cycles = true;
  const Word* target = nullptr;  // watched at every step, including step 0
};

struct EngineResult {
  RunOutcome outcome;
  Word final_word;
  std::size_t max_length_seen = 0;
  bool found = false;
  std::uint64_t found_step = 0;
  bool definitive_miss = false;
};

EngineResult engine_run(const TagSystem& sys, const Word& start, const RunBudget& budget,
                        const EngineOptions& opts);

}  // namespace taglab::detail
