#include "taglab/generator.hpp"

#include <algorithm>

#include "taglab/parallel.hpp"
#include "taglab/rng.hpp"

namespace taglab {

std::string_view decidable_reason_name(DecidableReason r) {
  switch (r) {
    case DecidableReason::v1:
      return "v=1";
    case DecidableReason::lmin_ge_v:
      return "lmin>=v";
    case DecidableReason::lmax_le_v:
      return "lmax<=v";
    case DecidableReason::mu1:
      return "mu=1";
    case DecidableReason::ts22:
      return "mu=2,v=2";
  }
  return "unknown";
}

std::optional<DecidableReason> decidability_screen(const TagSystem& sys) {
  if (sys.v == 1) return DecidableReason::v1;
  if (sys.l_min() >= sys.v) return DecidableReason::lmin_ge_v;
  if (sys.l_max() <= sys.v) return DecidableReason::lmax_le_v;
  if (sys.mu() == 1) return DecidableReason::mu1;
  if (sys.mu() == 2 && sys.v == 2) return DecidableReason::ts22;
  return std::nullopt;
}

std::int64_t balance(const TagSystem& sys) {
  std::vector<std::int64_t> counts(sys.mu(), 0);
  for (const auto& w : sys.appendants)
    for (Symbol s : w) ++counts[s];
  std::int64_t sum = 0;
  for (std::size_t a = 0; a < counts.size(); ++a) {
    sum += counts[a] * (static_cast<std::int64_t>(sys.appendants[a].size()) -
                        static_cast<std::int64_t>(sys.v));
  }
  return sum;
}

std::string_view screen_outcome_name(ScreenOutcome o) {
  switch (o) {
    case ScreenOutcome::selected:
      return "selected";
    case ScreenOutcome::rejected_decidable:
      return "rejected_decidable";
    case ScreenOutcome::rejected_balance:
      return "rejected_balance";
    case ScreenOutcome::rejected_growth:
      return "rejected_growth";
    case ScreenOutcome::rejected_pilot:
      return "rejected_pilot";
  }
  return "unknown";
}

TagSystem sample_system(const GeneratorConfig& cfg, std::uint64_t seed, std::uint64_t index) {
  if (cfg.mu < 2 || cfg.mu > max_alphabet)
    throw ConfigError("sampling needs 2 <= mu <= 256: one appendant cannot be both longer and "
                      "shorter than v");
  if (cfg.v_min < 1 || cfg.v_min > cfg.v_max) throw ConfigError("bad deletion-number range");
  if (cfg.excess_max < 1) throw ConfigError("excess bound must be >= 1");
  SplitMix64 rng = rng_stream(seed, index, 0);
  TagSystem sys;
  sys.appendants.resize(cfg.mu);
  for (int attempt = 0; attempt < 1'000'000; ++attempt) {
    sys.v = cfg.v_min + static_cast<std::uint32_t>(rng.below(cfg.v_max - cfg.v_min + 1));
    std::size_t lo = sys.v > cfg.excess_max ? sys.v - cfg.excess_max : 0;
    std::size_t hi = sys.v + cfg.excess_max;
    std::size_t l_min = hi, l_max = 0;
    std::vector<std::size_t> lengths(cfg.mu);
    for (auto& l : lengths) {
      l = lo + rng.below(hi - lo + 1);
      l_min = std::min(l_min, l);
      l_max = std::max(l_max, l);
    }
    if (l_max < sys.v + 1 || l_min + 1 > sys.v) continue;
    for (std::uint32_t a = 0; a < cfg.mu; ++a) {
      sys.appendants[a].resize(lengths[a]);
      for (auto& s : sys.appendants[a]) s = static_cast<Symbol>(rng.below(cfg.mu));
    }
    return sys;
  }
  throw ConfigError("class constraints unsatisfiable: no sample found");
}

ScreenReport screen_system(const TagSystem& sys, const GeneratorConfig& cfg, std::uint64_t seed,
                           std::uint64_t index) {
  ScreenReport report;
  report.decidable = decidability_screen(sys);
  report.balance = balance(sys);
  if (report.decidable) {
    report.outcome = ScreenOutcome::rejected_decidable;
    return report;
  }
  bool balance_ok = cfg.balance_mode == GeneratorConfig::BalanceMode::eq0
                        ? report.balance == 0
                        : report.balance <= 0;
  if (!balance_ok) {
    report.outcome = ScreenOutcome::rejected_balance;
    return report;
  }
  bool grew = false;
  for (std::uint32_t j = 0; j < cfg.pilot_words; ++j) {
    SplitMix64 rng = rng_stream(seed, index, j + 1);
    Word w = random_word(rng, cfg.pilot_word_length, sys.mu());
    RunResult r = run(sys, w, cfg.pilot_budget, true);
    ++report.pilots_run;
    if (r.outcome.kind == OutcomeKind::budget_exhausted) {
      ++report.pilots_survived;
    } else if (r.outcome.kind == OutcomeKind::length_bound_exceeded) {
      grew = true;
    }
  }
  if (grew) {
    report.outcome = ScreenOutcome::rejected_growth;
  } else if (cfg.survive_mode == GeneratorConfig::SurviveMode::all
                 ? report.pilots_survived == report.pilots_run
                 : report.pilots_survived > 0) {
    report.outcome = ScreenOutcome::selected;
  } else {
    report.outcome = ScreenOutcome::rejected_pilot;
  }
  return report;
}

std::vector<Candidate> generate_candidates(const GeneratorConfig& cfg, std::uint64_t seed,
                                           std::uint64_t count, unsigned threads) {
  std::vector<Candidate> out(count);
  parallel_for(count, threads, [&](std::uint64_t i) {
    out[i].index = i;
    out[i].system = sample_system(cfg, seed, i);
    out[i].report = screen_system(out[i].system, cfg, seed, i);
  });
  return out;
}

}  // namespace taglab
