#include "taglab/cycle.hpp"

#include <algorithm>

#include "engine.hpp"

namespace taglab {

std::optional<CycleInfo> detect_cycle(const TagSystem& sys, const Word& start,
                                      const RunBudget& budget, RunOutcome* terminal) {
  detail::EngineOptions opts;
  opts.detect_cycles = true;
  auto r = detail::engine_run(sys, start, budget, opts);
  if (terminal) *terminal = r.outcome;
  if (r.outcome.kind != OutcomeKind::periodic) return std::nullopt;
  return CycleInfo{r.outcome.entry_step, r.outcome.period};
}

Word periodic_structure(const Word& word, std::uint32_t v) {
  if (word.empty()) throw EmptyWordError("periodic structure of the empty word is undefined");
  std::vector<Symbol> out;
  out.reserve((word.size() + v - 1) / v);
  for (std::size_t i = 0; i < word.size(); i += v) out.push_back(word[i]);
  return Word(std::move(out));
}

PeriodicSet extract_orbit(const TagSystem& sys, const Word& start, const CycleInfo& info) {
  if (info.period == 0) throw PreconditionError("orbit period must be positive");
  Trajectory traj(sys, start, false);
  for (std::uint64_t i = 0; i < info.entry_step; ++i) traj.advance();
  PeriodicSet orbit;
  orbit.period = info.period;
  orbit.words.reserve(info.period);
  for (std::uint64_t i = 0; i < info.period; ++i) {
    orbit.words.push_back(traj.snapshot());
    traj.advance();
  }
  if (traj.snapshot() != orbit.words.front())
    throw Error("orbit extraction failed to close after one period");
  orbit.structures.reserve(orbit.words.size());
  for (const Word& w : orbit.words) orbit.structures.push_back(periodic_structure(w, sys.v));
  return orbit;
}

std::optional<PeriodicSet> find_orbit(const TagSystem& sys, const Word& start,
                                      const RunBudget& budget, CycleInfo* info_out) {
  auto info = detect_cycle(sys, start, budget);
  if (!info) return std::nullopt;
  if (info_out) *info_out = *info;
  return extract_orbit(sys, start, *info);
}

std::string_view period_type_name(PeriodType t) {
  switch (t) {
    case PeriodType::type1:
      return "type1";
    case PeriodType::type2:
      return "type2";
    case PeriodType::type3:
      return "type3";
    case PeriodType::type4:
      return "type4";
  }
  return "unknown";
}

PeriodType classify_period_type(const PeriodicSet& orbit) {
  if (orbit.words.empty()) throw PreconditionError("empty orbit");
  std::uint64_t p = orbit.period;
  bool all_p_le = true;
  bool all_ls_lt = true;
  bool any_divisible = false;
  for (const Word& s : orbit.structures) {
    std::uint64_t ls = s.size();
    all_p_le = all_p_le && p <= ls;
    all_ls_lt = all_ls_lt && ls < p;
    std::uint64_t lo = std::min(p, ls);
    std::uint64_t hi = std::max(p, ls);
    any_divisible = any_divisible || (hi % lo == 0);
  }
  if (all_p_le) return any_divisible ? PeriodType::type1 : PeriodType::type2;
  if (all_ls_lt) return any_divisible ? PeriodType::type3 : PeriodType::type4;
  throw UnclassifiableOrbit("orbit mixes members with p <= l_S and l_S < p");
}

std::optional<std::uint64_t> word_period(const TagSystem& sys, const Word& start,
                                         const RunBudget& budget) {
  if (start.size() < sys.v) return std::nullopt;
  std::uint64_t target_hash = start.hash();
  std::size_t target_len = start.size();
  Trajectory traj(sys, start, true);
  while (traj.steps() < budget.max_steps) {
    if (traj.halted() || traj.length() > budget.max_length) return std::nullopt;
    traj.advance();
    if (traj.length() == target_len && traj.word_hash() == target_hash) {
      auto v = traj.view();
      if (std::equal(v.begin(), v.end(), start.view().begin())) return traj.steps();
    }
  }
  return std::nullopt;
}

namespace {

// A member word must itself lie on a regular-type cycle.
PeriodicSet orbit_of_member(const TagSystem& sys, const Word& w, const RunBudget& budget,
                            std::string_view which) {
  RunOutcome terminal;
  auto info = detect_cycle(sys, w, budget, &terminal);
  if (!info || info->entry_step != 0)
    throw PreconditionError(std::string(which) + " is not a periodic word (outcome: " +
                            std::string(outcome_name(terminal.kind)) + ")");
  PeriodicSet orbit = extract_orbit(sys, w, *info);
  PeriodType t = classify_period_type(orbit);
  if (!is_regular(t))
    throw PreconditionError(std::string(which) + " lies on an irregular (" +
                            std::string(period_type_name(t)) + ") orbit");
  return orbit;
}

}  // namespace

std::optional<ConcatResult> concat_periodic(const TagSystem& sys, const Word& w1, const Word& w2,
                                            const RunBudget& budget) {
  PeriodicSet o1 = orbit_of_member(sys, w1, budget, "first word");
  PeriodicSet o2 = orbit_of_member(sys, w2, budget, "second word");

  // Members whose length is a multiple of v keep the second word's scan
  // positions aligned, so try those first.
  std::vector<std::size_t> order1(o1.words.size());
  for (std::size_t i = 0; i < order1.size(); ++i) order1[i] = i;
  std::stable_sort(order1.begin(), order1.end(), [&](std::size_t a, std::size_t b) {
    return (o1.words[a].size() % sys.v == 0) > (o1.words[b].size() % sys.v == 0);
  });

  for (std::size_t i : order1) {
    for (std::size_t j = 0; j < o2.words.size(); ++j) {
      Word cat = concat(o1.words[i], o2.words[j]);
      if (auto p = word_period(sys, cat, budget)) {
        return ConcatResult{std::move(cat), *p, i, j};
      }
    }
  }
  return std::nullopt;
}

ShearerResult shearer_period(std::uint32_t n) {
  if (n == 0) throw PreconditionError("n must be positive");
  TagSystem post = post_system();
  std::vector<Symbol> symbols;
  symbols.reserve(6 * n);
  for (std::uint32_t i = 0; i < n; ++i)
    for (Symbol s : {0, 0, 1, 1, 0, 1}) symbols.push_back(s);
  ShearerResult out;
  out.word = Word(std::move(symbols));

  RunBudget budget;
  budget.max_steps = std::uint64_t{20} * n + 1000;
  budget.max_length = 12 * n + 1000;
  if (auto p = word_period(post, out.word, budget)) out.minimal_period = *p;

  Trajectory traj(post, out.word, false);
  for (std::uint32_t i = 0; i < 2 * n; ++i) {
    if (traj.halted()) break;
    traj.advance();
  }
  out.reproduces_at_2n = traj.steps() == 2 * n && traj.snapshot() == out.word;
  return out;
}

}  // namespace taglab
