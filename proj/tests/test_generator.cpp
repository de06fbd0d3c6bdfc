// Decidability screen, balance filter, class sampling, and pilot screening.
#include <doctest.h>

#include <cstdint>
#include <map>
#include <string>

#include "taglab/generator.hpp"

using namespace taglab;

namespace {

TagSystem make_sys(std::uint32_t v, std::vector<std::vector<Symbol>> apps) {
  TagSystem sys;
  sys.v = v;
  sys.appendants = std::move(apps);
  return sys;
}

}  // namespace

TEST_CASE("decidability screen names the first matching class") {
  // v = 1 wins over everything else
  CHECK(decidability_screen(make_sys(1, {{0}, {1, 1}})) == DecidableReason::v1);
  // every appendant at least as long as v: word length never shrinks
  CHECK(decidability_screen(make_sys(2, {{0, 0}, {1, 1}})) == DecidableReason::lmin_ge_v);
  CHECK(decidability_screen(make_sys(2, {{0, 0, 0}, {1, 1}})) == DecidableReason::lmin_ge_v);
  // every appendant at most as long as v: word length never grows
  CHECK(decidability_screen(make_sys(3, {{0}, {1, 1, 0}})) == DecidableReason::lmax_le_v);
  // the two-symbol deletion-number-2 class
  CHECK(decidability_screen(make_sys(2, {{0, 1, 1}, {}})) == DecidableReason::ts22);
  // open classes come back empty
  CHECK(!decidability_screen(preset("post-00-1101")).has_value());
  CHECK(!decidability_screen(preset("fig1-right")).has_value());
  CHECK(!decidability_screen(preset("collatz-ts32")).has_value());
  CHECK(!decidability_screen(make_sys(3, {{0, 0}, {1, 1, 0, 1}})).has_value());
}

TEST_CASE("one-symbol systems are settled by the length rules alone") {
  // a single appendant is never strictly longer and strictly shorter than v
  // at once, so one of the length criteria always fires first
  CHECK(decidability_screen(make_sys(2, {{0, 0, 0}})) == DecidableReason::lmin_ge_v);
  CHECK(decidability_screen(make_sys(2, {{0}})) == DecidableReason::lmax_le_v);
  CHECK(decidability_screen(make_sys(2, {{0, 0}})) == DecidableReason::lmin_ge_v);
}

TEST_CASE("reason and outcome names") {
  CHECK(decidable_reason_name(DecidableReason::v1) == "v=1");
  CHECK(decidable_reason_name(DecidableReason::lmin_ge_v) == "lmin>=v");
  CHECK(decidable_reason_name(DecidableReason::lmax_le_v) == "lmax<=v");
  CHECK(decidable_reason_name(DecidableReason::mu1) == "mu=1");
  CHECK(decidable_reason_name(DecidableReason::ts22) == "mu=2,v=2");
  CHECK(screen_outcome_name(ScreenOutcome::selected) == "selected");
  CHECK(screen_outcome_name(ScreenOutcome::rejected_decidable) == "rejected_decidable");
  CHECK(screen_outcome_name(ScreenOutcome::rejected_balance) == "rejected_balance");
  CHECK(screen_outcome_name(ScreenOutcome::rejected_growth) == "rejected_growth");
  CHECK(screen_outcome_name(ScreenOutcome::rejected_pilot) == "rejected_pilot");
}

TEST_CASE("balance weighs symbol counts by appendant growth") {
  // 00 and 1101 hold three 0s and three 1s; growths are -1 and +1
  CHECK(balance(preset("post-00-1101")) == 0);
  // 1011 and 010100 hold five of each; growths -1 and +1
  CHECK(balance(preset("fig1-right")) == 0);
  // 12, 0, 000: four 0s at growth 0, one 1 at -1, one 2 at +1
  CHECK(balance(preset("collatz-ts32")) == 0);
  // four 0s at growth +1, two 1s at growth -1
  CHECK(balance(make_sys(3, {{0, 0, 0, 0}, {1, 1}})) == 2);
  // five 0s at growth -1, one 1 at growth +1
  CHECK(balance(make_sys(3, {{0, 0}, {0, 0, 0, 1}})) == -4);
}

TEST_CASE("screen rejects decidable systems before running pilots") {
  GeneratorConfig cfg;
  ScreenReport r = screen_system(make_sys(2, {{0, 1, 1}, {}}), cfg, 7);
  CHECK(r.outcome == ScreenOutcome::rejected_decidable);
  CHECK(r.decidable == DecidableReason::ts22);
  CHECK(r.pilots_run == 0);
  CHECK(r.pilots_survived == 0);
}

TEST_CASE("screen rejects unbalanced systems before running pilots") {
  GeneratorConfig cfg;
  TagSystem plus2 = make_sys(3, {{0, 0, 0, 0}, {1, 1}});
  ScreenReport r = screen_system(plus2, cfg, 7);
  CHECK(r.outcome == ScreenOutcome::rejected_balance);
  CHECK(r.balance == 2);
  CHECK(r.pilots_run == 0);

  // a negative balance still fails the exact-zero gate but passes le0
  TagSystem minus4 = make_sys(3, {{0, 0}, {0, 0, 0, 1}});
  ScreenReport r0 = screen_system(minus4, cfg, 7);
  CHECK(r0.outcome == ScreenOutcome::rejected_balance);
  GeneratorConfig le;
  le.balance_mode = GeneratorConfig::BalanceMode::le0;
  ScreenReport rle = screen_system(minus4, le, 7);
  CHECK(rle.outcome != ScreenOutcome::rejected_balance);
  CHECK(rle.pilots_run == cfg.pilot_words);
}

TEST_CASE("pilot verdicts for the library presets, measured and frozen") {
  GeneratorConfig cfg;
  // some 300-symbol pilot word drives 00/1101 past the 15000-symbol cap
  ScreenReport post = screen_system(preset("post-00-1101"), cfg, 7, 0);
  CHECK(post.outcome == ScreenOutcome::rejected_growth);
  CHECK(post.balance == 0);
  CHECK(!post.decidable.has_value());
  CHECK(post.pilots_run == 20);
  CHECK(post.pilots_survived == 0);

  // 1011/010100 never trips the cap and 4 of 20 pilots outlive the budget:
  // not enough for all-mode, enough for any-mode
  ScreenReport fig_all = screen_system(preset("fig1-right"), cfg, 7, 0);
  CHECK(fig_all.outcome == ScreenOutcome::rejected_pilot);
  CHECK(fig_all.pilots_survived == 4);
  GeneratorConfig any = cfg;
  any.survive_mode = GeneratorConfig::SurviveMode::any;
  ScreenReport fig_any = screen_system(preset("fig1-right"), any, 7, 0);
  CHECK(fig_any.outcome == ScreenOutcome::selected);
  CHECK(fig_any.pilots_survived == 4);
}

TEST_CASE("screening a system twice with one seed gives one answer") {
  GeneratorConfig cfg;
  cfg.pilot_words = 5;
  cfg.pilot_word_length = 100;
  cfg.pilot_budget = RunBudget{20'000, 2'000};
  TagSystem sys = preset("fig1-right");
  ScreenReport a = screen_system(sys, cfg, 99, 3);
  ScreenReport b = screen_system(sys, cfg, 99, 3);
  CHECK(a.outcome == b.outcome);
  CHECK(a.pilots_survived == b.pilots_survived);
}

TEST_CASE("sampling rejects impossible or degenerate configurations") {
  GeneratorConfig cfg;
  cfg.mu = 1;
  CHECK_THROWS_AS(sample_system(cfg, 1, 0), ConfigError);
  cfg.mu = 2;
  cfg.v_min = 0;
  CHECK_THROWS_AS(sample_system(cfg, 1, 0), ConfigError);
  cfg.v_min = 5;
  cfg.v_max = 4;
  CHECK_THROWS_AS(sample_system(cfg, 1, 0), ConfigError);
  cfg.v_max = 6;
  cfg.excess_max = 0;
  CHECK_THROWS_AS(sample_system(cfg, 1, 0), ConfigError);
}

TEST_CASE("samples satisfy every class constraint") {
  GeneratorConfig cfg;
  cfg.mu = 3;
  cfg.v_min = 2;
  cfg.v_max = 9;
  cfg.excess_max = 3;
  for (std::uint64_t i = 0; i < 500; ++i) {
    TagSystem sys = sample_system(cfg, 42, i);
    REQUIRE(sys.appendants.size() == cfg.mu);
    CHECK(sys.v >= cfg.v_min);
    CHECK(sys.v <= cfg.v_max);
    CHECK(sys.l_max() >= sys.v + 1);
    CHECK(sys.l_min() + 1 <= sys.v);
    for (const auto& w : sys.appendants) {
      CHECK(w.size() <= sys.v + cfg.excess_max);
      CHECK(w.size() + cfg.excess_max >= sys.v);
      for (Symbol s : w) CHECK(s < cfg.mu);
    }
  }
}

TEST_CASE("sampling is a pure function of seed and index") {
  GeneratorConfig cfg;
  CHECK(sample_system(cfg, 11, 5).serialize() == sample_system(cfg, 11, 5).serialize());
  CHECK(sample_system(cfg, 11, 5).serialize() != sample_system(cfg, 11, 6).serialize());
  CHECK(sample_system(cfg, 11, 5).serialize() != sample_system(cfg, 12, 5).serialize());
}

TEST_CASE("candidate batch outcomes, measured and frozen") {
  GeneratorConfig cfg;
  cfg.mu = 2;
  cfg.v_min = 3;
  cfg.v_max = 6;
  cfg.excess_max = 2;
  cfg.pilot_words = 5;
  cfg.pilot_word_length = 100;
  cfg.pilot_budget = RunBudget{20'000, 2'000};
  auto cands = generate_candidates(cfg, 2024, 200, 1);
  REQUIRE(cands.size() == 200);
  std::map<std::string, int> hist;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    CHECK(cands[i].index == i);
    hist[std::string(screen_outcome_name(cands[i].report.outcome))]++;
  }
  CHECK(hist["rejected_balance"] == 166);
  CHECK(hist["rejected_growth"] == 3);
  CHECK(hist["rejected_pilot"] == 31);
  CHECK(hist["selected"] == 0);

  // the any-survivor mode keeps three of the pilot rejections
  GeneratorConfig any = cfg;
  any.survive_mode = GeneratorConfig::SurviveMode::any;
  auto cands2 = generate_candidates(any, 2024, 200, 1);
  std::map<std::string, int> hist2;
  for (auto& c : cands2) hist2[std::string(screen_outcome_name(c.report.outcome))]++;
  CHECK(hist2["rejected_pilot"] == 28);
  CHECK(hist2["selected"] == 3);
  for (auto& c : cands2) {
    if (c.report.outcome != ScreenOutcome::selected) continue;
    CHECK(!c.report.decidable.has_value());
    CHECK(c.report.balance == 0);
    CHECK(c.report.pilots_survived > 0);
  }
  // first selected candidate pinned byte for byte
  for (auto& c : cands2) {
    if (c.report.outcome == ScreenOutcome::selected) {
      CHECK(c.index == 82);
      CHECK(c.system.serialize() == "v=3\n0 -> 0\n1 -> 10110\n");
      break;
    }
  }
}

TEST_CASE("candidate batches are reproducible and thread-count independent") {
  GeneratorConfig cfg;
  cfg.pilot_words = 3;
  cfg.pilot_word_length = 50;
  cfg.pilot_budget = RunBudget{5'000, 1'000};
  auto a = generate_candidates(cfg, 5, 60, 1);
  auto b = generate_candidates(cfg, 5, 60, 3);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].system.serialize() == b[i].system.serialize());
    CHECK(a[i].report.outcome == b[i].report.outcome);
    CHECK(a[i].report.pilots_survived == b[i].report.pilots_survived);
  }
}

TEST_CASE("a deletion number forced to one rejects every candidate as decidable") {
  GeneratorConfig cfg;
  cfg.v_min = 1;
  cfg.v_max = 1;
  auto cands = generate_candidates(cfg, 3, 50, 1);
  for (auto& c : cands) {
    CHECK(c.report.outcome == ScreenOutcome::rejected_decidable);
    CHECK(c.report.decidable == DecidableReason::v1);
    CHECK(c.report.pilots_run == 0);
  }
}
