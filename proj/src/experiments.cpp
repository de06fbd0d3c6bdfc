// Experiment drivers and their file writers.
#include "taglab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>

#include <json.hpp>

#include "taglab/parallel.hpp"
#include "taglab/rng.hpp"

namespace taglab {

namespace {

std::uint64_t resolution_step_of(const RunOutcome& o) {
  switch (o.kind) {
    case OutcomeKind::periodic:
      return o.entry_step + o.period;
    case OutcomeKind::halted:
    case OutcomeKind::length_bound_exceeded:
      return o.steps;
    case OutcomeKind::budget_exhausted:
      return never_resolved;
  }
  return never_resolved;
}

}  // namespace

Exp1Result exp1_census(const TagSystem& sys, const std::string& system_id, std::uint64_t n_words,
                       std::size_t word_length, const RunBudget& budget, std::uint64_t seed,
                       unsigned threads) {
  sys.validate();
  if (word_length == 0) throw ConfigError("census words must be non-empty");

  Exp1Result result;
  result.records.resize(n_words);
  parallel_for(n_words, threads, [&](std::uint64_t i) {
    SplitMix64 rng = rng_stream(seed, i, 0);
    Word w = random_word(rng, word_length, sys.mu());
    RunResult r = run(sys, w, budget, true);
    ExperimentRecord& rec = result.records[i];
    rec.system_id = system_id;
    rec.word_index = i;
    rec.initial_word = std::move(w);
    rec.outcome = r.outcome;
    rec.max_length_seen = r.max_length_seen;
    rec.resolution_step = resolution_step_of(r.outcome);
  });

  for (const ExperimentRecord& rec : result.records)
    result.histogram[static_cast<std::size_t>(rec.outcome.kind)] += 1;
  result.survival = survival_curve(result.records, budget.max_steps);
  return result;
}

std::vector<SurvivalPoint> survival_curve(const std::vector<ExperimentRecord>& records,
                                          std::uint64_t max_steps) {
  if (max_steps == 0) throw ConfigError("survival curve needs max_steps >= 1");
  constexpr int points = 64;
  std::vector<SurvivalPoint> curve(points);
  for (int i = 0; i < points; ++i) {
    // log-spaced thresholds from 1 to max_steps inclusive
    std::uint64_t t =
        i == points - 1
            ? max_steps
            : static_cast<std::uint64_t>(
                  std::llround(std::pow(static_cast<double>(max_steps), i / double(points - 1))));
    curve[i].threshold = std::min(t, max_steps);
    std::uint64_t unresolved = 0;
    for (const ExperimentRecord& rec : records)
      if (rec.resolution_step > curve[i].threshold) ++unresolved;
    curve[i].unresolved = unresolved;
  }
  return curve;
}

Exp2Result exp2_period_census(const TagSystem& sys, const std::vector<ExperimentRecord>& records,
                              unsigned threads) {
  sys.validate();
  std::vector<const ExperimentRecord*> periodic;
  for (const ExperimentRecord& rec : records)
    if (rec.outcome.kind == OutcomeKind::periodic) periodic.push_back(&rec);

  Exp2Result result;
  result.orbits.resize(periodic.size());
  parallel_for(periodic.size(), threads, [&](std::size_t i) {
    const ExperimentRecord& rec = *periodic[i];
    OrbitRecord& row = result.orbits[i];
    row.word_index = rec.word_index;
    row.entry_step = rec.outcome.entry_step;
    row.orbit = extract_orbit(sys, rec.initial_word,
                              CycleInfo{rec.outcome.entry_step, rec.outcome.period});
    try {
      row.type = classify_period_type(row.orbit);
    } catch (const UnclassifiableOrbit&) {
      row.type = std::nullopt;
    }
  });

  for (const OrbitRecord& row : result.orbits) {
    std::string key = row.type ? std::string(period_type_name(*row.type)) : "unclassifiable";
    result.histogram[key] += 1;
  }
  return result;
}

namespace {

// Word length after each step, indices 0..horizon (may stop early at a halt).
// Lengths are clamped to 32 bits; the experiments keep bounds far below that.
std::vector<std::uint32_t> length_profile(const TagSystem& sys, const Word& start,
                                          std::uint64_t horizon) {
  std::vector<std::uint32_t> lengths;
  lengths.reserve(std::min<std::uint64_t>(horizon + 1, 1u << 20));
  Trajectory traj(sys, start);
  lengths.push_back(static_cast<std::uint32_t>(std::min<std::size_t>(traj.length(), UINT32_MAX)));
  while (traj.steps() < horizon && !traj.halted()) {
    traj.advance();
    lengths.push_back(static_cast<std::uint32_t>(std::min<std::size_t>(traj.length(), UINT32_MAX)));
  }
  return lengths;
}

std::uint64_t horizon_of(const RunOutcome& o) {
  return o.kind == OutcomeKind::periodic ? o.entry_step + o.period : o.steps;
}

}  // namespace

Exp3Result exp3_sensitivity(const TagSystem& sys, const Word& base, const RunBudget& budget,
                            unsigned threads) {
  sys.validate();
  if (base.empty()) throw EmptyWordError("sensitivity needs a non-empty base word");
  std::uint32_t mu = sys.mu();
  if (mu < 2) throw ConfigError("sensitivity needs mu >= 2: no substitutions exist for mu = 1");

  Exp3Result result;
  RunResult base_run = run(sys, base, budget, true);
  result.base_outcome = base_run.outcome;
  result.base_resolution = resolution_step_of(base_run.outcome);
  std::vector<std::uint32_t> base_lengths = length_profile(sys, base, horizon_of(base_run.outcome));

  std::size_t per_position = mu - 1;
  std::size_t n_rows = base.size() * per_position;
  result.rows.resize(n_rows);
  parallel_for(n_rows, threads, [&](std::size_t r) {
    std::size_t pos = r / per_position;
    Symbol rep = static_cast<Symbol>(r % per_position);
    if (rep >= base[pos]) rep = static_cast<Symbol>(rep + 1);  // skip the base symbol

    Word variant = base;
    std::vector<Symbol> buf(variant.view().begin(), variant.view().end());
    buf[pos] = rep;
    variant = Word(std::move(buf));

    RunResult vr = run(sys, variant, budget, true);
    SensitivityRow& row = result.rows[r];
    row.position = pos;
    row.replacement = rep;
    row.base_kind = base_run.outcome.kind;
    row.variant_kind = vr.outcome.kind;
    row.class_changed = vr.outcome.kind != base_run.outcome.kind;

    std::uint64_t res_v = resolution_step_of(vr.outcome);
    if (result.base_resolution == never_resolved && res_v == never_resolved)
      row.delta_steps = 0;
    else if (result.base_resolution == never_resolved || res_v == never_resolved)
      row.delta_steps = never_resolved;
    else
      row.delta_steps = result.base_resolution > res_v ? result.base_resolution - res_v
                                                       : res_v - result.base_resolution;

    // lockstep length comparison over the overlap of both resolved windows
    std::vector<std::uint32_t> var_lengths = length_profile(sys, variant, horizon_of(vr.outcome));
    std::size_t overlap = std::min(base_lengths.size(), var_lengths.size());
    for (std::size_t t = 0; t < overlap; ++t) {
      if (base_lengths[t] != var_lengths[t]) {
        row.first_length_divergence = t;
        break;
      }
    }
  });

  std::size_t changed = 0;
  for (const SensitivityRow& row : result.rows) changed += row.class_changed ? 1 : 0;
  result.sensitivity_score = n_rows == 0 ? 0.0 : double(changed) / double(n_rows);
  return result;
}

std::vector<Symbol> collect_stream(const TagSystem& sys, const Word& start, std::uint64_t length,
                                   const RunBudget& budget, bool whole_words) {
  sys.validate();
  std::vector<Symbol> out;
  out.reserve(std::min<std::uint64_t>(length, 1u << 24));
  Trajectory traj(sys, start);

  auto take = [&](std::span<const Symbol> s) {
    std::size_t room = static_cast<std::size_t>(length - out.size());
    std::size_t n = std::min(room, s.size());
    out.insert(out.end(), s.begin(), s.begin() + static_cast<std::ptrdiff_t>(n));
  };

  if (whole_words) take(traj.view());
  while (out.size() < length && !traj.halted() && traj.steps() < budget.max_steps &&
         traj.length() <= budget.max_length) {
    Symbol scanned = traj.advance();
    if (whole_words)
      take(traj.view());
    else
      out.push_back(scanned);
  }
  return out;
}

Exp4Result exp4_randomness(const TagSystem& sys, const Word& start, std::uint64_t stream_length,
                           const RunBudget& budget, double alpha, bool whole_words) {
  Exp4Result result;
  result.whole_words = whole_words;
  std::vector<Symbol> stream = collect_stream(sys, start, stream_length, budget, whole_words);
  result.stream_collected = stream.size();
  result.report = randomness_battery(stream, alpha);
  return result;
}

Exp5Result exp5_entropy(const TagSystem& sys, const Word& start, std::uint64_t stream_length,
                        std::uint32_t order, const RunBudget& budget, double smoothing) {
  double cells = std::pow(static_cast<double>(sys.mu()), order + 1.0);
  if (cells > (1 << 24)) throw ConfigError("context table too large: mu^(order+1) > 2^24");
  Exp5Result result;
  std::vector<Symbol> stream = collect_stream(sys, start, stream_length, budget, false);
  result.stream_collected = stream.size();
  // an estimate over mu^(order+1) cells needs on the order of 100 samples
  // per cell; a shorter collection (halt, budget) is refused, not fudged
  double need = 100.0 * cells;
  if (static_cast<double>(stream.size()) < need)
    throw StreamTooShort("order-" + std::to_string(order) + " estimate needs " +
                         std::to_string(static_cast<std::uint64_t>(need)) + " symbols, collected " +
                         std::to_string(stream.size()));
  result.report = conditional_entropy(stream, sys.mu(), order, smoothing);
  return result;
}

// ---------------------------------------------------------------------------
// file writers

namespace {

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::ofstream open_out(const std::string& path, bool timestamp) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file: " + path);
  if (timestamp) {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[40];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    out << "# generated_utc " << buf << "\n";
  }
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw Error("write failed: " + path);
}

}  // namespace

void write_census_csv(const std::string& path, const std::vector<ExperimentRecord>& records,
                      std::uint32_t mu, bool timestamp) {
  std::ofstream out = open_out(path, timestamp);
  out << "system_id,word_index,initial_word,outcome,steps,period,entry_step,resolution_step,"
         "max_length\n";
  for (const ExperimentRecord& rec : records) {
    out << csv_field(rec.system_id) << ',' << rec.word_index << ','
        << csv_field(rec.initial_word.str(mu)) << ',' << outcome_name(rec.outcome.kind) << ','
        << rec.outcome.steps << ',';
    if (rec.outcome.kind == OutcomeKind::periodic)
      out << rec.outcome.period << ',' << rec.outcome.entry_step << ',';
    else
      out << ",,";
    if (rec.resolution_step != never_resolved) out << rec.resolution_step;
    out << ',' << rec.max_length_seen << '\n';
  }
  finish(out, path);
}

void write_survival_csv(const std::string& path, const std::vector<SurvivalPoint>& survival,
                        bool timestamp) {
  std::ofstream out = open_out(path, timestamp);
  out << "step_threshold,unresolved_count\n";
  for (const SurvivalPoint& p : survival) out << p.threshold << ',' << p.unresolved << '\n';
  finish(out, path);
}

void write_periods_jsonl(const std::string& path, const Exp2Result& result, std::uint32_t mu,
                         std::uint32_t v) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file: " + path);
  for (const OrbitRecord& row : result.orbits) {
    nlohmann::json j;
    j["word_index"] = row.word_index;
    j["entry_step"] = row.entry_step;
    j["period"] = row.orbit.period;
    j["type"] = row.type ? std::string(period_type_name(*row.type)) : "unclassifiable";
    j["deletion_number"] = v;
    std::vector<std::string> words, structures;
    for (const Word& w : row.orbit.words) words.push_back(w.str(mu));
    for (const Word& s : row.orbit.structures) structures.push_back(s.str(mu));
    j["words"] = words;
    j["structures"] = structures;
    out << j.dump() << '\n';
  }
  finish(out, path);
}

void write_sensitivity_csv(const std::string& path, const Exp3Result& result, std::uint32_t mu,
                           bool timestamp) {
  (void)mu;
  std::ofstream out = open_out(path, timestamp);
  out << "position,replacement,outcome_base,outcome_variant,class_changed,delta_steps,"
         "first_length_divergence\n";
  for (const SensitivityRow& row : result.rows) {
    out << row.position << ',' << int(row.replacement) << ',' << outcome_name(row.base_kind) << ','
        << outcome_name(row.variant_kind) << ',' << (row.class_changed ? 1 : 0) << ',';
    if (row.delta_steps != never_resolved) out << row.delta_steps;
    out << ',';
    if (row.first_length_divergence) out << *row.first_length_divergence;
    out << '\n';
  }
  finish(out, path);
}

void write_randomness_csv(const std::string& path, const Exp4Result& result, bool timestamp) {
  std::ofstream out = open_out(path, timestamp);
  out << "test,n,statistic,p_value,alpha,verdict\n";
  for (const StatTest& t : result.report.tests) {
    out << t.name << ',' << result.report.n << ',' << fmt_double(t.statistic) << ','
        << fmt_double(t.p_value) << ',' << fmt_double(result.report.alpha) << ','
        << (t.pass ? "pass" : "fail") << '\n';
  }
  finish(out, path);
}

void write_entropy_csv(const std::string& path, const Exp5Result& result, bool timestamp) {
  std::ofstream out = open_out(path, timestamp);
  out << "row_type,context,count,probability,conditional_entropy_bits,entropy_rate_bits\n";
  out << "rate,,,,," << fmt_double(result.report.rate_bits) << '\n';
  for (const ContextRow& row : result.report.contexts) {
    out << "context," << csv_field(row.context) << ',' << row.count << ','
        << fmt_double(row.probability) << ',' << fmt_double(row.conditional_entropy_bits) << ",\n";
  }
  finish(out, path);
}

}  // namespace taglab
