// taglab command line: runs and reachability, period classification, the
// Collatz sweep, candidate generation and screening, the five experiments,
// checkpointed soak runs, and a throughput benchmark.
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "taglab/collatz.hpp"
#include "taglab/cycle.hpp"
#include "taglab/experiments.hpp"
#include "taglab/generator.hpp"
#include "taglab/stats.hpp"

using namespace taglab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_mismatch = 3;
constexpr int exit_budget = 4;

// a budget ran out in a mode whose contract demands a definite answer
struct BudgetRequired : Error {
  using Error::Error;
};

// a checkpoint whose stored hash disagrees with its stored word
struct CheckpointMismatch : Error {
  using Error::Error;
};

std::string default_out_dir() {
  const char* env = std::getenv("TAGLAB_OUT");
  return env && *env ? env : ".";
}

void emit(const json& j) { std::cout << j.dump() << "\n"; }

void echo_config(const std::string& out_dir, const json& cfg) {
  fs::create_directories(out_dir);
  std::string path = out_dir + "/config.json";
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open output file: " + path);
  f << cfg.dump(2) << "\n";
  f.flush();
  if (!f) throw Error("write failed: " + path);
}

std::ofstream open_artifact(const std::string& path, bool timestamp) {
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

void finish_artifact(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw Error("write failed: " + path);
}

std::string slurp_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --preset or --system selection shared by most subcommands
struct SysSel {
  std::string preset_name;
  std::string file;
};

void add_sys_options(CLI::App* cmd, SysSel& sel) {
  cmd->add_option("--preset", sel.preset_name, "built-in system name");
  cmd->add_option("--system", sel.file, "path to a tag system text file");
}

TagSystem load_system(const SysSel& sel, std::string* id = nullptr) {
  if (!sel.preset_name.empty() && !sel.file.empty())
    throw ConfigError("give either --preset or --system, not both");
  if (!sel.preset_name.empty()) {
    if (id) *id = sel.preset_name;
    return preset(sel.preset_name);
  }
  if (!sel.file.empty()) {
    if (id) *id = fs::path(sel.file).stem().string();
    TagSystem sys = TagSystem::parse(slurp_file(sel.file));
    sys.validate();
    return sys;
  }
  throw ConfigError("one of --preset or --system is required");
}

json sys_config(const SysSel& sel) {
  json j;
  j["preset"] = sel.preset_name;
  j["system_file"] = sel.file;
  return j;
}

json outcome_json(const RunOutcome& o) {
  json j;
  j["outcome"] = std::string(outcome_name(o.kind));
  j["steps"] = o.steps;
  if (o.kind == OutcomeKind::periodic) {
    j["period"] = o.period;
    j["entry_step"] = o.entry_step;
  }
  return j;
}

void parse_v_range(const std::string& text, std::uint32_t& lo, std::uint32_t& hi) {
  try {
    auto colon = text.find(':');
    if (colon == std::string::npos) {
      lo = hi = static_cast<std::uint32_t>(std::stoul(text));
    } else {
      lo = static_cast<std::uint32_t>(std::stoul(text.substr(0, colon)));
      hi = static_cast<std::uint32_t>(std::stoul(text.substr(colon + 1)));
    }
  } catch (const std::exception&) {
    throw ConfigError("bad deletion-number range, expected N or MIN:MAX: " + text);
  }
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

// ---------------------------------------------------------------------------
// subcommand bodies

struct Common {
  std::string out_dir = default_out_dir();
  unsigned threads = 0;
  bool no_timestamp = false;
};

int cmd_run(const Common& common, const SysSel& sel, const std::string& word_text,
            std::uint64_t max_steps, std::uint64_t max_length, bool no_detect) {
  TagSystem sys = load_system(sel);
  Word start = Word::parse(word_text, sys.mu());
  json cfg = sys_config(sel);
  cfg["command"] = "run";
  cfg["word"] = word_text;
  cfg["max_steps"] = max_steps;
  cfg["max_length"] = max_length;
  cfg["detect_cycles"] = !no_detect;
  echo_config(common.out_dir, cfg);

  RunResult r = run(sys, start, RunBudget{max_steps, max_length}, !no_detect);
  json j = outcome_json(r.outcome);
  j["command"] = "run";
  j["max_length_seen"] = r.max_length_seen;
  j["final_length"] = r.final_word.size();
  emit(j);
  return exit_ok;
}

int cmd_reach(const Common& common, const SysSel& sel, const std::string& from_text,
              const std::string& to_text, std::uint64_t max_steps, std::uint64_t max_length) {
  TagSystem sys = load_system(sel);
  Word from = Word::parse(from_text, sys.mu());
  Word to = Word::parse(to_text, sys.mu());
  json cfg = sys_config(sel);
  cfg["command"] = "reach";
  cfg["from"] = from_text;
  cfg["to"] = to_text;
  cfg["max_steps"] = max_steps;
  cfg["max_length"] = max_length;
  echo_config(common.out_dir, cfg);

  ReachResult r = reaches(sys, from, to, RunBudget{max_steps, max_length});
  json j;
  j["command"] = "reach";
  j["found"] = r.found;
  if (r.found) {
    j["step"] = r.found_step;
  } else {
    j["definitive"] = r.definitive_miss;
    j["run"] = outcome_json(r.outcome);
  }
  emit(j);
  if (!r.found && !r.definitive_miss)
    throw BudgetRequired("budget exhausted before reachability was settled");
  return exit_ok;
}

int cmd_classify_period(const Common& common, const SysSel& sel, const std::string& word_text,
                        std::uint64_t max_steps, std::uint64_t max_length) {
  TagSystem sys = load_system(sel);
  Word start = Word::parse(word_text, sys.mu());
  json cfg = sys_config(sel);
  cfg["command"] = "classify-period";
  cfg["word"] = word_text;
  cfg["max_steps"] = max_steps;
  cfg["max_length"] = max_length;
  echo_config(common.out_dir, cfg);

  RunOutcome terminal;
  std::optional<CycleInfo> info = detect_cycle(sys, start, RunBudget{max_steps, max_length},
                                               &terminal);
  json j;
  j["command"] = "classify-period";
  if (!info) {
    j["periodic"] = false;
    j["run"] = outcome_json(terminal);
    emit(j);
    if (terminal.kind == OutcomeKind::halted) return exit_ok;  // definitive: no cycle exists
    throw BudgetRequired("budget exhausted before a cycle or halt was found");
  }
  PeriodicSet orbit = extract_orbit(sys, start, *info);
  j["periodic"] = true;
  j["entry_step"] = info->entry_step;
  j["period"] = info->period;
  std::vector<std::string> words, structures;
  for (const Word& w : orbit.words) words.push_back(w.str(sys.mu()));
  for (const Word& s : orbit.structures) structures.push_back(s.str(sys.mu()));
  j["words"] = words;
  j["structures"] = structures;
  try {
    j["type"] = std::string(period_type_name(classify_period_type(orbit)));
  } catch (const UnclassifiableOrbit&) {
    j["type"] = "unclassifiable";
  }
  emit(j);
  return exit_ok;
}

int cmd_collatz_verify(const Common& common, std::uint64_t max_n, std::uint64_t max_phases,
                       std::uint64_t max_steps, std::uint64_t max_length,
                       const std::string& csv_name) {
  json cfg;
  cfg["command"] = "collatz-verify";
  cfg["max_n"] = max_n;
  cfg["max_phases"] = max_phases;
  cfg["max_steps"] = max_steps;
  cfg["max_length"] = max_length;
  cfg["csv"] = csv_name;
  cfg["threads"] = common.threads;
  echo_config(common.out_dir, cfg);

  std::vector<CollatzTrace> rows;
  CollatzSweepResult s = collatz_sweep(max_n, max_phases, RunBudget{max_steps, max_length},
                                       common.threads, &rows);
  std::string path = common.out_dir + "/" + csv_name;
  std::ofstream out = open_artifact(path, !common.no_timestamp);
  out << "n,phases,tag_steps,max_word_length\n";
  for (const CollatzTrace& t : rows) {
    out << t.n0 << ',';
    for (std::size_t i = 0; i < t.phases.size(); ++i) {
      if (i) out << ';';
      out << t.phases[i];
    }
    out << ',' << t.tag_steps << ',' << t.max_word_length << '\n';
  }
  finish_artifact(out, path);

  json j;
  j["command"] = "collatz-verify";
  j["verified"] = s.verified;
  j["unresolved"] = s.unresolved;
  j["total_tag_steps"] = s.total_tag_steps;
  j["max_phase_seen"] = s.max_phase_seen;
  j["max_word_length"] = s.max_word_length;
  emit(j);
  if (s.unresolved > 0)
    throw BudgetRequired(std::to_string(s.unresolved) + " of " + std::to_string(max_n) +
                         " traces did not reach 1 within the budget");
  return exit_ok;
}

GeneratorConfig build_generator_config(const std::string& v_range, std::uint32_t mu,
                                       std::uint32_t excess, const std::string& balance,
                                       const std::string& survive, std::uint32_t pilot_words,
                                       std::uint64_t pilot_length, std::uint64_t pilot_steps,
                                       std::uint64_t pilot_max_length) {
  GeneratorConfig cfg;
  cfg.mu = mu;
  parse_v_range(v_range, cfg.v_min, cfg.v_max);
  cfg.excess_max = excess;
  if (balance == "eq0")
    cfg.balance_mode = GeneratorConfig::BalanceMode::eq0;
  else if (balance == "le0")
    cfg.balance_mode = GeneratorConfig::BalanceMode::le0;
  else
    throw ConfigError("balance mode must be eq0 or le0: " + balance);
  if (survive == "all")
    cfg.survive_mode = GeneratorConfig::SurviveMode::all;
  else if (survive == "any")
    cfg.survive_mode = GeneratorConfig::SurviveMode::any;
  else
    throw ConfigError("survive mode must be all or any: " + survive);
  cfg.pilot_words = pilot_words;
  cfg.pilot_word_length = pilot_length;
  cfg.pilot_budget = RunBudget{pilot_steps, pilot_max_length};
  return cfg;
}

json screen_report_json(const ScreenReport& r) {
  json j;
  j["outcome"] = std::string(screen_outcome_name(r.outcome));
  j["balance"] = r.balance;
  if (r.decidable)
    j["decidable"] = std::string(decidable_reason_name(*r.decidable));
  else
    j["decidable"] = nullptr;
  j["pilots_run"] = r.pilots_run;
  j["pilots_survived"] = r.pilots_survived;
  return j;
}

int cmd_generate(const Common& common, const json& cfg_echo, const GeneratorConfig& gcfg,
                 std::uint64_t seed, std::uint64_t count, bool selected_only) {
  echo_config(common.out_dir, cfg_echo);
  std::vector<Candidate> cands = generate_candidates(gcfg, seed, count, common.threads);

  std::string path = common.out_dir + "/candidates.jsonl";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file: " + path);
  std::map<std::string, std::uint64_t> hist;
  for (const Candidate& c : cands) {
    hist[std::string(screen_outcome_name(c.report.outcome))] += 1;
    if (selected_only && c.report.outcome != ScreenOutcome::selected) continue;
    json j = screen_report_json(c.report);
    j["index"] = c.index;
    j["system"] = c.system.serialize();
    j["v"] = c.system.v;
    out << j.dump() << '\n';
  }
  finish_artifact(out, path);

  json j;
  j["command"] = "generate";
  j["count"] = count;
  j["histogram"] = hist;
  emit(j);
  return exit_ok;
}

int cmd_screen(const Common& common, const SysSel& sel, const json& cfg_echo,
               const GeneratorConfig& gcfg, std::uint64_t seed) {
  TagSystem sys = load_system(sel);
  echo_config(common.out_dir, cfg_echo);
  ScreenReport r = screen_system(sys, gcfg, seed, 0);
  json j = screen_report_json(r);
  j["command"] = "screen";
  j["system"] = sys.serialize();
  emit(j);
  return exit_ok;
}

struct Exp1Opts {
  SysSel sel;
  std::string id;
  std::uint64_t words = 1998;
  std::uint64_t length = 300;
  std::uint64_t max_steps = 10'000'000;
  std::uint64_t max_length = 15'000;
  std::uint64_t seed = 0;
};

Exp1Result run_exp1(const Common& common, const Exp1Opts& o, TagSystem* sys_out,
                    std::string* id_out) {
  std::string id;
  TagSystem sys = load_system(o.sel, &id);
  if (!o.id.empty()) id = o.id;
  if (sys_out) *sys_out = sys;
  if (id_out) *id_out = id;
  return exp1_census(sys, id, o.words, o.length, RunBudget{o.max_steps, o.max_length}, o.seed,
                     common.threads);
}

json exp1_config(const Exp1Opts& o, const char* command) {
  json cfg = sys_config(o.sel);
  cfg["command"] = command;
  cfg["id"] = o.id;
  cfg["words"] = o.words;
  cfg["length"] = o.length;
  cfg["max_steps"] = o.max_steps;
  cfg["max_length"] = o.max_length;
  cfg["seed"] = o.seed;
  return cfg;
}

int cmd_exp1(const Common& common, const Exp1Opts& o) {
  echo_config(common.out_dir, exp1_config(o, "exp1"));
  Exp1Result r = run_exp1(common, o, nullptr, nullptr);
  TagSystem sys = load_system(o.sel);
  write_census_csv(common.out_dir + "/census.csv", r.records, sys.mu(), !common.no_timestamp);
  write_survival_csv(common.out_dir + "/survival.csv", r.survival, !common.no_timestamp);
  json j;
  j["command"] = "exp1";
  for (std::size_t k = 0; k < r.histogram.size(); ++k)
    j[std::string(outcome_name(static_cast<OutcomeKind>(k)))] = r.histogram[k];
  emit(j);
  return exit_ok;
}

int cmd_exp2(const Common& common, const Exp1Opts& o) {
  echo_config(common.out_dir, exp1_config(o, "exp2"));
  TagSystem sys;
  Exp1Result r1 = run_exp1(common, o, &sys, nullptr);
  Exp2Result r2 = exp2_period_census(sys, r1.records, common.threads);
  write_periods_jsonl(common.out_dir + "/periods.jsonl", r2, sys.mu(), sys.v);
  json j;
  j["command"] = "exp2";
  j["orbits"] = r2.orbits.size();
  j["histogram"] = r2.histogram;
  emit(j);
  return exit_ok;
}

int cmd_exp3(const Common& common, const SysSel& sel, const std::string& word_text,
             std::uint64_t max_steps, std::uint64_t max_length) {
  TagSystem sys = load_system(sel);
  Word base = Word::parse(word_text, sys.mu());
  json cfg = sys_config(sel);
  cfg["command"] = "exp3";
  cfg["word"] = word_text;
  cfg["max_steps"] = max_steps;
  cfg["max_length"] = max_length;
  echo_config(common.out_dir, cfg);

  Exp3Result r = exp3_sensitivity(sys, base, RunBudget{max_steps, max_length}, common.threads);
  write_sensitivity_csv(common.out_dir + "/sensitivity.csv", r, sys.mu(), !common.no_timestamp);
  json j;
  j["command"] = "exp3";
  j["base"] = outcome_json(r.base_outcome);
  j["rows"] = r.rows.size();
  j["sensitivity_score"] = r.sensitivity_score;
  emit(j);
  return exit_ok;
}

int cmd_exp4(const Common& common, const SysSel& sel, const std::string& word_text,
             std::uint64_t stream, std::uint64_t max_steps, std::uint64_t max_length, double alpha,
             bool whole_words) {
  TagSystem sys = load_system(sel);
  Word start = Word::parse(word_text, sys.mu());
  json cfg = sys_config(sel);
  cfg["command"] = "exp4";
  cfg["word"] = word_text;
  cfg["stream"] = stream;
  cfg["max_steps"] = max_steps;
  cfg["max_length"] = max_length;
  cfg["alpha"] = alpha;
  cfg["whole_words"] = whole_words;
  echo_config(common.out_dir, cfg);

  Exp4Result r = exp4_randomness(sys, start, stream, RunBudget{max_steps, max_length}, alpha,
                                 whole_words);
  write_randomness_csv(common.out_dir + "/randomness.csv", r, !common.no_timestamp);
  json j;
  j["command"] = "exp4";
  j["collected"] = r.stream_collected;
  j["all_pass"] = r.report.all_pass;
  emit(j);
  return exit_ok;
}

int cmd_exp5(const Common& common, const SysSel& sel, const std::string& word_text,
             std::uint64_t stream, std::uint32_t order, double smoothing, std::uint64_t max_steps,
             std::uint64_t max_length) {
  TagSystem sys = load_system(sel);
  Word start = Word::parse(word_text, sys.mu());
  json cfg = sys_config(sel);
  cfg["command"] = "exp5";
  cfg["word"] = word_text;
  cfg["stream"] = stream;
  cfg["order"] = order;
  cfg["smoothing"] = smoothing;
  cfg["max_steps"] = max_steps;
  cfg["max_length"] = max_length;
  echo_config(common.out_dir, cfg);

  Exp5Result r = exp5_entropy(sys, start, stream, order, RunBudget{max_steps, max_length},
                              smoothing);
  write_entropy_csv(common.out_dir + "/entropy.csv", r, !common.no_timestamp);
  json j;
  j["command"] = "exp5";
  j["collected"] = r.stream_collected;
  j["rate_bits"] = r.report.rate_bits;
  emit(j);
  return exit_ok;
}

// ---------------------------------------------------------------------------
// soak: the long Post run from (100)^110 with atomic checkpoints

Word soak_start_word() {
  std::vector<Symbol> w;
  w.reserve(330);
  for (int i = 0; i < 110; ++i) {
    w.push_back(1);
    w.push_back(0);
    w.push_back(0);
  }
  return Word(std::move(w));
}

struct SoakState {
  std::uint64_t steps = 0;
  Word word;
};

void write_checkpoint(const std::string& dir, std::uint64_t steps, std::span<const Symbol> view) {
  std::string body = "taglab-soak 1\n";
  body += "steps " + std::to_string(steps) + "\n";
  body += "length " + std::to_string(view.size()) + "\n";
  body += "hash " + hash_hex(hash_symbols(view)) + "\n";
  body += "word ";
  for (Symbol s : view) body += static_cast<char>('0' + s);
  body += "\n";
  std::string tmp = dir + "/checkpoint.txt.tmp";
  std::string final_path = dir + "/checkpoint.txt";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot open checkpoint file: " + tmp);
    out << body;
    out.flush();
    if (!out) throw Error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), final_path.c_str()) != 0)
    throw Error("cannot move checkpoint into place: " + final_path);
}

SoakState load_checkpoint(const std::string& path) {
  std::istringstream in(slurp_file(path));
  std::string magic, key;
  int version = 0;
  in >> magic >> version;
  if (magic != "taglab-soak" || version != 1)
    throw CheckpointMismatch("unrecognized checkpoint header in " + path);
  SoakState st;
  std::uint64_t length = 0, stored_hash = 0;
  std::string digits;
  in >> key >> st.steps;
  if (key != "steps") throw CheckpointMismatch("malformed checkpoint: " + path);
  in >> key >> length;
  if (key != "length") throw CheckpointMismatch("malformed checkpoint: " + path);
  in >> key >> std::hex >> stored_hash >> std::dec;
  if (key != "hash") throw CheckpointMismatch("malformed checkpoint: " + path);
  in >> key >> digits;
  if (key != "word" || !in) throw CheckpointMismatch("malformed checkpoint: " + path);
  st.word = Word::parse(digits, 2);
  if (st.word.size() != length)
    throw CheckpointMismatch("checkpoint length disagrees with its word: " + path);
  if (hash_symbols(st.word.view()) != stored_hash)
    throw CheckpointMismatch("checkpoint hash disagrees with its word: " + path);
  return st;
}

int cmd_soak(const Common& common, std::uint64_t target_steps, std::uint64_t checkpoint_every,
             std::string dir) {
  if (checkpoint_every == 0) throw ConfigError("checkpoint interval must be >= 1");
  if (dir.empty()) dir = common.out_dir + "/soak";
  fs::create_directories(dir);
  json cfg;
  cfg["command"] = "soak";
  cfg["steps"] = target_steps;
  cfg["checkpoint_every"] = checkpoint_every;
  cfg["dir"] = dir;
  echo_config(common.out_dir, cfg);

  std::string cp_path = dir + "/checkpoint.txt";
  SoakState st;
  bool resumed = false;
  if (fs::exists(cp_path)) {
    st = load_checkpoint(cp_path);
    resumed = true;
  } else {
    st.word = soak_start_word();
    st.steps = 0;
  }

  TagSystem sys = post_system();
  Trajectory traj(sys, st.word, false);
  std::uint64_t absolute = st.steps;
  std::uint64_t written = 0;
  std::uint64_t next_cp = (absolute / checkpoint_every + 1) * checkpoint_every;
  while (absolute < target_steps && !traj.halted()) {
    std::uint64_t stop = std::min(target_steps, next_cp);
    while (absolute < stop && !traj.halted()) {
      traj.advance();
      ++absolute;
    }
    if (absolute == next_cp) {
      write_checkpoint(dir, absolute, traj.view());
      ++written;
      next_cp += checkpoint_every;
    }
  }
  // final checkpoint so a later invocation resumes from here exactly
  write_checkpoint(dir, absolute, traj.view());

  json j;
  j["command"] = "soak";
  j["steps"] = absolute;
  j["length"] = traj.length();
  j["word_hash"] = hash_hex(hash_symbols(traj.view()));
  j["halted"] = traj.halted();
  j["resumed_from"] = resumed ? json(st.steps) : json(nullptr);
  j["checkpoints_written"] = written;
  emit(j);
  return exit_ok;
}

int cmd_bench(const Common& common, const SysSel& sel, const std::string& word_text,
              std::uint64_t word_length, std::uint64_t steps, std::uint64_t max_length) {
  SysSel effective = sel;
  if (effective.preset_name.empty() && effective.file.empty())
    effective.preset_name = "post-00-1101";
  TagSystem sys = load_system(effective);
  Word start;
  if (!word_text.empty()) {
    start = Word::parse(word_text, sys.mu());
  } else {
    // repeat the canonical cycle word up to the requested length
    static const Symbol unit[6] = {0, 0, 1, 1, 0, 1};
    std::vector<Symbol> w;
    w.reserve(word_length);
    while (w.size() < word_length) w.push_back(unit[w.size() % 6]);
    start = Word(std::move(w));
  }
  json cfg = sys_config(effective);
  cfg["command"] = "bench";
  cfg["word_length"] = start.size();
  cfg["steps"] = steps;
  cfg["max_length"] = max_length;
  echo_config(common.out_dir, cfg);

  BenchResult r = throughput_bench(sys, start, steps, max_length);
  json j;
  j["command"] = "bench";
  j["steps"] = r.steps;
  j["seconds"] = r.seconds;
  j["steps_per_second"] = r.steps_per_second;
  j["max_length_seen"] = r.max_length_seen;
  emit(j);
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tag system laboratory"};
  app.require_subcommand(1);
  app.fallthrough();

  Common common;
  app.add_option("--out", common.out_dir, "output directory for artifacts")
      ->envname("TAGLAB_OUT");
  app.add_option("--threads", common.threads, "worker threads, 0 = hardware");
  app.add_flag("--no-timestamp", common.no_timestamp, "omit timestamp header lines");

  // run
  auto* c_run = app.add_subcommand("run", "run one word to halt, cycle, or budget");
  SysSel run_sel;
  std::string run_word;
  std::uint64_t run_steps = 10'000'000, run_len = 15'000;
  bool run_nodetect = false;
  add_sys_options(c_run, run_sel);
  c_run->add_option("--word", run_word, "start word")->required();
  c_run->add_option("--max-steps", run_steps, "step budget");
  c_run->add_option("--max-length", run_len, "word length bound");
  c_run->add_flag("--no-detect", run_nodetect, "disable cycle detection");

  // reach
  auto* c_reach = app.add_subcommand("reach", "does one word reach another");
  SysSel reach_sel;
  std::string reach_from, reach_to;
  std::uint64_t reach_steps = 10'000'000, reach_len = 15'000;
  add_sys_options(c_reach, reach_sel);
  c_reach->add_option("--from", reach_from, "start word")->required();
  c_reach->add_option("--to", reach_to, "target word")->required();
  c_reach->add_option("--max-steps", reach_steps, "step budget");
  c_reach->add_option("--max-length", reach_len, "word length bound");

  // classify-period
  auto* c_cls = app.add_subcommand("classify-period", "detect a cycle and type its orbit");
  SysSel cls_sel;
  std::string cls_word;
  std::uint64_t cls_steps = 10'000'000, cls_len = 15'000;
  add_sys_options(c_cls, cls_sel);
  c_cls->add_option("--word", cls_word, "start word")->required();
  c_cls->add_option("--max-steps", cls_steps, "step budget");
  c_cls->add_option("--max-length", cls_len, "word length bound");

  // collatz-verify
  auto* c_col = app.add_subcommand("collatz-verify", "sweep the unary Collatz runs against the oracle");
  std::uint64_t col_max_n = 0, col_phases = 100'000, col_steps = 100'000'000, col_len = 10'000'000;
  std::string col_csv = "collatz.csv";
  c_col->add_option("--max-n", col_max_n, "verify every 1 <= n <= max-n")->required();
  c_col->add_option("--max-phases", col_phases, "phase cap per start");
  c_col->add_option("--max-steps", col_steps, "step budget per start");
  c_col->add_option("--max-length", col_len, "word length bound per start");
  c_col->add_option("--csv", col_csv, "csv file name inside the output directory");

  // generator options shared by generate and screen
  std::string gen_v = "3:15", gen_balance = "eq0", gen_survive = "all";
  std::uint32_t gen_mu = 2, gen_excess = 4, gen_pilot_words = 20;
  std::uint64_t gen_pilot_length = 300, gen_pilot_steps = 10'000'000, gen_pilot_len = 15'000;
  std::uint64_t gen_seed = 0, gen_count = 0;
  bool gen_selected_only = false;

  auto add_screen_options = [&](CLI::App* cmd) {
    cmd->add_option("--v", gen_v, "deletion number, N or MIN:MAX");
    cmd->add_option("--balance", gen_balance, "balance gate: eq0 or le0");
    cmd->add_option("--survive", gen_survive, "pilot gate: all or any");
    cmd->add_option("--pilot-words", gen_pilot_words, "pilot words per candidate");
    cmd->add_option("--pilot-length", gen_pilot_length, "pilot word length");
    cmd->add_option("--pilot-steps", gen_pilot_steps, "pilot step budget");
    cmd->add_option("--pilot-max-length", gen_pilot_len, "pilot length bound");
    cmd->add_option("--seed", gen_seed, "sampling seed");
  };

  auto* c_gen = app.add_subcommand("generate", "sample and screen candidate systems");
  c_gen->add_option("--mu", gen_mu, "alphabet size");
  c_gen->add_option("--excess", gen_excess, "bound on |appendant length - v|");
  c_gen->add_option("--count", gen_count, "candidates to sample")->required();
  c_gen->add_flag("--selected-only", gen_selected_only, "write only selected candidates");
  add_screen_options(c_gen);

  auto* c_scr = app.add_subcommand("screen", "screen one existing system");
  SysSel scr_sel;
  add_sys_options(c_scr, scr_sel);
  add_screen_options(c_scr);

  // exp1 / exp2
  Exp1Opts e1;
  auto add_exp1_options = [&](CLI::App* cmd) {
    add_sys_options(cmd, e1.sel);
    cmd->add_option("--id", e1.id, "system id used in records");
    cmd->add_option("--words", e1.words, "number of random words");
    cmd->add_option("--length", e1.length, "word length");
    cmd->add_option("--max-steps", e1.max_steps, "step budget per word");
    cmd->add_option("--max-length", e1.max_length, "word length bound");
    cmd->add_option("--seed", e1.seed, "word sampling seed");
  };
  auto* c_e1 = app.add_subcommand("exp1", "mortality census over random words");
  add_exp1_options(c_e1);
  auto* c_e2 = app.add_subcommand("exp2", "period census over the same words");
  add_exp1_options(c_e2);

  // exp3
  auto* c_e3 = app.add_subcommand("exp3", "single-symbol substitution sensitivity");
  SysSel e3_sel;
  std::string e3_word;
  std::uint64_t e3_steps = 1'000'000, e3_len = 15'000;
  add_sys_options(c_e3, e3_sel);
  c_e3->add_option("--word", e3_word, "base word")->required();
  c_e3->add_option("--max-steps", e3_steps, "step budget per variant");
  c_e3->add_option("--max-length", e3_len, "word length bound");

  // exp4
  auto* c_e4 = app.add_subcommand("exp4", "randomness battery over a scan stream");
  SysSel e4_sel;
  std::string e4_word;
  std::uint64_t e4_stream = 1'000'000, e4_steps = 100'000'000, e4_len = 1'000'000;
  double e4_alpha = 0.01;
  bool e4_whole = false;
  add_sys_options(c_e4, e4_sel);
  c_e4->add_option("--word", e4_word, "start word")->required();
  c_e4->add_option("--stream", e4_stream, "symbols to collect");
  c_e4->add_option("--max-steps", e4_steps, "step budget");
  c_e4->add_option("--max-length", e4_len, "word length bound");
  c_e4->add_option("--alpha", e4_alpha, "significance level");
  c_e4->add_flag("--whole-words", e4_whole, "stream whole words instead of scanned symbols");

  // exp5
  auto* c_e5 = app.add_subcommand("exp5", "conditional entropy of a scan stream");
  SysSel e5_sel;
  std::string e5_word;
  std::uint64_t e5_stream = 1'000'000, e5_steps = 100'000'000, e5_len = 1'000'000;
  std::uint32_t e5_order = 1;
  double e5_smoothing = 0.0;
  add_sys_options(c_e5, e5_sel);
  c_e5->add_option("--word", e5_word, "start word")->required();
  c_e5->add_option("--stream", e5_stream, "symbols to collect");
  c_e5->add_option("--order", e5_order, "context length");
  c_e5->add_option("--smoothing", e5_smoothing, "add-alpha weight, 0 = plug-in");
  c_e5->add_option("--max-steps", e5_steps, "step budget");
  c_e5->add_option("--max-length", e5_len, "word length bound");

  // soak
  auto* c_soak = app.add_subcommand("soak", "long checkpointed run of the 00/1101 system");
  std::uint64_t soak_steps = 0, soak_every = 1'000'000'000;
  std::string soak_dir;
  c_soak->add_option("--steps", soak_steps, "absolute step target")->required();
  c_soak->add_option("--checkpoint-every", soak_every, "steps between checkpoints");
  c_soak->add_option("--dir", soak_dir, "checkpoint directory, default <out>/soak");

  // bench
  auto* c_bench = app.add_subcommand("bench", "time raw stepping throughput");
  SysSel bench_sel;
  std::string bench_word;
  std::uint64_t bench_word_len = 99'996, bench_steps = 20'000'000, bench_max_len = 0;
  add_sys_options(c_bench, bench_sel);
  c_bench->add_option("--word", bench_word, "explicit start word");
  c_bench->add_option("--word-length", bench_word_len, "generated start word length");
  c_bench->add_option("--steps", bench_steps, "steps to time");
  c_bench->add_option("--max-length", bench_max_len, "word length bound, 0 = none");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp& e) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    json err;
    err["error"] = "config";
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return exit_config;
  }

  try {
    if (c_run->parsed())
      return cmd_run(common, run_sel, run_word, run_steps, run_len, run_nodetect);
    if (c_reach->parsed())
      return cmd_reach(common, reach_sel, reach_from, reach_to, reach_steps, reach_len);
    if (c_cls->parsed()) return cmd_classify_period(common, cls_sel, cls_word, cls_steps, cls_len);
    if (c_col->parsed())
      return cmd_collatz_verify(common, col_max_n, col_phases, col_steps, col_len, col_csv);
    if (c_gen->parsed() || c_scr->parsed()) {
      GeneratorConfig gcfg =
          build_generator_config(gen_v, gen_mu, gen_excess, gen_balance, gen_survive,
                                 gen_pilot_words, gen_pilot_length, gen_pilot_steps, gen_pilot_len);
      json cfg;
      cfg["mu"] = gen_mu;
      cfg["v"] = gen_v;
      cfg["excess"] = gen_excess;
      cfg["balance"] = gen_balance;
      cfg["survive"] = gen_survive;
      cfg["pilot_words"] = gen_pilot_words;
      cfg["pilot_length"] = gen_pilot_length;
      cfg["pilot_steps"] = gen_pilot_steps;
      cfg["pilot_max_length"] = gen_pilot_len;
      cfg["seed"] = gen_seed;
      if (c_gen->parsed()) {
        cfg["command"] = "generate";
        cfg["count"] = gen_count;
        cfg["selected_only"] = gen_selected_only;
        return cmd_generate(common, cfg, gcfg, gen_seed, gen_count, gen_selected_only);
      }
      cfg["command"] = "screen";
      json sysj = sys_config(scr_sel);
      cfg.update(sysj);
      return cmd_screen(common, scr_sel, cfg, gcfg, gen_seed);
    }
    if (c_e1->parsed()) return cmd_exp1(common, e1);
    if (c_e2->parsed()) return cmd_exp2(common, e1);
    if (c_e3->parsed()) return cmd_exp3(common, e3_sel, e3_word, e3_steps, e3_len);
    if (c_e4->parsed())
      return cmd_exp4(common, e4_sel, e4_word, e4_stream, e4_steps, e4_len, e4_alpha, e4_whole);
    if (c_e5->parsed())
      return cmd_exp5(common, e5_sel, e5_word, e5_stream, e5_order, e5_smoothing, e5_steps, e5_len);
    if (c_soak->parsed()) return cmd_soak(common, soak_steps, soak_every, soak_dir);
    if (c_bench->parsed())
      return cmd_bench(common, bench_sel, bench_word, bench_word_len, bench_steps, bench_max_len);
    throw ConfigError("no subcommand selected");
  } catch (const OracleMismatchError& e) {
    json err;
    err["error"] = "oracle_mismatch";
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return exit_mismatch;
  } catch (const CheckpointMismatch& e) {
    json err;
    err["error"] = "checkpoint_mismatch";
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return exit_mismatch;
  } catch (const BudgetRequired& e) {
    json err;
    err["error"] = "budget";
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return exit_budget;
  } catch (const StreamTooShort& e) {
    json err;
    err["error"] = "budget";
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return exit_budget;
  } catch (const EarlyTermination& e) {
    json err;
    err["error"] = "budget";
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return exit_budget;
  } catch (const ParseError& e) {
    json err;
    err["error"] = "config";
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return exit_config;
  } catch (const ConfigError& e) {
    json err;
    err["error"] = "config";
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return exit_config;
  } catch (const PreconditionError& e) {
    json err;
    err["error"] = "config";
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return exit_config;
  } catch (const EmptyWordError& e) {
    json err;
    err["error"] = "config";
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return exit_config;
  } catch (const Error& e) {
    json err;
    err["error"] = "internal";
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return 1;
  }
}
