// Tag system core: alphabet, words, system tables, budgeted runs.
#pragma once

#include <cassert>
#include <cstdint>
#include <cstring>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace taglab {

using Symbol = std::uint8_t;

inline constexpr std::size_t max_alphabet = 256;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParseError : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};
struct PreconditionError : Error {
  using Error::Error;
};
struct EmptyWordError : Error {
  using Error::Error;
};

// Rolling polynomial hash over 2^64:
//   H(s_0..s_{l-1}) = sum_i (s_i + 1) * B^(l-1-i)   (wrapping arithmetic)
// B is odd, so it has a multiplicative inverse mod 2^64 and symbols can be
// removed from the front in O(1). Empty word hashes to 0.
inline constexpr std::uint64_t hash_base = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t modinv_pow2_64(std::uint64_t a) {
  // Newton iteration; a must be odd.
  std::uint64_t x = a;  // correct to 3 bits
  for (int i = 0; i < 5; ++i) x *= 2 - a * x;
  return x;
}
inline constexpr std::uint64_t hash_base_inv = modinv_pow2_64(hash_base);
static_assert(hash_base * hash_base_inv == 1);

inline std::uint64_t hash_symbols(std::span<const Symbol> s) {
  std::uint64_t h = 0;
  for (Symbol c : s) h = h * hash_base + (std::uint64_t{c} + 1);
  return h;
}

// A word over the alphabet {0..mu-1}. Backed by a vector plus a head index:
// append is amortized O(1), dropping v symbols from the front is O(v), and
// the live region stays contiguous for memcmp/hash work. The buffer is
// compacted once the dead prefix outgrows the live part, which keeps memory
// at most ~2x the peak live length.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Symbol> symbols) : buf_(std::move(symbols)) {}

  static Word parse(std::string_view text, std::uint32_t mu);
  std::string str(std::uint32_t mu) const;

  std::size_t size() const { return buf_.size() - head_; }
  bool empty() const { return size() == 0; }
  Symbol operator[](std::size_t i) const { return buf_[head_ + i]; }
  Symbol front() const { return buf_[head_]; }
  std::span<const Symbol> view() const { return {buf_.data() + head_, size()}; }

  void push_back(Symbol s) { buf_.push_back(s); }
  void append(std::span<const Symbol> s) { buf_.insert(buf_.end(), s.begin(), s.end()); }
  void pop_front(std::size_t n) {
    assert(n <= size());
    head_ += n;
    if (head_ > buf_.size() - head_) compact();
  }
  void clear() {
    buf_.clear();
    head_ = 0;
  }

  std::uint64_t hash() const { return hash_symbols(view()); }

  friend bool operator==(const Word& a, const Word& b) {
    return a.size() == b.size() &&
           (a.size() == 0 ||
            std::memcmp(a.buf_.data() + a.head_, b.buf_.data() + b.head_, a.size()) == 0);
  }
  friend bool operator!=(const Word& a, const Word& b) { return !(a == b); }

 private:
  void compact() {
    buf_.erase(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(head_));
    head_ = 0;
  }

  std::vector<Symbol> buf_;
  std::size_t head_ = 0;
};

Word concat(const Word& a, const Word& b);

// A tag system: deletion number v and one appendant per symbol.
struct TagSystem {
  std::uint32_t v = 1;
  std::vector<std::vector<Symbol>> appendants;

  std::uint32_t mu() const { return static_cast<std::uint32_t>(appendants.size()); }
  std::size_t l_min() const;
  std::size_t l_max() const;

  void validate() const;  // throws ConfigError on malformed tables
  std::string serialize() const;
  static TagSystem parse(std::string_view text);

  friend bool operator==(const TagSystem&, const TagSystem&) = default;
};

// Named systems used throughout the tests and experiments.
TagSystem post_system();    // v=3, 0 -> 00, 1 -> 1101
TagSystem fig1_right();     // v=5, 0 -> 1011, 1 -> 010100
TagSystem preset(std::string_view name);
std::vector<std::string> preset_names();

struct RunBudget {
  std::uint64_t max_steps = 10'000'000;
  std::size_t max_length = 15'000;
};

enum class OutcomeKind { halted, periodic, length_bound_exceeded, budget_exhausted };
std::string_view outcome_name(OutcomeKind k);

// steps: index of the word at which the outcome was decided. The start word
// is at step 0 and each transition is one step. For periodic outcomes,
// entry_step + period <= steps and both are minimal.
struct RunOutcome {
  OutcomeKind kind;
  std::uint64_t steps = 0;
  std::uint64_t period = 0;      // valid iff kind == periodic
  std::uint64_t entry_step = 0;  // valid iff kind == periodic
};

struct RunResult {
  RunOutcome outcome;
  Word final_word;  // word at outcome.steps
  std::size_t max_length_seen = 0;
};

// Runs the system from `start` until it halts (length < v), exceeds the
// length bound, is detected periodic (when detect_cycles is set), or
// exhausts max_steps.
RunResult run(const TagSystem& sys, const Word& start, const RunBudget& budget,
              bool detect_cycles = true);

struct ReachResult {
  bool found = false;
  std::uint64_t found_step = 0;  // valid iff found
  RunOutcome outcome;            // run outcome when not found
  // A miss is definitive when the whole reachable trajectory was enumerated:
  // the run halted or closed into a cycle without hitting the target.
  bool definitive_miss = false;
};

ReachResult reaches(const TagSystem& sys, const Word& start, const Word& target,
                    const RunBudget& budget);

struct EarlyTermination : Error {
  explicit EarlyTermination(std::uint64_t done)
      : Error("run terminated after " + std::to_string(done) + " steps"), steps_done(done) {}
  std::uint64_t steps_done;
};

struct BenchResult {
  std::uint64_t steps = 0;
  double seconds = 0;
  double steps_per_second = 0;
  std::size_t max_length_seen = 0;
};

// Runs exactly `steps` steps with cycle detection off and times them.
// Throws EarlyTermination if the run halts or exceeds max_length first
// (max_length 0 means unbounded).
BenchResult throughput_bench(const TagSystem& sys, const Word& start, std::uint64_t steps,
                             std::size_t max_length = 0);

// Mutable state of one run. advance() performs a single step and returns the
// scanned symbol; the caller is responsible for checking halted() first.
// With maintain_hash set, the rolling hash of the current word is kept
// incrementally and word_hash() is O(1).
class Trajectory {
 public:
  Trajectory(const TagSystem& sys, Word start, bool maintain_hash = false);

  bool halted() const { return len_ < v_; }
  Symbol advance();

  std::uint64_t steps() const { return steps_; }
  std::size_t length() const { return len_; }
  std::size_t max_length() const { return max_len_; }
  std::span<const Symbol> view() const { return {buf_.data() + head_, len_}; }
  Word snapshot() const { return Word(std::vector<Symbol>(view().begin(), view().end())); }

  std::uint64_t word_hash() const {
    assert(hashing_);
    return hash_;
  }
  // B^(l-1) for the current length; exposed so checkpoints can be verified.
  std::uint64_t hash_top_power() const {
    assert(hashing_);
    return top_pow_;
  }

 private:
  struct Appendant {
    const Symbol* data;
    std::uint32_t len;
    std::uint64_t base_pow;  // B^len
    std::uint64_t poly;      // sum_j (data[j]+1) * B^(len-1-j)
  };

  void ensure_room(std::size_t need);

  std::vector<Symbol> buf_;
  std::size_t head_ = 0;
  std::size_t len_ = 0;
  std::size_t max_len_ = 0;
  std::uint64_t steps_ = 0;
  std::uint32_t v_;
  std::size_t max_app_ = 0;
  std::vector<std::vector<Symbol>> tables_;
  std::vector<Appendant> apps_;
  bool hashing_;
  std::uint64_t hash_ = 0;
  std::uint64_t top_pow_ = hash_base_inv;  // B^(l-1), B^-1 when empty
};

}  // namespace taglab
