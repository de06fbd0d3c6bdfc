// Statistics over scanned-symbol streams: a four-test randomness battery for
// binary streams and an order-k conditional entropy estimator.
#pragma once

#include <span>
#include <string>
#include <vector>

#include "taglab/core.hpp"

namespace taglab {

struct StreamTooShort : Error {
  using Error::Error;
};

struct StatTest {
  std::string name;
  double statistic = 0;
  double p_value = 0;
  bool pass = false;
};

struct BatteryReport {
  std::vector<StatTest> tests;  // monobit, runs, block_frequency, serial2
  double alpha = 0.01;
  std::uint64_t n = 0;
  bool all_pass = false;
};

inline constexpr std::uint64_t battery_min_stream = 10'000;
inline constexpr std::size_t battery_block_length = 128;

// Requires a binary stream of at least battery_min_stream symbols.
// monobit: z-test on the ones count. runs: z-test on the number of runs
// against its expectation under independence (reported as a fail when the
// ones frequency is too skewed for the test to apply). block_frequency:
// chi-square over ones proportions in blocks of 128. serial2: chi-square on
// overlapping 2-gram counts (psi-square difference, 2 degrees of freedom).
BatteryReport randomness_battery(std::span<const Symbol> stream, double alpha = 0.01);

struct ContextRow {
  std::string context;  // symbol tokens of the k context symbols
  std::uint64_t count = 0;
  double probability = 0;  // empirical context weight
  double conditional_entropy_bits = 0;
};

struct EntropyReport {
  std::uint32_t order = 0;
  std::uint32_t mu = 0;
  std::uint64_t stream_length = 0;
  double smoothing = 0;
  double rate_bits = 0;  // sum over contexts of probability * conditional entropy
  std::vector<ContextRow> contexts;
};

// Order-k conditional entropy of the stream in bits per symbol. smoothing is
// the add-alpha weight per successor cell; 0 gives the plug-in estimate
// (demanded by the exact-zero calibration on degenerate streams), 1 gives
// add-one smoothing.
EntropyReport conditional_entropy(std::span<const Symbol> stream, std::uint32_t mu,
                                  std::uint32_t order, double smoothing = 0.0);

}  // namespace taglab
