// Deterministic PRNG for sampling and experiments. SplitMix64 is pinned here
// (constants and all) so that a seed means the same bytes on every platform;
// std:: distributions are not bit-stable across standard libraries.
#pragma once

#include <cstdint>

#include "taglab/core.hpp"

namespace taglab {

struct SplitMix64 {
  std::uint64_t state = 0;

  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n). Modulo bias is below 2^-50 for every n used here.
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

inline std::uint64_t mix_stream(std::uint64_t a, std::uint64_t b) {
  SplitMix64 r{a ^ (b * 0xD1B54A32D192ED03ULL + 0x2545F4914F6CDD1DULL)};
  r.next();
  return r.next();
}

// Independent stream keyed by (seed, a, b); used to give every candidate,
// word, and pilot its own reproducible generator.
inline SplitMix64 rng_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  return SplitMix64{mix_stream(mix_stream(seed, a), b)};
}

inline Word random_word(SplitMix64& rng, std::size_t length, std::uint32_t mu) {
  std::vector<Symbol> symbols(length);
  for (auto& s : symbols) s = static_cast<Symbol>(rng.below(mu));
  return Word(std::move(symbols));
}

}  // namespace taglab
