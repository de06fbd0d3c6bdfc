#include "taglab/stats.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

namespace taglab {

namespace {

double chi_square_tail(double chi2, double dof) {
  if (chi2 <= 0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, chi2 / 2.0);
}

StatTest monobit(std::span<const Symbol> s) {
  StatTest t;
  t.name = "monobit";
  std::uint64_t ones = 0;
  for (Symbol b : s) ones += b;
  double n = static_cast<double>(s.size());
  double sum = 2.0 * static_cast<double>(ones) - n;
  t.statistic = sum / std::sqrt(n);
  t.p_value = std::erfc(std::fabs(t.statistic) / std::sqrt(2.0));
  return t;
}

StatTest runs_test(std::span<const Symbol> s) {
  StatTest t;
  t.name = "runs";
  double n = static_cast<double>(s.size());
  std::uint64_t ones = 0;
  for (Symbol b : s) ones += b;
  double pi = static_cast<double>(ones) / n;
  // Prerequisite from the monobit side: the test statistic is meaningless
  // for heavily biased streams, which count as failures here.
  if (std::fabs(pi - 0.5) >= 2.0 / std::sqrt(n)) {
    t.statistic = 0;
    t.p_value = 0;
    return t;
  }
  std::uint64_t runs = 1;
  for (std::size_t i = 1; i < s.size(); ++i) runs += s[i] != s[i - 1];
  t.statistic = static_cast<double>(runs);
  double denom = 2.0 * std::sqrt(2.0 * n) * pi * (1.0 - pi);
  t.p_value = std::erfc(std::fabs(static_cast<double>(runs) - 2.0 * n * pi * (1.0 - pi)) / denom);
  return t;
}

StatTest block_frequency(std::span<const Symbol> s) {
  StatTest t;
  t.name = "block_frequency";
  std::size_t blocks = s.size() / battery_block_length;
  double chi2 = 0;
  for (std::size_t b = 0; b < blocks; ++b) {
    std::uint64_t ones = 0;
    for (std::size_t i = 0; i < battery_block_length; ++i)
      ones += s[b * battery_block_length + i];
    double pi = static_cast<double>(ones) / battery_block_length;
    chi2 += (pi - 0.5) * (pi - 0.5);
  }
  chi2 *= 4.0 * battery_block_length;
  t.statistic = chi2;
  t.p_value = chi_square_tail(chi2, static_cast<double>(blocks));
  return t;
}

StatTest serial2(std::span<const Symbol> s) {
  StatTest t;
  t.name = "serial2";
  double n = static_cast<double>(s.size());
  // Cyclic overlapping counts of 1-grams and 2-grams.
  double c1[2] = {0, 0};
  double c2[4] = {0, 0, 0, 0};
  for (std::size_t i = 0; i < s.size(); ++i) {
    c1[s[i]] += 1;
    Symbol nxt = s[(i + 1) % s.size()];
    c2[(s[i] << 1) | nxt] += 1;
  }
  double psi1 = (2.0 / n) * (c1[0] * c1[0] + c1[1] * c1[1]) - n;
  double psi2 = (4.0 / n) * (c2[0] * c2[0] + c2[1] * c2[1] + c2[2] * c2[2] + c2[3] * c2[3]) - n;
  double delta = psi2 - psi1;
  t.statistic = delta;
  t.p_value = chi_square_tail(delta, 2.0);
  return t;
}

}  // namespace

BatteryReport randomness_battery(std::span<const Symbol> stream, double alpha) {
  if (stream.size() < battery_min_stream)
    throw StreamTooShort("battery needs at least " + std::to_string(battery_min_stream) +
                         " symbols, got " + std::to_string(stream.size()));
  for (Symbol b : stream) {
    if (b > 1) throw PreconditionError("battery is defined for binary streams");
  }
  BatteryReport report;
  report.alpha = alpha;
  report.n = stream.size();
  report.tests = {monobit(stream), runs_test(stream), block_frequency(stream), serial2(stream)};
  report.all_pass = true;
  for (auto& t : report.tests) {
    t.pass = t.p_value >= alpha;
    report.all_pass = report.all_pass && t.pass;
  }
  return report;
}

EntropyReport conditional_entropy(std::span<const Symbol> stream, std::uint32_t mu,
                                  std::uint32_t order, double smoothing) {
  if (mu < 1) throw ConfigError("alphabet size must be positive");
  if (smoothing < 0) throw ConfigError("smoothing weight must be non-negative");
  double table_cells = std::pow(static_cast<double>(mu), order + 1.0);
  if (table_cells > (1 << 24)) throw ConfigError("context table too large: mu^(order+1) > 2^24");
  if (stream.size() < static_cast<std::size_t>(order) + 1)
    throw StreamTooShort("stream shorter than order+1 symbols");
  for (Symbol s : stream) {
    if (s >= mu) throw PreconditionError("stream symbol outside the alphabet");
  }

  std::size_t contexts = 1;
  for (std::uint32_t i = 0; i < order; ++i) contexts *= mu;
  std::vector<std::uint64_t> counts(contexts * mu, 0);

  std::size_t key = 0;
  for (std::uint32_t i = 0; i < order; ++i) key = key * mu + stream[i];
  std::size_t wrap = order > 0 ? contexts / mu : 1;  // mu^(order-1)
  for (std::size_t i = order; i < stream.size(); ++i) {
    counts[key * mu + stream[i]] += 1;
    if (order > 0) key = (key % wrap) * mu + stream[i];
  }

  EntropyReport report;
  report.order = order;
  report.mu = mu;
  report.stream_length = stream.size();
  report.smoothing = smoothing;
  std::uint64_t total = stream.size() - order;

  for (std::size_t c = 0; c < contexts; ++c) {
    std::uint64_t ctx_total = 0;
    for (std::uint32_t s = 0; s < mu; ++s) ctx_total += counts[c * mu + s];
    if (ctx_total == 0) continue;
    double denom = static_cast<double>(ctx_total) + smoothing * mu;
    double h = 0;
    for (std::uint32_t s = 0; s < mu; ++s) {
      double p = (static_cast<double>(counts[c * mu + s]) + smoothing) / denom;
      if (p > 0) h -= p * std::log2(p);
    }
    ContextRow row;
    std::size_t rem = c;
    std::vector<Symbol> ctx_syms(order);
    for (std::uint32_t i = 0; i < order; ++i) {
      ctx_syms[order - 1 - i] = static_cast<Symbol>(rem % mu);
      rem /= mu;
    }
    row.context = Word(std::move(ctx_syms)).str(mu);
    row.count = ctx_total;
    row.probability = static_cast<double>(ctx_total) / static_cast<double>(total);
    row.conditional_entropy_bits = h;
    report.contexts.push_back(row);
    report.rate_bits += row.probability * h;
  }
  return report;
}

}  // namespace taglab
