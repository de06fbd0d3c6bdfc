#include "taglab/core.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace taglab {

namespace {

std::string symbol_token(Symbol s, std::uint32_t mu) {
  if (mu <= 10) return std::string(1, static_cast<char>('0' + s));
  return std::to_string(static_cast<unsigned>(s));
}

std::uint32_t parse_symbol_token(std::string_view tok, std::uint32_t mu, std::string_view what) {
  std::uint32_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError("bad symbol token '" + std::string(tok) + "' in " + std::string(what));
  if (value >= mu)
    throw ParseError("symbol " + std::string(tok) + " out of range for alphabet of size " +
                     std::to_string(mu));
  return value;
}

std::vector<Symbol> parse_symbol_run(std::string_view text, std::uint32_t mu,
                                     std::string_view what) {
  std::vector<Symbol> out;
  if (text.empty()) return out;
  if (mu <= 10) {
    out.reserve(text.size());
    for (char c : text) {
      if (c < '0' || c > '9')
        throw ParseError("bad symbol character '" + std::string(1, c) + "' in " +
                         std::string(what));
      auto s = static_cast<std::uint32_t>(c - '0');
      if (s >= mu)
        throw ParseError("symbol " + std::to_string(s) + " out of range for alphabet of size " +
                         std::to_string(mu));
      out.push_back(static_cast<Symbol>(s));
    }
    return out;
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string_view tok = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos
                                                                            : comma - pos);
    out.push_back(static_cast<Symbol>(parse_symbol_token(tok, mu, what)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string format_symbol_run(std::span<const Symbol> s, std::uint32_t mu) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (mu > 10 && i > 0) out += ',';
    out += symbol_token(s[i], mu);
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

Word Word::parse(std::string_view text, std::uint32_t mu) {
  return Word(parse_symbol_run(trim(text), mu, "word"));
}

std::string Word::str(std::uint32_t mu) const { return format_symbol_run(view(), mu); }

Word concat(const Word& a, const Word& b) {
  std::vector<Symbol> symbols;
  symbols.reserve(a.size() + b.size());
  symbols.insert(symbols.end(), a.view().begin(), a.view().end());
  symbols.insert(symbols.end(), b.view().begin(), b.view().end());
  return Word(std::move(symbols));
}

std::size_t TagSystem::l_min() const {
  std::size_t m = appendants.empty() ? 0 : appendants[0].size();
  for (const auto& w : appendants) m = std::min(m, w.size());
  return m;
}

std::size_t TagSystem::l_max() const {
  std::size_t m = 0;
  for (const auto& w : appendants) m = std::max(m, w.size());
  return m;
}

void TagSystem::validate() const {
  if (v < 1) throw ConfigError("deletion number must be >= 1");
  if (appendants.empty()) throw ConfigError("alphabet must have at least one symbol");
  if (appendants.size() > max_alphabet)
    throw ConfigError("alphabet size " + std::to_string(appendants.size()) + " exceeds limit " +
                      std::to_string(max_alphabet));
  for (std::size_t i = 0; i < appendants.size(); ++i) {
    for (Symbol s : appendants[i]) {
      if (s >= appendants.size())
        throw ConfigError("appendant " + std::to_string(i) + " uses symbol " +
                          std::to_string(unsigned(s)) + " outside the alphabet");
    }
  }
}

std::string TagSystem::serialize() const {
  std::ostringstream out;
  out << "v=" << v << "\n";
  for (std::size_t i = 0; i < appendants.size(); ++i) {
    out << symbol_token(static_cast<Symbol>(i), mu()) << " ->";
    if (!appendants[i].empty()) out << ' ' << format_symbol_run(appendants[i], mu());
    out << "\n";
  }
  return out.str();
}

TagSystem TagSystem::parse(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    line = trim(line);
    if (!line.empty()) lines.push_back(line);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  if (lines.empty() || lines[0].substr(0, 2) != "v=")
    throw ParseError("expected 'v=<int>' on the first line");
  TagSystem sys;
  {
    std::string_view num = lines[0].substr(2);
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), sys.v);
    if (ec != std::errc{} || ptr != num.data() + num.size())
      throw ParseError("bad deletion number '" + std::string(num) + "'");
  }
  std::size_t rule_count = lines.size() - 1;
  if (rule_count == 0) throw ParseError("no appendant lines");
  if (rule_count > max_alphabet)
    throw ParseError("alphabet size " + std::to_string(rule_count) + " exceeds limit " +
                     std::to_string(max_alphabet));
  auto mu = static_cast<std::uint32_t>(rule_count);
  sys.appendants.resize(rule_count);
  for (std::size_t i = 0; i < rule_count; ++i) {
    std::string_view line = lines[i + 1];
    std::size_t arrow = line.find("->");
    if (arrow == std::string_view::npos)
      throw ParseError("missing '->' on line '" + std::string(line) + "'");
    std::string_view lhs = trim(line.substr(0, arrow));
    std::string_view rhs = trim(line.substr(arrow + 2));
    std::uint32_t index = parse_symbol_token(lhs, mu, "rule index");
    if (index != i)
      throw ParseError("rule lines out of order: expected index " + std::to_string(i) + ", got " +
                       std::string(lhs));
    sys.appendants[i] = parse_symbol_run(rhs, mu, "appendant");
  }
  sys.validate();
  return sys;
}

TagSystem post_system() {
  TagSystem sys;
  sys.v = 3;
  sys.appendants = {{0, 0}, {1, 1, 0, 1}};
  return sys;
}

TagSystem fig1_right() {
  TagSystem sys;
  sys.v = 5;
  sys.appendants = {{1, 0, 1, 1}, {0, 1, 0, 1, 0, 0}};
  return sys;
}

TagSystem preset(std::string_view name) {
  if (name == "post-00-1101") return post_system();
  if (name == "fig1-right") return fig1_right();
  if (name == "collatz-ts32") {
    TagSystem sys;
    sys.v = 2;
    sys.appendants = {{1, 2}, {0}, {0, 0, 0}};
    return sys;
  }
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> preset_names() { return {"post-00-1101", "fig1-right", "collatz-ts32"}; }

std::string_view outcome_name(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::halted:
      return "halted";
    case OutcomeKind::periodic:
      return "periodic";
    case OutcomeKind::length_bound_exceeded:
      return "length_bound_exceeded";
    case OutcomeKind::budget_exhausted:
      return "budget_exhausted";
  }
  return "unknown";
}

Trajectory::Trajectory(const TagSystem& sys, Word start, bool maintain_hash)
    : v_(sys.v), tables_(sys.appendants), hashing_(maintain_hash) {
  sys.validate();
  for (Symbol s : start.view()) {
    if (s >= sys.mu())
      throw ConfigError("start word uses symbol " + std::to_string(unsigned(s)) +
                        " outside the alphabet");
  }
  apps_.reserve(tables_.size());
  for (const auto& w : tables_) {
    Appendant a;
    a.data = w.data();
    a.len = static_cast<std::uint32_t>(w.size());
    a.base_pow = 1;
    for (std::uint32_t j = 0; j < a.len; ++j) a.base_pow *= hash_base;
    a.poly = hash_symbols(w);
    apps_.push_back(a);
    max_app_ = std::max(max_app_, w.size());
  }
  len_ = start.size();
  max_len_ = len_;
  buf_.assign(start.view().begin(), start.view().end());
  buf_.resize(len_ + std::max<std::size_t>(64, max_app_ * 4));
  if (hashing_) {
    hash_ = hash_symbols({buf_.data(), len_});
    top_pow_ = hash_base_inv;
    for (std::size_t i = 0; i < len_; ++i) top_pow_ *= hash_base;
  }
}

void Trajectory::ensure_room(std::size_t need) {
  if (head_ + len_ + need <= buf_.size()) return;
  if (head_ >= len_ && len_ + need <= buf_.size()) {
    // Dead prefix dominates: slide the live region to the front. Compacting
    // only once the dead part outgrows the live part keeps this amortized
    // O(1) per consumed symbol.
    std::memmove(buf_.data(), buf_.data() + head_, len_);
    head_ = 0;
    return;
  }
  // Grow into a fresh buffer sized from the live region, copying live bytes
  // only. Giant words grow by 1.25x to cap transient memory; small ones
  // double.
  std::size_t want = len_ + need + 64;
  std::size_t factor_grown =
      buf_.size() > (std::size_t{64} << 20) ? buf_.size() + buf_.size() / 4 : buf_.size() * 2;
  std::vector<Symbol> nb(std::max(want, factor_grown));
  std::memcpy(nb.data(), buf_.data() + head_, len_);
  buf_.swap(nb);
  head_ = 0;
}

Symbol Trajectory::advance() {
  assert(len_ >= v_);
  Symbol scanned = buf_[head_];
  const Appendant& a = apps_[scanned];
  ensure_room(a.len);
  std::memcpy(buf_.data() + head_ + len_, a.data, a.len);
  if (hashing_) {
    hash_ = hash_ * a.base_pow + a.poly;
    top_pow_ *= a.base_pow;
    std::uint64_t h = hash_;
    std::uint64_t tp = top_pow_;
    for (std::uint32_t i = 0; i < v_; ++i) {
      h -= (std::uint64_t{buf_[head_ + i]} + 1) * tp;
      tp *= hash_base_inv;
    }
    hash_ = h;
    top_pow_ = tp;
  }
  std::size_t new_len = len_ + a.len - v_;
  assert(new_len == len_ - v_ + tables_[scanned].size());
  head_ += v_;
  len_ = new_len;
  if (len_ > max_len_) max_len_ = len_;
  ++steps_;
  return scanned;
}

}  // namespace taglab
