// Trade constructions: doubling, parity latin trades and concatenation,
// linear spans and differences of codes.

#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "xtrade/trade.hpp"
#include "xtrade/word.hpp"

namespace xtrade {

/// (T0.00 u T1.11, T0.11 u T1.00) on n + 2 coordinates.
inline Trade double_trade(const Trade& t) {
  if (!is_valid(t)) throw TradeError("doubling an invalid trade");
  const int n = t.length();
  if (n + 2 > kMaxLength) throw TradeError("doubled length exceeds the word limit");
  const Mask tail = Mask{3} << n;
  std::vector<Mask> a, b;
  for (Mask w : t.t0()) {
    a.push_back(w);
    b.push_back(w | tail);
  }
  for (Mask w : t.t1()) {
    a.push_back(w | tail);
    b.push_back(w);
  }
  Trade out(n + 2, t.kind(), std::move(a), std::move(b));
  if (!is_valid(out)) throw TradeError("doubling produced an invalid trade");
  return out;
}

/// Trivial trade ({00}, {11}).
inline Trade trivial_trade() { return Trade(2, KindSpec::extended(), {0}, {3}); }

using QaryWord = std::vector<std::uint8_t>;

struct LatinKWayTrade {
  int m = 0;
  int q = 0;
  std::vector<std::vector<QaryWord>> parts;

  /// Largest symbol (plus one) occurring at coordinate i in parts 0 and 1.
  int symbols_used(int i) const {
    int mx = 0;
    for (int p = 0; p < 2; ++p)
      for (const auto& w : parts[p]) mx = std::max(mx, w[i] + 1);
    return mx;
  }
};

inline LatinKWayTrade parity_latin_trade(int m, int q) {
  if (m < 2 || q < 2) throw TradeError("parity latin trade needs m >= 2 and q >= 2");
  LatinKWayTrade t;
  t.m = m;
  t.q = q;
  t.parts.assign(q, {});
  QaryWord w(m, 0);
  while (true) {
    int sum = std::accumulate(w.begin(), w.end(), 0);
    t.parts[sum % q].push_back(w);
    int i = m - 1;
    while (i >= 0 && w[i] == q - 1) w[i--] = 0;
    if (i < 0) break;
    w[i]++;
  }
  return t;
}

/// Every line of H(m, q) meets parts a and b equally often, at most once.
inline bool is_latin_trade(const LatinKWayTrade& t, int a, int b) {
  std::vector<int> cls;
  std::size_t total = 1;
  for (int i = 0; i < t.m; ++i) total *= static_cast<std::size_t>(t.q);
  cls.assign(total, -1);
  auto index = [&](const QaryWord& w) {
    std::size_t k = 0;
    for (int i = 0; i < t.m; ++i) k = k * static_cast<std::size_t>(t.q) + w[i];
    return k;
  };
  for (const auto& w : t.parts[a]) cls[index(w)] = 0;
  for (const auto& w : t.parts[b]) {
    if (cls[index(w)] == 0) return false;
    cls[index(w)] = 1;
  }
  QaryWord w(t.m, 0);
  for (std::size_t k = 0; k < total; ++k) {
    std::size_t r = k;
    for (int i = t.m - 1; i >= 0; --i) {
      w[i] = static_cast<std::uint8_t>(r % t.q);
      r /= t.q;
    }
    for (int i = 0; i < t.m; ++i) {
      if (w[i] != 0) continue;  // one representative per line
      int c0 = 0, c1 = 0;
      QaryWord v = w;
      for (int s = 0; s < t.q; ++s) {
        v[i] = static_cast<std::uint8_t>(s);
        int c = cls[index(v)];
        if (c == 0) ++c0;
        if (c == 1) ++c1;
      }
      if (c0 != c1 || c0 > 1) return false;
    }
  }
  return true;
}

/// T_j = { c_0 ... c_{m-1} : c_i in components[i] part b_i, b in M_j }, j = 0, 1.
inline Trade concatenate(const LatinKWayTrade& mt, const std::vector<KWayTrade>& components) {
  if (static_cast<int>(components.size()) != mt.m) throw TradeError("need one component per latin coordinate");
  std::vector<int> offset(mt.m + 1, 0);
  for (int i = 0; i < mt.m; ++i) {
    const auto& c = components[i];
    if (c.kind().kind != TradeKind::Extended) throw TradeError("components must be extended trades");
    if (!is_valid(c)) throw TradeError("component " + std::to_string(i) + " is not a valid trade");
    if (mt.symbols_used(i) > c.ways())
      throw TradeError("coordinate " + std::to_string(i) + " uses symbols beyond its component's parts");
    offset[i + 1] = offset[i] + c.length();
  }
  if (offset[mt.m] > kMaxLength) throw TradeError("concatenated length exceeds the word limit");
  std::vector<Mask> parts[2];
  for (int j = 0; j < 2; ++j) {
    for (const auto& b : mt.parts[j]) {
      std::vector<Mask> acc{0};
      for (int i = 0; i < mt.m; ++i) {
        std::vector<Mask> next;
        for (Mask prefix : acc)
          for (Mask c : components[i].parts()[b[i]]) next.push_back(prefix | (c << offset[i]));
        acc.swap(next);
      }
      parts[j].insert(parts[j].end(), acc.begin(), acc.end());
    }
  }
  Trade out(offset[mt.m], KindSpec::extended(), std::move(parts[0]), std::move(parts[1]));
  if (!is_valid(out)) throw TradeError("concatenation produced an invalid trade");
  return out;
}

/// Indicator word of the block of coordinates taken by component i.
inline std::vector<Mask> block_indicators(const std::vector<KWayTrade>& components) {
  std::vector<Mask> out;
  int off = 0;
  for (const auto& c : components) {
    out.push_back(full_mask(c.length()) << off);
    off += c.length();
  }
  return out;
}

struct GeneratorMatrix {
  int n = 0;
  std::vector<Mask> rows;
};

inline WordSet span(const GeneratorMatrix& g) { return span_of(g.rows); }

inline std::string format_generator_matrix(const GeneratorMatrix& g) {
  std::ostringstream os;
  os << "span n=" << g.n << '\n';
  for (Mask r : g.rows) os << Word(r, g.n).str() << '\n';
  return os.str();
}

inline GeneratorMatrix parse_generator_matrix(std::istream& in) {
  std::string line;
  GeneratorMatrix g;
  while (std::getline(in, line)) {
    line = detail::trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("span n=", 0) != 0) throw TradeError("expected 'span n=<n>' header");
    g.n = std::stoi(line.substr(7));
    break;
  }
  if (g.n == 0) throw TradeError("missing span header");
  while (std::getline(in, line)) {
    line = detail::trim(line);
    if (line.empty()) break;
    Word w = Word::parse(line);
    if (w.length() != g.n) throw TradeError("generator row has the wrong length");
    g.rows.push_back(w.bits());
  }
  return g;
}

/// (C \ D, D \ C).
inline Trade code_difference(const WordSet& c, const WordSet& d, int n, KindSpec kind = KindSpec::extended()) {
  if (c == d) throw TradeError("code difference of equal sets");
  Trade t(n, kind, set_difference(c, d), set_difference(d, c));
  if (!is_valid(t)) throw TradeError("code difference is not a valid trade");
  return t;
}

}  // namespace xtrade
