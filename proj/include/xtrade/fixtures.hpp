// Fixture files: reference trades and codes with their expected metadata.

#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "xtrade/analysis.hpp"
#include "xtrade/trade.hpp"
#include "xtrade/word.hpp"

#ifndef XTRADE_DATA_DIR
#define XTRADE_DATA_DIR "data/v1"
#endif

namespace xtrade {

struct Fixture {
  std::string id;
  std::string file;
  int n = 0;
  KindSpec kind = KindSpec::extended();
  std::optional<Trade> trade;       // in the even-weight half for extended kinds
  std::optional<Trade> as_printed;  // before the odd-to-even translation, if one was applied
  std::optional<WordSet> third;  // third mate, when listed
  std::optional<WordSet> code;   // linear code fixtures
  std::vector<CoordPermutation> generators;
  std::vector<bool> gray;
  std::map<std::string, std::string> expected;
  std::vector<std::string> errata;  // corrections to the listed data

  bool has(const std::string& key) const { return expected.count(key) != 0; }
  const std::string& expect(const std::string& key) const {
    auto it = expected.find(key);
    if (it == expected.end()) throw TradeError("fixture " + id + " has no expected '" + key + "'");
    return it->second;
  }
  bool flag(const std::string& key) const { return has(key) && expected.at(key) == "yes"; }

  /// Product of a factored value such as "2*16*3840".
  std::uint64_t expect_product(const std::string& key) const {
    std::uint64_t p = 1;
    std::stringstream ss(expect(key));
    std::string f;
    while (std::getline(ss, f, '*')) p *= std::stoull(f);
    return p;
  }
  std::vector<Mask> expect_words(const std::string& key) const {
    std::vector<Mask> out;
    std::istringstream is(expect(key));
    std::string tok;
    while (is >> tok) out.push_back(Word::parse(tok).bits());
    return out;
  }
  /// "01 23456789" -> {{0,1},{2,...,9}}; hex digits name coordinates.
  std::vector<std::vector<int>> expect_partition(const std::string& key) const {
    std::vector<std::vector<int>> out;
    std::istringstream is(expect(key));
    std::string tok;
    while (is >> tok) {
      out.emplace_back();
      for (char c : tok) out.back().push_back(c <= '9' ? c - '0' : c - 'a' + 10);
    }
    return out;
  }
  /// "T16=320 T24=48 ..." -> map.
  std::map<std::string, int> expect_counts(const std::string& key) const {
    std::map<std::string, int> out;
    std::istringstream is(expect(key));
    std::string tok;
    while (is >> tok) {
      auto eq = tok.find('=');
      if (eq == std::string::npos) throw TradeError("malformed count '" + tok + "'");
      out[tok.substr(0, eq)] = std::stoi(tok.substr(eq + 1));
    }
    return out;
  }

  std::vector<CoordPermutation> essential_generators() const {
    std::vector<CoordPermutation> out;
    for (std::size_t i = 0; i < generators.size(); ++i)
      if (!gray[i]) out.push_back(generators[i]);
    return out;
  }

  KWayTrade kway() const {
    if (!trade) throw TradeError("fixture " + id + " is not a trade");
    std::vector<WordSet> parts{trade->t0(), trade->t1()};
    if (third) parts.push_back(*third);
    return KWayTrade(n, kind, std::move(parts));
  }
};

inline std::filesystem::path fixture_data_dir() {
  if (const char* env = std::getenv("XTRADE_DATA"); env && *env) return env;
  return XTRADE_DATA_DIR;
}

inline const std::vector<std::string>& fixture_files() {
  static const std::vector<std::string> files{"length8.txt", "length10.txt", "length12.txt", "sts_length10.txt"};
  return files;
}

namespace detail {

inline std::vector<std::string> tokens(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

inline Mask parse_block(const std::string& s, int n) {
  Mask m = 0;
  for (char c : s) {
    int i = c <= '9' ? c - '0' : c - 'a' + 10;
    if (i < 0 || i >= n) throw TradeError("block point out of range in '" + s + "'");
    m |= Mask{1} << i;
  }
  return m;
}

struct OrbitSpec {
  Mask rep = 0;
  std::string index;
};

// Orbit of `o.rep` under `gens`; "k*2" adds the complementary orbit.
inline WordSet expand_orbit(const OrbitSpec& o, const std::vector<CoordPermutation>& gens, int n,
                            const std::string& id) {
  WordSet orb = orbit_of({o.rep}, gens);
  if (o.index == "-") return orb;
  std::size_t k = std::stoul(o.index);
  bool doubled = o.index.find("*2") != std::string::npos;
  if (orb.size() != k)
    throw TradeError("fixture " + id + ": orbit of " + Word(o.rep, n).str() + " has size " +
                     std::to_string(orb.size()) + ", index says " + o.index);
  if (doubled) orb = set_union(orb, translate(orb, full_mask(n)));
  if (doubled && orb.size() != 2 * k)
    throw TradeError("fixture " + id + ": complementary orbit of " + Word(o.rep, n).str() + " is not disjoint");
  return orb;
}

struct RawFixture {
  Fixture fx;
  std::vector<Mask> words, kernel, cosets, span, t1_words, t2_words;
  std::vector<OrbitSpec> orbits, t1_orbits, t2_orbits;
  std::optional<CoordPermutation> t1_perm, t2_perm;
  std::optional<Mask> t1_shift;
  std::optional<std::pair<std::string, std::string>> difference;
};

inline void finish(RawFixture& r, const std::map<std::string, Fixture>& earlier) {
  Fixture& f = r.fx;
  const int n = f.n;
  const auto gens = f.essential_generators();
  if (!r.span.empty()) {
    f.code = span_of(r.span);
    return;
  }
  if (r.difference) {
    auto a = earlier.find(r.difference->first), b = earlier.find(r.difference->second);
    if (a == earlier.end() || b == earlier.end() || !a->second.code || !b->second.code)
      throw TradeError("fixture " + f.id + ": difference needs two earlier code fixtures");
    const WordSet& c = *a->second.code;
    const WordSet& d = *b->second.code;
    f.trade = Trade(n, f.kind, set_difference(c, d), set_difference(d, c));
    return;
  }
  std::vector<Mask> t0 = r.words;
  if (!r.kernel.empty() || !r.cosets.empty()) {
    WordSet k = span_of(r.kernel);
    for (Mask c : r.cosets)
      for (Mask x : k) t0.push_back(c ^ x);
  }
  for (const auto& o : r.orbits) {
    WordSet orb = expand_orbit(o, gens, n, f.id);
    t0.insert(t0.end(), orb.begin(), orb.end());
  }
  if (t0.empty()) throw TradeError("fixture " + f.id + " has no T0 data");
  WordSet s0 = make_word_set(std::move(t0));

  auto from_lists = [&](const std::vector<Mask>& words, const std::vector<OrbitSpec>& orbits) {
    std::vector<Mask> out = words;
    for (const auto& o : orbits) {
      WordSet orb = expand_orbit(o, gens, n, f.id);
      out.insert(out.end(), orb.begin(), orb.end());
    }
    return make_word_set(std::move(out));
  };

  std::optional<WordSet> s1;
  if (!r.t1_words.empty() || !r.t1_orbits.empty()) s1 = from_lists(r.t1_words, r.t1_orbits);
  std::optional<WordSet> by_map;
  if (r.t1_perm) by_map = permute(s0, *r.t1_perm);
  if (r.t1_shift) by_map = translate(s0, *r.t1_shift);
  if (s1 && by_map) {
    // Both readings given: the listed words take precedence, the map must agree.
    bool ok = false;
    try {
      ok = is_valid(Trade(n, f.kind, s0, *s1));
    } catch (const TradeError&) {
    }
    if (!ok) s1 = by_map;
    else if (*s1 != *by_map) throw TradeError("fixture " + f.id + ": T1 word list and T1 map disagree");
  }
  if (!s1) s1 = by_map;
  if (!s1) throw TradeError("fixture " + f.id + " has no T1 data");
  f.trade = Trade(n, f.kind, s0, *s1);

  if (r.t2_perm) {
    // The listed map may carry either mate onto the third one.
    for (const WordSet* base : {&f.trade->t0(), &f.trade->t1()}) {
      WordSet cand = permute(*base, *r.t2_perm);
      if (!disjoint(cand, s0) || !disjoint(cand, *s1)) continue;
      if (is_valid(KWayTrade(n, f.kind, {s0, *s1, cand}))) {
        f.third = cand;
        break;
      }
    }
    if (!f.third) throw TradeError("fixture " + f.id + ": T2 map yields no third mate from either part");
  }
  if (!r.t2_words.empty() || !r.t2_orbits.empty()) f.third = from_lists(r.t2_words, r.t2_orbits);

  // Odd-weight listings live in the other half of the cube; move them by e_0.
  const WordSet u = f.trade->support();
  if (f.kind.kind == TradeKind::Extended &&
      std::all_of(u.begin(), u.end(), [](Mask w) { return (popcount(w) & 1) != 0; })) {
    f.as_printed = f.trade;
    f.trade = Trade(n, f.kind, translate(f.trade->t0(), 1), translate(f.trade->t1(), 1));
    if (f.third) f.third = translate(*f.third, 1);
  }
}

inline std::vector<Fixture> parse_fixtures(std::istream& in, const std::string& file) {
  std::vector<Fixture> out;
  std::map<std::string, Fixture> by_id;
  std::optional<RawFixture> cur;
  std::string line;
  int lineno = 0;
  auto words_of = [&](const std::vector<std::string>& tk, std::size_t from, std::vector<Mask>& dst) {
    for (std::size_t i = from; i < tk.size(); ++i) {
      Word w = Word::parse(tk[i]);
      if (w.length() != cur->fx.n) throw TradeError("word " + tk[i] + " has the wrong length");
      dst.push_back(w.bits());
    }
  };
  auto rest_of = [](const std::vector<std::string>& tk, std::size_t from) {
    std::string s;
    for (std::size_t i = from; i < tk.size(); ++i) s += (s.empty() ? "" : " ") + tk[i];
    return s;
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto tk = tokens(line);
    const std::string& key = tk[0];
    try {
      if (key == "fixture") {
        if (cur) throw TradeError("missing 'end'");
        if (tk.size() != 2) throw TradeError("expected 'fixture <id>'");
        cur.emplace();
        cur->fx.id = tk[1];
        cur->fx.file = file;
        continue;
      }
      if (!cur) throw TradeError("'" + key + "' outside a fixture block");
      Fixture& f = cur->fx;
      if (key == "end") {
        if (f.n == 0) throw TradeError("fixture " + f.id + " has no length");
        finish(*cur, by_id);
        by_id[f.id] = f;
        out.push_back(f);
        cur.reset();
      } else if (key == "n") {
        f.n = std::stoi(tk.at(1));
      } else if (key == "kind") {
        f.kind = KindSpec::parse(tk.at(1));
      } else if (key == "words") {
        words_of(tk, 1, cur->words);
      } else if (key == "kernel") {
        words_of(tk, 1, cur->kernel);
      } else if (key == "coset") {
        words_of(tk, 1, cur->cosets);
      } else if (key == "span") {
        words_of(tk, 1, cur->span);
      } else if (key == "blocks") {
        for (std::size_t i = 1; i < tk.size(); ++i) cur->words.push_back(parse_block(tk[i], f.n));
      } else if (key == "orbit") {
        cur->orbits.push_back({Word::parse(tk.at(1)).bits(), tk.at(2)});
      } else if (key == "gen" || key == "gray") {
        f.generators.push_back(CoordPermutation::from_cycles(rest_of(tk, 1), f.n));
        f.gray.push_back(key == "gray");
      } else if (key == "difference") {
        cur->difference = {tk.at(1), tk.at(2)};
      } else if (key == "t1" || key == "t2") {
        const bool one = key == "t1";
        const std::string& how = tk.at(1);
        if (how == "words") {
          words_of(tk, 2, one ? cur->t1_words : cur->t2_words);
        } else if (how == "blocks") {
          for (std::size_t i = 2; i < tk.size(); ++i)
            (one ? cur->t1_words : cur->t2_words).push_back(parse_block(tk[i], f.n));
        } else if (how == "orbit") {
          (one ? cur->t1_orbits : cur->t2_orbits).push_back({Word::parse(tk.at(2)).bits(), tk.at(3)});
        } else if (how == "perm") {
          (one ? cur->t1_perm : cur->t2_perm) = CoordPermutation::from_cycles(rest_of(tk, 2), f.n);
        } else if (how == "shift" && one) {
          cur->t1_shift = Word::parse(tk.at(2)).bits();
        } else if (how == "complement" && one) {
          cur->t1_shift = full_mask(f.n);
        } else {
          throw TradeError("unknown " + key + " form '" + how + "'");
        }
      } else if (key == "erratum") {
        f.errata.push_back(rest_of(tk, 1));
      } else if (key == "expect") {
        f.expected[tk.at(1)] = rest_of(tk, 2);
      } else {
        throw TradeError("unknown key '" + key + "'");
      }
    } catch (const std::out_of_range&) {
      throw TradeError(file + ":" + std::to_string(lineno) + ": missing field");
    } catch (const TradeError& e) {
      throw TradeError(file + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (cur) throw TradeError(file + ": unterminated fixture " + cur->fx.id);
  return out;
}

}  // namespace detail

inline std::vector<Fixture> load_fixture_file(const std::string& name) {
  auto path = fixture_data_dir() / name;
  std::ifstream in(path);
  if (!in) throw TradeError("cannot open fixture file " + path.string());
  return detail::parse_fixtures(in, name);
}

inline const std::vector<Fixture>& all_fixtures() {
  static const std::vector<Fixture> all = [] {
    std::vector<Fixture> v;
    for (const auto& f : fixture_files()) {
      auto part = load_fixture_file(f);
      v.insert(v.end(), part.begin(), part.end());
    }
    return v;
  }();
  return all;
}

inline const Fixture& load_fixture(const std::string& id) {
  for (const auto& f : all_fixtures())
    if (f.id == id) return f;
  throw TradeError("unknown fixture '" + id + "'");
}

/// Trade fixtures of one file, in file order.
inline std::vector<Fixture> trade_fixtures(const std::string& file) {
  std::vector<Fixture> out;
  for (const auto& f : all_fixtures())
    if (f.file == file && f.trade) out.push_back(f);
  return out;
}

}  // namespace xtrade
