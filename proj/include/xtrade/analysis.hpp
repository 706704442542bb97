// Dual spaces, ranks, derived Steiner trades, the small Witt design, exact
// cover completion of Steiner systems and third mates of trades.

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "xtrade/canonical.hpp"
#include "xtrade/trade.hpp"
#include "xtrade/word.hpp"

namespace xtrade {

struct DualSpace {
  int n = 0;
  WordSet members;
  std::vector<Mask> standard_basis;  // disjoint supports when closed
  bool closed_under_product = false;
};

inline bool parity(Mask m) { return (popcount(m) & 1) != 0; }

inline DualSpace dual_space(const WordSet& s, int n) {
  if (s.empty()) throw TradeError("dual space of an empty set");
  DualSpace d;
  d.n = n;
  const Mask total = Mask{1} << n;
  for (Mask x = 0; x < total; ++x) {
    const bool p = parity(x & s.front());
    bool ok = true;
    for (Mask c : s)
      if (parity(x & c) != p) {
        ok = false;
        break;
      }
    if (ok) d.members.push_back(x);
  }
  d.closed_under_product = true;
  for (Mask a : d.members) {
    for (Mask b : d.members)
      if (!contains(d.members, a & b)) {
        d.closed_under_product = false;
        break;
      }
    if (!d.closed_under_product) break;
  }
  // Coordinates with identical columns over all members form one block.
  std::vector<Mask> blocks;
  Mask done = 0;
  for (int i = 0; i < n; ++i) {
    if ((done >> i) & 1U) continue;
    Mask block = 0;
    for (int j = i; j < n; ++j) {
      bool same = true;
      for (Mask x : d.members)
        if (((x >> i) & 1U) != ((x >> j) & 1U)) {
          same = false;
          break;
        }
      if (same) block |= Mask{1} << j;
    }
    done |= block;
    blocks.push_back(block);
  }
  for (Mask b : blocks)
    if (contains(d.members, b)) d.standard_basis.push_back(b);
  std::sort(d.standard_basis.begin(), d.standard_basis.end());
  if (span_of(d.standard_basis) != d.members) d.standard_basis = echelon_basis(std::vector<Mask>(d.members.begin(), d.members.end()));
  return d;
}

inline int affine_rank(const WordSet& s) {
  if (s.empty()) throw TradeError("rank of an empty set");
  std::vector<Mask> diffs;
  for (Mask w : s) diffs.push_back(w ^ s.front());
  return gf2_rank(diffs);
}

/// Dimension of the dual space (a linear space).
inline int dual_rank(const DualSpace& d) {
  return gf2_rank(std::vector<Mask>(d.members.begin(), d.members.end()));
}

// --- derived Steiner trades -------------------------------------------------

struct DerivedResult {
  std::optional<Trade> trade;
  int k = 0;
  std::string diagnostic;
};

inline int min_distance(const WordSet& s, Mask x) {
  int best = kMaxLength + 1;
  for (Mask w : s) best = std::min(best, popcount(w ^ x));
  return best;
}

inline DerivedResult derive_steiner(const Trade& t, Mask x) {
  const WordSet u = t.support();
  if (contains(u, x)) throw TradeError("derivation centre lies in the trade");
  DerivedResult r;
  r.k = min_distance(u, x);
  std::vector<Mask> s[2];
  for (int p = 0; p < 2; ++p)
    for (Mask w : t.part(p))
      if (popcount(w ^ x) == r.k) s[p].push_back(w ^ x);
  if (s[0].empty() || s[1].empty()) {
    r.diagnostic = "centre is at distance " + std::to_string(r.k) + " from one part only";
    return r;
  }
  if (s[0].size() != s[1].size()) {
    r.diagnostic = "derived parts differ in size";
    return r;
  }
  if (2 * r.k > t.length()) {
    r.diagnostic = "block size exceeds half the length";
    return r;
  }
  Trade d(t.length(), KindSpec::steiner(r.k), std::move(s[0]), std::move(s[1]));
  if (!verify_steiner(d).valid) {
    r.diagnostic = "derived pair is not a Steiner trade";
    return r;
  }
  r.trade = std::move(d);
  return r;
}

struct DerivedEntry {
  CanonicalForm form;
  Trade representative;
  std::uint64_t occurrences = 0;
};

struct DerivedCatalog {
  int k = 0;
  std::vector<DerivedEntry> entries;  // sorted by (volume, key)
  std::uint64_t centres = 0;
  std::uint64_t failures = 0;  // centres whose derived pair was not a trade
};

/// Derived Steiner trades are compared up to coordinate permutations and
/// part swap (plus the complement when n = 2k).
inline CanonicalForm steiner_class(const Trade& s) {
  const bool comp = s.length() == 2 * s.kind().k;
  return CanonicalForm::from_encoding(canonical_pair(s.length(), s.t0(), s.t1(), Equivalence::PermOnly, comp, false).key);
}

inline DerivedCatalog derived_catalog(const Trade& t, int k) {
  const int n = t.length();
  const WordSet u = t.support();
  std::vector<std::uint8_t> in_u(std::size_t{1} << n, 0);
  for (Mask w : u) in_u[w] = 1;
  DerivedCatalog cat;
  cat.k = k;
  std::map<CanonicalForm, std::size_t> index;
  const Mask total = Mask{1} << n;
  for (Mask x = 0; x < total; ++x) {
    if (in_u[x]) continue;
    if (min_distance(u, x) != k) continue;
    ++cat.centres;
    DerivedResult r = derive_steiner(t, x);
    if (!r.trade) {
      ++cat.failures;
      continue;
    }
    CanonicalForm f = steiner_class(*r.trade);
    auto it = index.find(f);
    if (it == index.end()) {
      index.emplace(f, cat.entries.size());
      cat.entries.push_back({f, *r.trade, 1});
    } else {
      cat.entries[it->second].occurrences++;
    }
  }
  std::sort(cat.entries.begin(), cat.entries.end(), [](const DerivedEntry& a, const DerivedEntry& b) {
    if (a.representative.volume() != b.representative.volume())
      return a.representative.volume() < b.representative.volume();
    return a.form < b.form;
  });
  return cat;
}

/// Block size used for the derived trades of the length-12 constant-weight
/// trades (triples, i.e. Steiner triple system trades).
inline constexpr int kStsBlockSize = 3;

inline bool is_sts_uniform(const Trade& t, int k = kStsBlockSize) {
  return derived_catalog(t, k).entries.size() == 1;
}

// --- Witt design and exact cover ------------------------------------------

inline WordSet orbit_of(const std::vector<Mask>& seeds, const std::vector<CoordPermutation>& gens) {
  std::vector<Mask> out;
  std::vector<Mask> stack(seeds.begin(), seeds.end());
  std::map<Mask, bool> seen;
  for (Mask s : seeds) seen[s] = true;
  while (!stack.empty()) {
    Mask w = stack.back();
    stack.pop_back();
    out.push_back(w);
    for (const auto& g : gens) {
      Mask y = g.apply(w);
      if (!seen[y]) {
        seen[y] = true;
        stack.push_back(y);
      }
    }
  }
  return make_word_set(std::move(out));
}

inline std::vector<CoordPermutation> psl2_11_generators() {
  return {CoordPermutation::from_cycles("(0123456789a)", 12), CoordPermutation::from_cycles("(13954)(267a8)", 12),
          CoordPermutation::from_cycles("(0b)(1a)(25)(37)(48)(69)", 12)};
}

inline WordSet witt_design() {
  WordSet w = orbit_of({Word::parse("000001011111").bits()}, psl2_11_generators());
  if (w.size() != 132) throw TradeError("Witt design orbit has wrong size");
  return w;
}

/// Completes `seed` (blocks of size k on n points, no two sharing k-1
/// points) to a Steiner system S(k-1, k, n) by exact cover of the
/// (k-1)-subsets; returns the first completion found.
inline std::optional<WordSet> complete_steiner_system(int n, int k, const WordSet& seed) {
  const Mask total = Mask{1} << n;
  std::vector<int> col(total, -1);
  int ncols = 0;
  for (Mask m = 0; m < total; ++m)
    if (popcount(m) == k - 1) col[m] = ncols++;
  std::vector<std::uint8_t> covered(ncols, 0);
  std::vector<Mask> chosen;
  auto subs = [&](Mask b, auto&& fn) {
    for (Mask r = b; r; r &= r - 1) fn(b & ~(r & -r));
  };
  for (Mask b : seed) {
    if (popcount(b) != k) throw TradeError("seed block has the wrong size");
    bool clash = false;
    subs(b, [&](Mask s) {
      if (covered[col[s]]) clash = true;
      covered[col[s]] = 1;
    });
    if (clash) return std::nullopt;
    chosen.push_back(b);
  }
  auto free_block = [&](Mask b) {
    bool ok = true;
    subs(b, [&](Mask s) {
      if (covered[col[s]]) ok = false;
    });
    return ok;
  };
  std::vector<Mask> cols_by_index(ncols);
  for (Mask m = 0; m < total; ++m)
    if (col[m] >= 0) cols_by_index[col[m]] = m;

  std::function<bool()> rec = [&]() -> bool {
    int best = -1;
    int best_count = n + 1;
    for (int c = 0; c < ncols; ++c) {
      if (covered[c]) continue;
      const Mask s = cols_by_index[c];
      int cnt = 0;
      for (int p = 0; p < n; ++p)
        if (!((s >> p) & 1U) && free_block(s | (Mask{1} << p))) ++cnt;
      if (cnt < best_count) {
        best_count = cnt;
        best = c;
        if (cnt == 0) return false;
      }
    }
    if (best < 0) return true;
    const Mask s = cols_by_index[best];
    for (int p = 0; p < n; ++p) {
      if ((s >> p) & 1U) continue;
      const Mask b = s | (Mask{1} << p);
      if (!free_block(b)) continue;
      subs(b, [&](Mask x) { covered[col[x]] = 1; });
      chosen.push_back(b);
      if (rec()) return true;
      chosen.pop_back();
      subs(b, [&](Mask x) { covered[col[x]] = 0; });
    }
    return false;
  };
  if (!rec()) return std::nullopt;
  return make_word_set(chosen);
}

inline bool is_steiner_system(int n, int k, const WordSet& s) {
  std::vector<int> hits(std::size_t{1} << n, 0);
  for (Mask b : s) {
    if (popcount(b) != k) return false;
    for (Mask r = b; r; r &= r - 1) hits[b & ~(r & -r)]++;
  }
  for (Mask m = 0; m < (Mask{1} << n); ++m)
    if (popcount(m) == k - 1 && hits[m] != 1) return false;
  return true;
}

inline bool is_sub_witt(const WordSet& s) {
  for (Mask w : s)
    if (popcount(w) != 6 || (w & ~full_mask(12)) != 0) throw TradeError("is_sub_witt needs weight-6 words of length 12");
  return complete_steiner_system(12, 6, s).has_value();
}

// --- third mates ------------------------------------------------------------

/// All sets S disjoint from every given part such that (P, S) is an
/// extended trade for each part P.
inline std::vector<WordSet> find_mates(int n, KindSpec kind, const std::vector<WordSet>& parts) {
  if (kind.kind != TradeKind::Extended) throw TradeError("mates are searched for extended trades");
  if (parts.empty()) throw TradeError("find_mates needs at least one part");
  const std::size_t size = std::size_t{1} << n;
  const auto pairs = detail::pair_masks(n);
  std::vector<std::uint8_t> in_u(size, 0), cand(size, 1);
  for (const auto& p : parts) {
    std::vector<std::uint8_t> cnt(size, 0);
    for (Mask w : p) {
      in_u[w] = 1;
      for (Mask e : pairs) cnt[w ^ e]++;
    }
    // A mate word has exactly n/2 neighbours in every part.
    for (Mask x = 0; x < size; ++x)
      if (cnt[x] != n / 2) cand[x] = 0;
  }
  for (Mask x = 0; x < size; ++x)
    if (in_u[x] || (popcount(x) & 1)) cand[x] = 0;

  std::vector<std::uint8_t> in_t2(size, 0), adj2(size, 0);
  std::vector<WordSet> out;
  const WordSet& anchor = parts[0];

  std::function<void(std::size_t)> rec;
  std::function<void(std::size_t, Mask, Mask)> match = [&](std::size_t idx, Mask v, Mask free) {
    if (free == 0) {
      rec(idx + 1);
      return;
    }
    const int c = std::countr_zero(free);
    const Mask rest = free & (free - 1);
    for (Mask r = rest; r; r &= r - 1) {
      const int d = std::countr_zero(r);
      const Mask x = v ^ (Mask{1} << c) ^ (Mask{1} << d);
      const Mask nf = rest & ~(Mask{1} << d);
      if (in_t2[x]) {
        match(idx, v, nf);
        continue;
      }
      if (!cand[x] || adj2[x]) continue;
      in_t2[x] = 1;
      for (Mask e : pairs) adj2[x ^ e]++;
      match(idx, v, nf);
      for (Mask e : pairs) adj2[x ^ e]--;
      in_t2[x] = 0;
    }
  };
  rec = [&](std::size_t idx) {
    if (idx == anchor.size()) {
      std::vector<Mask> t2;
      for (Mask x = 0; x < size; ++x)
        if (in_t2[x]) t2.push_back(x);
      WordSet s = make_word_set(std::move(t2));
      if (s.size() != anchor.size()) return;
      for (const auto& p : parts)
        if (!verify_extended(Trade(n, kind, p, s)).valid) return;
      out.push_back(std::move(s));
      return;
    }
    match(idx, anchor[idx], full_mask(n));
  };
  rec(0);
  std::sort(out.begin(), out.end());
  return out;
}

/// All T2 disjoint from T0 u T1 with (T0,T2) and (T1,T2) both trades.
inline std::vector<WordSet> find_third_mate(const Trade& t) {
  return find_mates(t.length(), t.kind(), {t.t0(), t.t1()});
}

}  // namespace xtrade
