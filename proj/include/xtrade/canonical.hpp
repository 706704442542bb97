// Canonical forms and automorphism groups of trades.
//
// Coordinate permutations are handled by a partition refinement search:
// colour refinement on the coordinate/word incidence structure, then
// individualisation of the first non-singleton cell, with pruning by the
// automorphisms found so far. The canonical labelling is the one giving the
// least encoding among the leaves that are visited. Translations (or the
// complement and the part swap, for constant-weight equivalence) are handled
// by trying every admissible normalisation and keeping the least key.

#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xtrade/perm_group.hpp"
#include "xtrade/trade.hpp"
#include "xtrade/word.hpp"

namespace xtrade {

using Encoding = std::vector<std::uint16_t>;

struct PermCanonResult {
  Encoding encoding;  // relabelled parts, each sorted, concatenated
  Perm labeling;      // coordinate c goes to position labeling[c]
  std::vector<Perm> automorphisms;
  std::uint64_t leaves = 0;
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class PermCanonizer {
 public:
  PermCanonizer(int n, std::span<const WordSet> parts) : n_(n) {
    for (std::size_t p = 0; p < parts.size(); ++p) {
      part_sizes_.push_back(parts[p].size());
      for (Mask w : parts[p]) {
        words_.push_back(w);
        part_of_.push_back(static_cast<std::uint8_t>(p));
      }
    }
    word_hash_.resize(words_.size());
  }

  PermCanonResult run() {
    Cells root{full_mask(n_)};
    path_.clear();
    search(root, 0);
    PermCanonResult r;
    r.encoding = best_enc_;
    r.labeling = best_lab_;
    r.automorphisms = std::move(auts_);
    r.leaves = leaves_;
    return r;
  }

 private:
  using Cells = std::vector<Mask>;

  int n_;
  std::vector<Mask> words_;
  std::vector<std::uint8_t> part_of_;
  std::vector<std::size_t> part_sizes_;
  std::vector<std::uint64_t> word_hash_;

  std::vector<int> path_;
  bool have_first_ = false;
  Encoding first_enc_, best_enc_;
  Perm first_lab_, best_lab_;
  std::vector<int> first_path_, best_path_;
  std::vector<Perm> auts_;
  std::uint64_t leaves_ = 0;

  void refine(Cells& cells) {
    std::array<std::uint64_t, kMaxLength> sig{};
    while (cells.size() < static_cast<std::size_t>(n_)) {
      for (std::size_t k = 0; k < words_.size(); ++k) {
        std::uint64_t h = mix64(part_of_[k] + 1);
        for (Mask c : cells) h = mix64(h ^ static_cast<std::uint64_t>(popcount(words_[k] & c)));
        word_hash_[k] = mix64(h);
      }
      sig.fill(0);
      for (std::size_t k = 0; k < words_.size(); ++k) {
        Mask w = words_[k];
        const std::uint64_t h = word_hash_[k];
        while (w) {
          int i = std::countr_zero(w);
          w &= w - 1;
          sig[i] += h;
        }
      }
      Cells next;
      next.reserve(n_);
      for (Mask c : cells) {
        if (popcount(c) == 1) {
          next.push_back(c);
          continue;
        }
        std::array<std::pair<std::uint64_t, int>, kMaxLength> items;
        int m = 0;
        for (Mask x = c; x; x &= x - 1) {
          int i = std::countr_zero(x);
          items[m++] = {sig[i], i};
        }
        std::sort(items.begin(), items.begin() + m);
        Mask cur = Mask{1} << items[0].second;
        for (int t = 1; t < m; ++t) {
          if (items[t].first != items[t - 1].first) {
            next.push_back(cur);
            cur = 0;
          }
          cur |= Mask{1} << items[t].second;
        }
        next.push_back(cur);
      }
      const bool changed = next.size() != cells.size();
      cells.swap(next);
      if (!changed) break;
    }
  }

  Encoding encode(const Perm& lab) const {
    Encoding e;
    e.reserve(words_.size());
    std::size_t k = 0;
    for (std::size_t p = 0; p < part_sizes_.size(); ++p) {
      const std::size_t start = e.size();
      for (std::size_t t = 0; t < part_sizes_[p]; ++t, ++k) e.push_back(static_cast<std::uint16_t>(lab.apply(words_[k])));
      std::sort(e.begin() + static_cast<std::ptrdiff_t>(start), e.end());
    }
    return e;
  }

  static int common_prefix(const std::vector<int>& a, const std::vector<int>& b) {
    std::size_t k = 0;
    while (k < a.size() && k < b.size() && a[k] == b[k]) ++k;
    return static_cast<int>(k);
  }

  void add_aut(const Perm& from_lab, const Perm& lab) {
    // from_lab^{-1} o lab maps the structure onto itself.
    Perm a = from_lab.inverse() * lab;
    if (a.is_identity()) return;
    for (const auto& g : auts_)
      if (g == a) return;
    auts_.push_back(a);
  }

  int leaf(const Cells& cells, int depth) {
    ++leaves_;
    Perm lab = Perm::identity(n_);
    for (std::size_t i = 0; i < cells.size(); ++i) lab.p[std::countr_zero(cells[i])] = static_cast<std::uint8_t>(i);
    Encoding enc = encode(lab);
    if (!have_first_) {
      have_first_ = true;
      first_enc_ = best_enc_ = enc;
      first_lab_ = best_lab_ = lab;
      first_path_ = best_path_ = path_;
      return depth;
    }
    int jump = depth;
    if (enc == first_enc_) {
      add_aut(first_lab_, lab);
      jump = std::min(jump, common_prefix(path_, first_path_));
    }
    if (enc == best_enc_) {
      add_aut(best_lab_, lab);
      jump = std::min(jump, common_prefix(path_, best_path_));
    } else if (enc < best_enc_) {
      best_enc_ = std::move(enc);
      best_lab_ = lab;
      best_path_ = path_;
    }
    return jump;
  }

  // True if c lies in the orbit of an already explored point under the
  // automorphisms fixing the current path pointwise.
  bool pruned(int c, Mask explored) const {
    std::array<int, kMaxLength> parent;
    for (int i = 0; i < n_; ++i) parent[i] = i;
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    bool any = false;
    for (const auto& g : auts_) {
      bool fixes = true;
      for (int v : path_)
        if (g[v] != v) {
          fixes = false;
          break;
        }
      if (!fixes) continue;
      any = true;
      for (int i = 0; i < n_; ++i) {
        int a = find(i), b = find(g[i]);
        if (a != b) parent[a] = b;
      }
    }
    if (!any) return false;
    const int rc = find(c);
    for (Mask e = explored; e; e &= e - 1)
      if (find(std::countr_zero(e)) == rc) return true;
    return false;
  }

  int search(Cells cells, int depth) {
    refine(cells);
    if (cells.size() == static_cast<std::size_t>(n_)) return leaf(cells, depth);
    std::size_t t = 0;
    while (popcount(cells[t]) == 1) ++t;
    const Mask cand = cells[t];
    Mask explored = 0;
    for (Mask x = cand; x; x &= x - 1) {
      const int c = std::countr_zero(x);
      if (explored && pruned(c, explored)) continue;
      explored |= Mask{1} << c;
      Cells child;
      child.reserve(cells.size() + 1);
      child.insert(child.end(), cells.begin(), cells.begin() + static_cast<std::ptrdiff_t>(t));
      child.push_back(Mask{1} << c);
      child.push_back(cand & ~(Mask{1} << c));
      child.insert(child.end(), cells.begin() + static_cast<std::ptrdiff_t>(t) + 1, cells.end());
      path_.push_back(c);
      int r = search(std::move(child), depth + 1);
      path_.pop_back();
      if (r < depth) return r;
    }
    return depth;
  }
};

}  // namespace detail

/// Canonical labelling of an ordered tuple of word sets under coordinate
/// permutations that map every set onto itself.
inline PermCanonResult perm_canonical(int n, std::span<const WordSet> parts) {
  detail::PermCanonizer c(n, parts);
  return c.run();
}

/// Byte key of a canonical form: n, |first part|, then the words of both
/// parts, each a 16-bit little-endian integer.
struct CanonicalForm {
  std::vector<std::uint8_t> key;

  static CanonicalForm from_encoding(const Encoding& e) {
    CanonicalForm f;
    f.key.reserve(e.size() * 2);
    for (std::uint16_t v : e) {
      f.key.push_back(static_cast<std::uint8_t>(v & 0xFF));
      f.key.push_back(static_cast<std::uint8_t>(v >> 8));
    }
    return f;
  }

  Encoding encoding() const {
    Encoding e(key.size() / 2);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = static_cast<std::uint16_t>(key[2 * i] | (key[2 * i + 1] << 8));
    return e;
  }

  std::string hex() const {
    static constexpr char kHex[] = "0123456789abcdef";
    std::string s;
    s.reserve(key.size() * 2);
    for (auto b : key) {
      s += kHex[b >> 4];
      s += kHex[b & 15];
    }
    return s;
  }

  static CanonicalForm from_hex(const std::string& h) {
    if (h.size() % 4 != 0) throw TradeError("bad canonical key length");
    CanonicalForm f;
    for (std::size_t i = 0; i < h.size(); i += 2) f.key.push_back(static_cast<std::uint8_t>(std::stoi(h.substr(i, 2), nullptr, 16)));
    return f;
  }

  friend bool operator==(const CanonicalForm&, const CanonicalForm&) = default;
  friend auto operator<=>(const CanonicalForm& a, const CanonicalForm& b) { return a.key <=> b.key; }
};

/// Which transformations count as equivalences.
enum class Equivalence {
  Translations,  // coordinate permutations, translations by trade words, part swap
  Johnson,       // coordinate permutations, part swap, complement when every word has weight n/2
  PermOnly,      // coordinate permutations and part swap
};

struct CanonConfig {
  Mask translation = 0;
  bool swapped = false;
};

struct PairCanon {
  Encoding key;  // n, |A|, A..., B...
  CanonConfig config;
  Perm labeling;
  std::vector<Perm> perm_automorphisms;  // of the optimal normalised pair
  // All optimal normalisations with their labellings (first one is `config`).
  std::vector<std::pair<CanonConfig, Perm>> optima;
};

namespace detail {

inline bool all_half_weight(int n, const WordSet& a, const WordSet& b) {
  if (n % 2 != 0) return false;
  for (Mask w : a)
    if (popcount(w) != n / 2) return false;
  for (Mask w : b)
    if (popcount(w) != n / 2) return false;
  return true;
}

}  // namespace detail

/// Canonical key of the unordered pair {p0, p1} together with the data needed
/// to rebuild automorphisms. With `all_optima`, every normalisation reaching
/// the key is recorded.
inline PairCanon canonical_pair(int n, const WordSet& p0, const WordSet& p1, Equivalence eq, bool allow_complement,
                                bool all_optima) {
  std::vector<CanonConfig> configs;
  if (eq == Equivalence::Translations) {
    for (Mask u : p0) configs.push_back({u, false});
    for (Mask u : p1) configs.push_back({u, true});
  } else {
    const bool comp = allow_complement && (eq == Equivalence::PermOnly || detail::all_half_weight(n, p0, p1));
    for (Mask t : {Mask{0}, full_mask(n)}) {
      if (t != 0 && !comp) continue;
      configs.push_back({t, false});
      configs.push_back({t, true});
    }
  }
  // Keep the configurations with the least invariant.
  std::vector<Encoding> invs;
  invs.reserve(configs.size());
  const std::vector<const WordSet*> parts = {&p0, &p1};
  for (const auto& c : configs) {
    const WordSet& a = *parts[c.swapped ? 1 : 0];
    const WordSet& b = *parts[c.swapped ? 0 : 1];
    Encoding inv(2 * (n + 1) + 1, 0);
    inv[0] = static_cast<std::uint16_t>(a.size());
    for (Mask w : a) inv[1 + popcount(w ^ c.translation)]++;
    for (Mask w : b) inv[2 + n + popcount(w ^ c.translation)]++;
    invs.push_back(std::move(inv));
  }
  const Encoding min_inv = *std::min_element(invs.begin(), invs.end());

  PairCanon out;
  bool have = false;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    if (invs[i] != min_inv) continue;
    const auto& c = configs[i];
    std::array<WordSet, 2> np = {translate(*parts[c.swapped ? 1 : 0], c.translation),
                                 translate(*parts[c.swapped ? 0 : 1], c.translation)};
    PermCanonResult r = perm_canonical(n, np);
    Encoding key;
    key.reserve(r.encoding.size() + 2);
    key.push_back(static_cast<std::uint16_t>(n));
    key.push_back(static_cast<std::uint16_t>(np[0].size()));
    key.insert(key.end(), r.encoding.begin(), r.encoding.end());
    if (!have || key < out.key) {
      have = true;
      out.key = std::move(key);
      out.config = c;
      out.labeling = r.labeling;
      out.perm_automorphisms = std::move(r.automorphisms);
      out.optima.clear();
      out.optima.emplace_back(c, r.labeling);
    } else if (key == out.key) {
      if (all_optima) out.optima.emplace_back(c, r.labeling);
    }
  }
  return out;
}

inline Equivalence default_equivalence(const Trade& t) {
  return t.kind().kind == TradeKind::Steiner ? Equivalence::Johnson : Equivalence::Translations;
}

inline CanonicalForm canonical_form(const Trade& t, Equivalence eq) {
  return CanonicalForm::from_encoding(canonical_pair(t.length(), t.t0(), t.t1(), eq, true, false).key);
}

inline CanonicalForm canonical_form(const Trade& t) { return canonical_form(t, default_equivalence(t)); }

/// Canonical form of a single word set under coordinate permutations, and the
/// complement when allowed.
inline CanonicalForm canonical_form_permonly(const WordSet& s, int n, bool allow_complement) {
  Encoding best;
  for (Mask t : {Mask{0}, full_mask(n)}) {
    if (t != 0 && !allow_complement) continue;
    std::array<WordSet, 1> parts = {translate(s, t)};
    PermCanonResult r = perm_canonical(n, parts);
    Encoding key{static_cast<std::uint16_t>(n), static_cast<std::uint16_t>(s.size())};
    key.insert(key.end(), r.encoding.begin(), r.encoding.end());
    if (best.empty() || key < best) best = std::move(key);
  }
  return CanonicalForm::from_encoding(best);
}

/// The trade rebuilt from its canonical key.
inline Trade canonical_representative(const Trade& t, Equivalence eq) {
  const Encoding e = canonical_pair(t.length(), t.t0(), t.t1(), eq, true, false).key;
  const std::size_t a = e[1];
  std::vector<Mask> p0(e.begin() + 2, e.begin() + 2 + static_cast<std::ptrdiff_t>(a));
  std::vector<Mask> p1(e.begin() + 2 + static_cast<std::ptrdiff_t>(a), e.end());
  return Trade(t.length(), t.kind(), std::move(p0), std::move(p1));
}

inline Trade canonical_representative(const Trade& t) { return canonical_representative(t, default_equivalence(t)); }

inline bool are_equivalent(const Trade& a, const Trade& b, Equivalence eq) {
  if (a.length() != b.length() || a.volume() != b.volume()) return false;
  return canonical_form(a, eq) == canonical_form(b, eq);
}

inline bool are_equivalent(const Trade& a, const Trade& b) { return are_equivalent(a, b, default_equivalence(a)); }

/// Canonical form of a k-way trade: least key over orderings of the parts
/// and the allowed normalising translations.
inline CanonicalForm canonical_form(const KWayTrade& t, Equivalence eq) {
  const int n = t.length();
  const int k = t.ways();
  const auto& parts = t.parts();
  std::vector<Mask> shifts;
  if (eq == Equivalence::Translations) {
    for (const auto& p : parts) shifts.insert(shifts.end(), p.begin(), p.end());
  } else {
    shifts.push_back(0);
    bool comp = n % 2 == 0;
    if (eq == Equivalence::Johnson)
      for (const auto& p : parts)
        for (Mask w : p) comp = comp && popcount(w) == n / 2;
    if (comp) shifts.push_back(full_mask(n));
  }
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::pair<std::vector<int>, Mask>> cands;
  std::vector<Encoding> invs;
  do {
    for (Mask x : shifts) {
      Encoding inv;
      for (int i : order) {
        Encoding h(n + 2, 0);
        h[0] = static_cast<std::uint16_t>(parts[i].size());
        for (Mask w : parts[i]) h[1 + popcount(w ^ x)]++;
        inv.insert(inv.end(), h.begin(), h.end());
      }
      cands.emplace_back(order, x);
      invs.push_back(std::move(inv));
    }
  } while (std::next_permutation(order.begin(), order.end()));
  const Encoding min_inv = *std::min_element(invs.begin(), invs.end());
  Encoding best;
  for (std::size_t c = 0; c < cands.size(); ++c) {
    if (invs[c] != min_inv) continue;
    std::vector<WordSet> np;
    for (int i : cands[c].first) np.push_back(translate(parts[i], cands[c].second));
    PermCanonResult r = perm_canonical(n, np);
    Encoding key{static_cast<std::uint16_t>(n), static_cast<std::uint16_t>(k)};
    for (const auto& p : np) key.push_back(static_cast<std::uint16_t>(p.size()));
    key.insert(key.end(), r.encoding.begin(), r.encoding.end());
    if (best.empty() || key < best) best = std::move(key);
  }
  return CanonicalForm::from_encoding(best);
}

inline bool are_equivalent(const KWayTrade& a, const KWayTrade& b, Equivalence eq) {
  if (a.length() != b.length() || a.ways() != b.ways()) return false;
  return canonical_form(a, eq) == canonical_form(b, eq);
}

struct AutomorphismReport {
  std::uint64_t order = 0;
  std::uint64_t normalisation_orbit = 0;  // optimal normalisations
  std::uint64_t stabilizer_order = 0;     // coordinate permutations fixing the normalised pair
  std::vector<GraphAutomorphism> generators;
  std::uint64_t translation_count = 0;      // |{x : x + U = U}|
  std::uint64_t perm_stabilizer_order = 0;  // permutations fixing or swapping the parts
  bool part_swapping = false;
  std::vector<std::vector<int>> coordinate_orbits;
  std::vector<std::size_t> word_orbit_sizes;  // orbits on T0 u T1, descending
};

inline std::uint64_t translation_count(const WordSet& u) {
  std::uint64_t cnt = 0;
  for (Mask w : u) {
    const Mask x = w ^ u.front();
    bool ok = true;
    for (Mask y : u)
      if (!contains(u, y ^ x)) {
        ok = false;
        break;
      }
    if (ok) ++cnt;
  }
  return cnt;
}

/// |Sym(T)|: coordinate permutations mapping (T0, T1) to itself or to (T1, T0).
inline std::uint64_t perm_stabilizer_order(const Trade& t) {
  const int n = t.length();
  std::array<WordSet, 2> a = {t.t0(), t.t1()};
  std::array<WordSet, 2> b = {t.t1(), t.t0()};
  PermCanonResult ra = perm_canonical(n, a);
  PermCanonResult rb = perm_canonical(n, b);
  std::vector<Perm> gens = ra.automorphisms;
  PermGroup g(n, gens);
  return g.order() * (ra.encoding == rb.encoding ? 2 : 1);
}

namespace detail {

inline GraphAutomorphism to_graph_aut(const Perm& p, Mask translation, int n, bool swaps) {
  return {p.to_coord(), Word(translation, n), swaps};
}

inline std::vector<std::size_t> word_orbits(const WordSet& u, const std::vector<GraphAutomorphism>& gens,
                                            std::vector<int>* orbit_id = nullptr) {
  std::vector<int> id(u.size(), -1);
  std::vector<std::size_t> sizes;
  for (std::size_t s = 0; s < u.size(); ++s) {
    if (id[s] >= 0) continue;
    const int cur = static_cast<int>(sizes.size());
    sizes.push_back(0);
    std::vector<std::size_t> stack{s};
    id[s] = cur;
    while (!stack.empty()) {
      std::size_t k = stack.back();
      stack.pop_back();
      ++sizes[cur];
      for (const auto& g : gens) {
        Mask y = g.apply(u[k]);
        auto it = std::lower_bound(u.begin(), u.end(), y);
        std::size_t j = static_cast<std::size_t>(it - u.begin());
        if (id[j] < 0) {
          id[j] = cur;
          stack.push_back(j);
        }
      }
    }
  }
  if (orbit_id) *orbit_id = id;
  return sizes;
}

}  // namespace detail

inline AutomorphismReport automorphisms(const Trade& t, Equivalence eq) {
  const int n = t.length();
  AutomorphismReport rep;
  PairCanon pc = canonical_pair(n, t.t0(), t.t1(), eq, true, true);
  const WordSet u = t.support();
  const Mask ts = pc.config.translation;

  std::vector<GraphAutomorphism> gens;
  for (const Perm& p : pc.perm_automorphisms) gens.push_back(detail::to_graph_aut(p, p.apply(ts) ^ ts, n, false));
  PermGroup stab(n, pc.perm_automorphisms);
  rep.stabilizer_order = stab.order();
  rep.normalisation_orbit = pc.optima.size();
  rep.order = rep.stabilizer_order * rep.normalisation_orbit;

  // One element carrying the optimal normalisation to each other optimum,
  // skipping those already generated.
  const Perm& lab_star = pc.optima.front().second;
  for (std::size_t i = 1; i < pc.optima.size(); ++i) {
    const auto& [cfg, lab] = pc.optima[i];
    if (eq == Equivalence::Translations) {
      std::vector<int> ids;
      detail::word_orbits(u, gens, &ids);
      const auto pos_star = std::lower_bound(u.begin(), u.end(), ts) - u.begin();
      const auto pos = std::lower_bound(u.begin(), u.end(), cfg.translation) - u.begin();
      if (ids[pos] == ids[pos_star]) continue;
    }
    const Perm sigma = lab.inverse() * lab_star;
    gens.push_back(detail::to_graph_aut(sigma, sigma.apply(ts) ^ cfg.translation, n, cfg.swapped != pc.config.swapped));
  }
  rep.generators = gens;
  rep.part_swapping = std::any_of(gens.begin(), gens.end(), [](const auto& g) { return g.swaps_parts; });

  std::vector<Perm> perm_parts;
  for (const auto& g : gens) perm_parts.push_back(Perm::from(g.perm));
  rep.coordinate_orbits = PermGroup::orbits_of(n, perm_parts);
  rep.word_orbit_sizes = detail::word_orbits(u, gens);
  std::sort(rep.word_orbit_sizes.rbegin(), rep.word_orbit_sizes.rend());
  rep.translation_count = translation_count(u);
  rep.perm_stabilizer_order = perm_stabilizer_order(t);
  return rep;
}

inline AutomorphismReport automorphisms(const Trade& t) { return automorphisms(t, default_equivalence(t)); }

}  // namespace xtrade
