// Small permutation groups on at most 16 points: Schreier-Sims orders,
// point orbits, explicit element enumeration.

#pragma once

#include <array>
#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

#include "xtrade/word.hpp"

namespace xtrade {

/// Compact permutation of {0..n-1}, n <= 16.
struct Perm {
  std::array<std::uint8_t, kMaxLength> p{};
  std::uint8_t n = 0;

  static Perm identity(int n) {
    Perm r;
    r.n = static_cast<std::uint8_t>(n);
    for (int i = 0; i < n; ++i) r.p[i] = static_cast<std::uint8_t>(i);
    return r;
  }
  static Perm from(const CoordPermutation& c) {
    Perm r;
    r.n = static_cast<std::uint8_t>(c.size());
    for (int i = 0; i < c.size(); ++i) r.p[i] = static_cast<std::uint8_t>(c[i]);
    return r;
  }
  CoordPermutation to_coord() const {
    std::vector<int> im(n);
    for (int i = 0; i < n; ++i) im[i] = p[i];
    return CoordPermutation(std::move(im));
  }

  int operator[](int i) const { return p[i]; }
  bool is_identity() const {
    for (int i = 0; i < n; ++i)
      if (p[i] != i) return false;
    return true;
  }
  Perm inverse() const {
    Perm r;
    r.n = n;
    for (int i = 0; i < n; ++i) r.p[p[i]] = static_cast<std::uint8_t>(i);
    return r;
  }
  /// (a * b)(x) = a(b(x)).
  friend Perm operator*(const Perm& a, const Perm& b) {
    Perm r;
    r.n = b.n;
    for (int i = 0; i < b.n; ++i) r.p[i] = a.p[b.p[i]];
    return r;
  }
  Mask apply(Mask m) const {
    Mask out = 0;
    while (m) {
      int i = std::countr_zero(m);
      m &= m - 1;
      out |= Mask{1} << p[i];
    }
    return out;
  }
  friend bool operator==(const Perm& a, const Perm& b) { return a.n == b.n && a.p == b.p; }
  friend bool operator<(const Perm& a, const Perm& b) { return a.p < b.p; }
};

/// Stabilizer chain built by the deterministic Schreier-Sims algorithm.
class PermGroup {
 public:
  explicit PermGroup(int n) : n_(n) {}
  PermGroup(int n, const std::vector<Perm>& gens) : n_(n) {
    for (const auto& g : gens) add_generator(g);
  }

  int degree() const { return n_; }
  const std::vector<Perm>& generators() const { return gens_; }

  void add_generator(const Perm& g) {
    if (g.is_identity()) return;
    gens_.push_back(g);
    if (contains(g)) return;
    insert(g, 0);
  }

  bool contains(const Perm& g) const {
    auto [h, lvl] = sift(g, 0);
    (void)lvl;
    return h.is_identity();
  }

  std::uint64_t order() const {
    std::uint64_t o = 1;
    for (const auto& L : levels_) o *= L.orbit.size();
    return o;
  }

  /// Orbits of the group on points, each sorted, ordered by least element.
  std::vector<std::vector<int>> point_orbits() const { return orbits_of(n_, gens_); }

  static std::vector<std::vector<int>> orbits_of(int n, const std::vector<Perm>& gens) {
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto& g : gens)
      for (int i = 0; i < n; ++i) {
        int a = find(i), b = find(g[i]);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    std::vector<std::vector<int>> out;
    std::vector<int> idx(n, -1);
    for (int i = 0; i < n; ++i) {
      int r = find(i);
      if (idx[r] < 0) {
        idx[r] = static_cast<int>(out.size());
        out.emplace_back();
      }
      out[idx[r]].push_back(i);
    }
    return out;
  }

  /// All elements; only sensible for small orders.
  std::vector<Perm> elements(std::uint64_t limit = 5'000'000) const {
    if (order() > limit) throw TradeError("group too large to enumerate");
    std::vector<Perm> out{Perm::identity(n_)};
    for (auto it = levels_.rbegin(); it != levels_.rend(); ++it) {
      std::vector<Perm> next;
      next.reserve(out.size() * it->orbit.size());
      for (int pt : it->orbit)
        for (const auto& e : out) next.push_back(it->transversal[pt] * e);
      out.swap(next);
    }
    return out;
  }

 private:
  struct Level {
    int base = 0;
    std::vector<Perm> gens;  // strong generators fixing earlier base points
    std::vector<int> orbit;
    std::array<Perm, kMaxLength> transversal{};  // transversal[x](base) == x
    std::array<bool, kMaxLength> in_orbit{};
  };

  int n_;
  std::vector<Perm> gens_;
  std::vector<Level> levels_;

  std::pair<Perm, int> sift(Perm h, int from) const {
    for (int l = from; l < static_cast<int>(levels_.size()); ++l) {
      const Level& L = levels_[l];
      int x = h[L.base];
      if (!L.in_orbit[x]) return {h, l};
      h = L.transversal[x].inverse() * h;
    }
    return {h, static_cast<int>(levels_.size())};
  }

  void rebuild_orbit(int l) {
    Level& L = levels_[l];
    L.in_orbit.fill(false);
    L.orbit.assign(1, L.base);
    L.in_orbit[L.base] = true;
    L.transversal[L.base] = Perm::identity(n_);
    for (std::size_t k = 0; k < L.orbit.size(); ++k) {
      int x = L.orbit[k];
      for (const auto& s : L.gens) {
        int y = s[x];
        if (!L.in_orbit[y]) {
          L.in_orbit[y] = true;
          L.transversal[y] = s * L.transversal[x];
          L.orbit.push_back(y);
        }
      }
    }
  }

  // Adds h (which fixes the base points of levels < l) as a strong generator.
  void add_strong(const Perm& h, int l) {
    if (l == static_cast<int>(levels_.size())) {
      Level L;
      int b = 0;
      while (h[b] == b) ++b;
      L.base = b;
      levels_.push_back(L);
    }
    for (int k = 0; k <= l; ++k) {
      levels_[k].gens.push_back(h);
      rebuild_orbit(k);
    }
  }

  void insert(const Perm& g, int l0) {
    auto [h0, lvl0] = sift(g, l0);
    if (h0.is_identity()) return;
    add_strong(h0, lvl0);
    int l = lvl0;
    while (l >= 0) {
      bool added = false;
      const Level& L = levels_[l];
      for (std::size_t xi = 0; !added && xi < L.orbit.size(); ++xi) {
        const int x = L.orbit[xi];
        for (std::size_t si = 0; si < L.gens.size(); ++si) {
          const Perm& s = L.gens[si];
          Perm sch = L.transversal[s[x]].inverse() * s * L.transversal[x];
          if (sch.is_identity()) continue;
          auto [h, lvl] = sift(sch, l + 1);
          if (!h.is_identity()) {
            add_strong(h, lvl);
            l = lvl;
            added = true;
            break;
          }
        }
      }
      if (!added) --l;
    }
  }
};

}  // namespace xtrade
