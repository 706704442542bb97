// Trades: pairs (and k-tuples) of disjoint word sets, their verification and
// basic structural operations.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "xtrade/word.hpp"

namespace xtrade {

/// Sorted ascending, duplicate-free list of word masks.
using WordSet = std::vector<Mask>;

enum class TradeKind { Extended, OnePerfect, Steiner };

struct KindSpec {
  TradeKind kind = TradeKind::Extended;
  int k = 0;  // block size, Steiner only

  static KindSpec extended() { return {TradeKind::Extended, 0}; }
  static KindSpec one_perfect() { return {TradeKind::OnePerfect, 0}; }
  static KindSpec steiner(int k) { return {TradeKind::Steiner, k}; }

  std::string str() const {
    switch (kind) {
      case TradeKind::Extended: return "ext";
      case TradeKind::OnePerfect: return "perf";
      case TradeKind::Steiner: return "steiner:" + std::to_string(k);
    }
    return "?";
  }

  static KindSpec parse(const std::string& s) {
    if (s == "ext") return extended();
    if (s == "perf") return one_perfect();
    if (s.rfind("steiner:", 0) == 0) {
      int k = std::stoi(s.substr(8));
      if (k < 1) throw TradeError("bad steiner block size: " + s);
      return steiner(k);
    }
    throw TradeError("unknown trade kind: " + s);
  }

  friend bool operator==(const KindSpec&, const KindSpec&) = default;
};

inline WordSet make_word_set(std::vector<Mask> words) {
  std::sort(words.begin(), words.end());
  if (std::adjacent_find(words.begin(), words.end()) != words.end()) throw TradeError("duplicate word in set");
  return words;
}

inline WordSet words_to_set(const std::vector<Word>& words) {
  std::vector<Mask> m;
  m.reserve(words.size());
  for (const auto& w : words) m.push_back(w.bits());
  return make_word_set(std::move(m));
}

inline bool contains(const WordSet& s, Mask w) { return std::binary_search(s.begin(), s.end(), w); }

inline bool disjoint(const WordSet& a, const WordSet& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return false;
    if (*i < *j) ++i;
    else ++j;
  }
  return true;
}

inline WordSet set_union(const WordSet& a, const WordSet& b) {
  WordSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline WordSet set_difference(const WordSet& a, const WordSet& b) {
  WordSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline WordSet translate(const WordSet& s, Mask x) {
  std::vector<Mask> out(s.begin(), s.end());
  for (auto& w : out) w ^= x;
  std::sort(out.begin(), out.end());
  return out;
}

inline WordSet permute(const WordSet& s, const CoordPermutation& p) {
  std::vector<Mask> out;
  out.reserve(s.size());
  for (Mask w : s) out.push_back(p.apply(w));
  std::sort(out.begin(), out.end());
  return out;
}

inline WordSet apply(const GraphAutomorphism& g, const WordSet& s) {
  std::vector<Mask> out;
  out.reserve(s.size());
  for (Mask w : s) out.push_back(g.apply(w));
  std::sort(out.begin(), out.end());
  return out;
}

/// String-lexicographic comparison: coordinate 0 is the most significant.
inline bool lex_less(Mask a, Mask b, int n) {
  Mask d = a ^ b;
  if (d == 0) return false;
  int first = std::countr_zero(d);
  (void)n;
  return ((b >> first) & 1U) != 0;
}

/// An ordered pair of disjoint, equally sized, nonempty word sets.
class Trade {
 public:
  Trade(int n, KindSpec kind, std::vector<Mask> t0, std::vector<Mask> t1) : n_(n), kind_(kind) {
    if (n < 1 || n > kMaxLength) throw TradeError("trade length out of range");
    t0_ = make_word_set(std::move(t0));
    t1_ = make_word_set(std::move(t1));
    const Mask lim = full_mask(n);
    for (const WordSet* s : {&t0_, &t1_})
      for (Mask w : *s)
        if ((w & ~lim) != 0) throw TradeError("word exceeds trade length");
    if (t0_.empty() || t1_.empty()) throw TradeError("trade mates must be nonempty");
    if (t0_.size() != t1_.size()) throw TradeError("trade mates differ in size");
    if (!disjoint(t0_, t1_)) throw TradeError("trade mates are not disjoint");
    if (kind_.kind == TradeKind::Steiner && 2 * kind_.k > n_)
      throw TradeError("steiner trade needs n >= 2k");
  }

  int length() const { return n_; }
  KindSpec kind() const { return kind_; }
  const WordSet& t0() const { return t0_; }
  const WordSet& t1() const { return t1_; }
  const WordSet& part(int i) const { return i == 0 ? t0_ : t1_; }
  std::size_t volume() const { return t0_.size(); }
  WordSet support() const { return set_union(t0_, t1_); }

  Trade swapped() const { return Trade(n_, kind_, t1_, t0_); }
  Trade with_kind(KindSpec k) const { return Trade(n_, k, t0_, t1_); }

  friend bool operator==(const Trade& a, const Trade& b) {
    return a.n_ == b.n_ && a.kind_ == b.kind_ && a.t0_ == b.t0_ && a.t1_ == b.t1_;
  }

 private:
  int n_;
  KindSpec kind_;
  WordSet t0_;
  WordSet t1_;
};

/// A tuple of k >= 2 pairwise disjoint word sets.
class KWayTrade {
 public:
  KWayTrade(int n, KindSpec kind, std::vector<WordSet> parts) : n_(n), kind_(kind) {
    if (parts.size() < 2) throw TradeError("k-way trade needs at least two parts");
    for (auto& p : parts) parts_.push_back(make_word_set(std::move(p)));
    for (std::size_t i = 0; i < parts_.size(); ++i)
      for (std::size_t j = i + 1; j < parts_.size(); ++j)
        if (!disjoint(parts_[i], parts_[j])) throw TradeError("k-way trade parts are not disjoint");
  }
  explicit KWayTrade(const Trade& t) : KWayTrade(t.length(), t.kind(), {t.t0(), t.t1()}) {}

  int length() const { return n_; }
  KindSpec kind() const { return kind_; }
  int ways() const { return static_cast<int>(parts_.size()); }
  const std::vector<WordSet>& parts() const { return parts_; }
  Trade pair(int i, int j) const { return Trade(n_, kind_, parts_[i], parts_[j]); }

 private:
  int n_;
  KindSpec kind_;
  std::vector<WordSet> parts_;
};

struct Violation {
  std::string what;
  Mask center = 0;
  int count0 = 0;
  int count1 = 0;
};

struct VerifyReport {
  bool valid = true;
  std::vector<Violation> violations;
  std::map<int, int> degree_histogram;

  void fail(Violation v) {
    valid = false;
    violations.push_back(std::move(v));
  }
};

namespace detail {

// Membership table over all 2^n words: 0 none, 1 in T0, 2 in T1.
inline std::vector<std::uint8_t> membership(const Trade& t) {
  std::vector<std::uint8_t> m(std::size_t{1} << t.length(), 0);
  for (Mask w : t.t0()) m[w] = 1;
  for (Mask w : t.t1()) m[w] = 2;
  return m;
}

inline std::vector<Mask> pair_masks(int n) {
  std::vector<Mask> out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out.push_back((Mask{1} << i) | (Mask{1} << j));
  return out;
}

/// Distance-2 adjacency lists over the union T0 u T1 (indices into `words`).
inline std::vector<std::vector<int>> distance2_graph(const std::vector<Mask>& words) {
  std::vector<std::vector<int>> adj(words.size());
  for (std::size_t a = 0; a < words.size(); ++a)
    for (std::size_t b = a + 1; b < words.size(); ++b)
      if (popcount(words[a] ^ words[b]) == 2) {
        adj[a].push_back(static_cast<int>(b));
        adj[b].push_back(static_cast<int>(a));
      }
  return adj;
}

inline std::string word_str(Mask m, int n) { return Word(m, n).str(); }

}  // namespace detail

/// Bipartite, (n/2)-regular induced distance-2 graph criterion.
inline VerifyReport verify_extended(const Trade& t) {
  const int n = t.length();
  if (n % 2 != 0) throw TradeError("extended trade needs even length");
  VerifyReport rep;
  const auto member = detail::membership(t);
  const auto pairs = detail::pair_masks(n);
  for (int p = 0; p < 2; ++p) {
    for (Mask w : t.part(p)) {
      if (popcount(w) % 2 != 0)
        rep.fail({"odd weight word " + detail::word_str(w, n) + " in T" + std::to_string(p), w, 0, 0});
      int same = 0;
      int other = 0;
      for (Mask e : pairs) {
        auto m = member[w ^ e];
        if (m == 0) continue;
        if (m == p + 1) ++same;
        else ++other;
      }
      rep.degree_histogram[other]++;
      if (same != 0)
        rep.fail({"word " + detail::word_str(w, n) + " adjacent to its own part", w, same, other});
      if (other != n / 2)
        rep.fail({"word " + detail::word_str(w, n) + " has " + std::to_string(other) + " opposite neighbors, expected " +
                      std::to_string(n / 2),
                  w, same, other});
    }
  }
  return rep;
}

/// Radius-1 ball condition in H(n) for odd n.
inline VerifyReport verify_1perfect(const Trade& t) {
  const int n = t.length();
  if (n % 2 == 0) throw TradeError("1-perfect trade needs odd length");
  VerifyReport rep;
  const auto member = detail::membership(t);
  const Mask total = Mask{1} << n;
  for (Mask c = 0; c < total; ++c) {
    int cnt[3] = {0, 0, 0};
    cnt[member[c]]++;
    for (int i = 0; i < n; ++i) cnt[member[c ^ (Mask{1} << i)]]++;
    if (cnt[1] != cnt[2] || cnt[1] > 1)
      rep.fail({"ball around " + detail::word_str(c, n), c, cnt[1], cnt[2]});
  }
  for (int p = 0; p < 2; ++p)
    for (Mask w : t.part(p)) {
      int other = 0;
      for (Mask x : t.part(1 - p))
        if (popcount(w ^ x) <= 2) ++other;
      rep.degree_histogram[other]++;
    }
  return rep;
}

/// Maximum cliques of J(n,k): words at distance 1 from a weight-(k-1) word
/// (and from a weight-(k+1) word when n = 2k).
inline VerifyReport verify_steiner(const Trade& t) {
  const int n = t.length();
  const int k = t.kind().k;
  if (t.kind().kind != TradeKind::Steiner) throw TradeError("not a steiner trade");
  for (int p = 0; p < 2; ++p)
    for (Mask w : t.part(p))
      if (popcount(w) != k) throw TradeError("word " + detail::word_str(w, n) + " has weight != " + std::to_string(k));
  VerifyReport rep;
  const auto member = detail::membership(t);
  const Mask total = Mask{1} << n;
  for (Mask b = 0; b < total; ++b) {
    const int wb = popcount(b);
    if (!(wb == k - 1 || (n == 2 * k && wb == k + 1))) continue;
    int cnt[3] = {0, 0, 0};
    for (int i = 0; i < n; ++i) cnt[member[b ^ (Mask{1} << i)]]++;
    if (cnt[1] != cnt[2] || cnt[1] > 1)
      rep.fail({"clique at " + detail::word_str(b, n), b, cnt[1], cnt[2]});
  }
  for (int p = 0; p < 2; ++p)
    for (Mask w : t.part(p)) {
      int other = 0;
      for (Mask x : t.part(1 - p))
        if (popcount(w ^ x) == 2) ++other;
      rep.degree_histogram[other]++;
    }
  return rep;
}

inline VerifyReport verify(const Trade& t) {
  switch (t.kind().kind) {
    case TradeKind::Extended: return verify_extended(t);
    case TradeKind::OnePerfect: return verify_1perfect(t);
    case TradeKind::Steiner: return verify_steiner(t);
  }
  throw TradeError("unknown kind");
}

inline bool is_valid(const Trade& t) { return verify(t).valid; }

inline bool is_valid(const KWayTrade& t) {
  for (int i = 0; i < t.ways(); ++i)
    for (int j = i + 1; j < t.ways(); ++j)
      if (!is_valid(t.pair(i, j))) return false;
  return true;
}

/// Adjacency used for the trade graph: distance 2, or distance 1 for
/// 1-perfect trades (whose mates sit at odd distance).
inline int trade_graph_distance(const Trade& t) { return t.kind().kind == TradeKind::OnePerfect ? 1 : 2; }

inline std::vector<std::vector<int>> trade_graph(const Trade& t, std::vector<Mask>* words_out = nullptr) {
  std::vector<Mask> words = t.support();
  const int d = trade_graph_distance(t);
  std::vector<std::vector<int>> adj(words.size());
  for (std::size_t a = 0; a < words.size(); ++a)
    for (std::size_t b = a + 1; b < words.size(); ++b) {
      int h = popcount(words[a] ^ words[b]);
      if (h == d) {
        adj[a].push_back(static_cast<int>(b));
        adj[b].push_back(static_cast<int>(a));
      }
    }
  if (words_out) *words_out = std::move(words);
  return adj;
}

/// Connectivity of the trade graph (one BFS).
inline bool is_primary(const Trade& t) {
  if (!is_valid(t)) throw TradeError("is_primary on an invalid trade");
  const auto adj = trade_graph(t);
  std::vector<bool> seen(adj.size(), false);
  std::queue<int> q;
  q.push(0);
  seen[0] = true;
  std::size_t reached = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : adj[u])
      if (!seen[v]) {
        seen[v] = true;
        ++reached;
        q.push(v);
      }
  }
  return reached == adj.size();
}

enum class ComplementSymmetry { SwapsParts, FixesParts, Neither };

inline const char* to_string(ComplementSymmetry s) {
  switch (s) {
    case ComplementSymmetry::SwapsParts: return "swaps-parts";
    case ComplementSymmetry::FixesParts: return "fixes-parts";
    case ComplementSymmetry::Neither: return "neither";
  }
  return "?";
}

inline ComplementSymmetry complement_symmetry(const Trade& t) {
  const Mask ones = full_mask(t.length());
  WordSet c0 = translate(t.t0(), ones);
  if (c0 == t.t1()) return ComplementSymmetry::SwapsParts;
  if (c0 == t.t0() && translate(t.t1(), ones) == t.t1()) return ComplementSymmetry::FixesParts;
  return ComplementSymmetry::Neither;
}

enum class Ambient { Hypercube, HalvedCube, Johnson };

/// theta * f(x) == sum of f over neighbors, for every vertex x of the ambient
/// graph, with f = chi(T0) - chi(T1).
inline bool is_eigenfunction(const Trade& t, Ambient ambient, int theta) {
  const int n = t.length();
  std::vector<int> f(std::size_t{1} << n, 0);
  for (Mask w : t.t0()) f[w] = 1;
  for (Mask w : t.t1()) f[w] = -1;
  const Mask total = Mask{1} << n;
  const auto pairs = detail::pair_masks(n);
  int k = 0;
  if (ambient == Ambient::Johnson) {
    k = popcount(t.t0().front());
  }
  for (Mask x = 0; x < total; ++x) {
    long sum = 0;
    switch (ambient) {
      case Ambient::Hypercube:
        for (int i = 0; i < n; ++i) sum += f[x ^ (Mask{1} << i)];
        break;
      case Ambient::HalvedCube:
        if (popcount(x) % 2 != 0) continue;
        for (Mask e : pairs) sum += f[x ^ e];
        break;
      case Ambient::Johnson:
        if (popcount(x) != k) continue;
        for (Mask e : pairs)
          if (popcount(x & e) == 1) sum += f[x ^ e];
        break;
    }
    if (sum != static_cast<long>(theta) * f[x]) return false;
  }
  return true;
}

/// Eigenvalue -1 in H(n), -n/2 in the halved cube (plus 0 in H(n)), -k in J(n,k).
inline bool eigenfunction_check(const Trade& t) {
  const int n = t.length();
  switch (t.kind().kind) {
    case TradeKind::OnePerfect: return is_eigenfunction(t, Ambient::Hypercube, -1);
    case TradeKind::Extended:
      return is_eigenfunction(t, Ambient::HalvedCube, -n / 2) && is_eigenfunction(t, Ambient::Hypercube, 0);
    case TradeKind::Steiner: return is_eigenfunction(t, Ambient::Johnson, -t.kind().k);
  }
  return false;
}

/// Appends an overall parity bit.
inline Trade extend_parity(const Trade& t) {
  if (t.kind().kind != TradeKind::OnePerfect) throw TradeError("extend_parity needs a 1-perfect trade");
  if (!is_valid(t)) throw TradeError("extend_parity on an invalid trade");
  const int n = t.length();
  if (n + 1 > kMaxLength) throw TradeError("extended length exceeds the word limit");
  auto ext = [n](const WordSet& s) {
    std::vector<Mask> out;
    for (Mask w : s) out.push_back(w | (static_cast<Mask>(popcount(w) & 1) << n));
    return out;
  };
  return Trade(n + 1, KindSpec::extended(), ext(t.t0()), ext(t.t1()));
}

inline Mask delete_coordinate(Mask w, int i) {
  const Mask low = w & ((Mask{1} << i) - 1);
  const Mask high = (w >> (i + 1)) << i;
  return low | high;
}

inline Trade puncture(const Trade& t, int i) {
  if (t.kind().kind != TradeKind::Extended) throw TradeError("puncture needs an extended trade");
  const int n = t.length();
  if (i < 0 || i >= n) throw TradeError("puncture coordinate out of range");
  auto del = [i](const WordSet& s) {
    std::vector<Mask> out;
    for (Mask w : s) out.push_back(delete_coordinate(w, i));
    return out;
  };
  return Trade(n - 1, KindSpec::one_perfect(), del(t.t0()), del(t.t1()));
}

/// Reduced row echelon form with pivots at the leftmost coordinate
/// (lowest bit), rows sorted string-lexicographically.
inline std::vector<Mask> echelon_basis(std::vector<Mask> vecs) {
  std::vector<Mask> basis;
  for (Mask v : vecs) {
    for (Mask b : basis)
      if (v & (b & -b)) v ^= b;
    if (v == 0) continue;
    const Mask piv = v & -v;
    for (Mask& b : basis)
      if (b & piv) b ^= v;
    basis.push_back(v);
  }
  std::sort(basis.begin(), basis.end(), [](Mask a, Mask b) { return lex_less(a, b, kMaxLength); });
  return basis;
}

inline int gf2_rank(const std::vector<Mask>& vecs) { return static_cast<int>(echelon_basis(vecs).size()); }

inline WordSet span_of(const std::vector<Mask>& basis) {
  std::vector<Mask> out{0};
  for (Mask b : echelon_basis(basis)) {
    const std::size_t sz = out.size();
    for (std::size_t i = 0; i < sz; ++i) out.push_back(out[i] ^ b);
  }
  return make_word_set(std::move(out));
}

struct KernelDecomposition {
  std::vector<Mask> kernel_basis;  // echelon basis of K
  WordSet kernel;                  // all of K
  WordSet representatives;         // lexicographically least element of each coset
};

/// S = K + R with K = {x : S + x = S}.
inline KernelDecomposition kernel_decomposition(const WordSet& s, int n) {
  if (s.empty()) throw TradeError("kernel of an empty set");
  KernelDecomposition out;
  std::vector<Mask> kernel;
  for (Mask w : s) {
    const Mask x = w ^ s.front();
    bool ok = true;
    for (Mask y : s)
      if (!contains(s, y ^ x)) {
        ok = false;
        break;
      }
    if (ok) kernel.push_back(x);
  }
  out.kernel = make_word_set(kernel);
  out.kernel_basis = echelon_basis(kernel);
  std::vector<bool> used(s.size(), false);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (used[i]) continue;
    Mask best = s[i];
    for (Mask k : out.kernel) {
      const Mask y = s[i] ^ k;
      auto it = std::lower_bound(s.begin(), s.end(), y);
      used[it - s.begin()] = true;
      if (lex_less(y, best, n)) best = y;
    }
    out.representatives.push_back(best);
  }
  std::sort(out.representatives.begin(), out.representatives.end(),
            [n](Mask a, Mask b) { return lex_less(a, b, n); });
  return out;
}

/// Girth of the trade graph; nullopt when the graph is acyclic.
inline std::optional<int> girth(const Trade& t) {
  const auto adj = trade_graph(t);
  const int m = static_cast<int>(adj.size());
  int best = -1;
  std::vector<int> dist(m);
  std::vector<int> parent(m);
  for (int root = 0; root < m; ++root) {
    std::fill(dist.begin(), dist.end(), -1);
    std::queue<int> q;
    dist[root] = 0;
    parent[root] = -1;
    q.push(root);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      if (best > 0 && 2 * dist[u] + 1 >= best) break;
      for (int v : adj[u]) {
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          parent[v] = u;
          q.push(v);
        } else if (parent[u] != v) {
          int len = dist[u] + dist[v] + 1;
          if (best < 0 || len < best) best = len;
        }
      }
    }
  }
  if (best < 0) return std::nullopt;
  return best;
}

// --- text format -----------------------------------------------------------

inline std::string format_word_set(const WordSet& s, int n) {
  std::string out;
  for (Mask w : s) {
    out += detail::word_str(w, n);
    out += '\n';
  }
  return out;
}

inline std::string format_trade(const Trade& t) {
  std::ostringstream os;
  os << "trade n=" << t.length() << " kind=" << t.kind().str() << " vol=" << t.volume() << '\n';
  os << format_word_set(t.t0(), t.length()) << "---\n" << format_word_set(t.t1(), t.length());
  return os.str();
}

inline std::string format_kway(const KWayTrade& t) {
  std::ostringstream os;
  os << "trade n=" << t.length() << " kind=" << t.kind().str() << " vol=" << t.parts().front().size() << '\n';
  for (int i = 0; i < t.ways(); ++i) {
    if (i) os << "---\n";
    os << format_word_set(t.parts()[i], t.length());
  }
  return os.str();
}

struct TradeHeader {
  int n = 0;
  KindSpec kind;
  std::size_t volume = 0;
};

inline TradeHeader parse_trade_header(const std::string& line) {
  std::istringstream is(line);
  std::string tag;
  is >> tag;
  if (tag != "trade") throw TradeError("expected 'trade' header, got: " + line);
  TradeHeader h;
  bool have_n = false, have_kind = false, have_vol = false;
  std::string field;
  while (is >> field) {
    auto eq = field.find('=');
    if (eq == std::string::npos) throw TradeError("malformed header field: " + field);
    const std::string key = field.substr(0, eq);
    const std::string val = field.substr(eq + 1);
    if (key == "n") {
      h.n = std::stoi(val);
      have_n = true;
    } else if (key == "kind") {
      h.kind = KindSpec::parse(val);
      have_kind = true;
    } else if (key == "vol") {
      h.volume = std::stoul(val);
      have_vol = true;
    }
  }
  if (!have_n || !have_kind || !have_vol) throw TradeError("incomplete trade header: " + line);
  return h;
}

namespace detail {
inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}
}  // namespace detail

/// Reads one trade record (header, parts separated by "---") from a stream of
/// lines. Blank lines and '#' comments before the header are skipped. Returns
/// nullopt at end of input. Lines that follow the parts and are not words
/// (e.g. "mult: 3") are handed back through `extra`.
inline std::optional<KWayTrade> read_kway(std::istream& in, std::vector<std::string>* extra = nullptr) {
  std::string line;
  while (std::getline(in, line)) {
    line = detail::trim(line);
    if (line.empty() || line[0] == '#') continue;
    break;
  }
  if (line.empty() || line[0] == '#') return std::nullopt;
  const TradeHeader h = parse_trade_header(line);
  std::vector<WordSet> parts(1);
  std::vector<std::vector<Mask>> raw(1);
  std::streampos pos = in.tellg();
  while (true) {
    pos = in.tellg();
    if (!std::getline(in, line)) break;
    std::string t = detail::trim(line);
    if (t.empty()) break;
    if (t == "---") {
      raw.emplace_back();
      continue;
    }
    if (t.rfind("trade", 0) == 0) {
      in.seekg(pos);
      break;
    }
    if (t.find(':') != std::string::npos) {
      if (extra) extra->push_back(t);
      continue;
    }
    Word w = Word::parse(t);
    if (w.length() != h.n) throw TradeError("word length " + std::to_string(w.length()) + " != n in: " + t);
    raw.back().push_back(w.bits());
  }
  parts.clear();
  for (auto& r : raw) parts.push_back(make_word_set(std::move(r)));
  if (parts.size() < 2) throw TradeError("trade record has fewer than two parts");
  for (const auto& p : parts)
    if (p.size() != h.volume) throw TradeError("part size does not match vol= in header");
  return KWayTrade(h.n, h.kind, std::move(parts));
}

inline std::optional<Trade> read_trade(std::istream& in, std::vector<std::string>* extra = nullptr) {
  auto k = read_kway(in, extra);
  if (!k) return std::nullopt;
  if (k->ways() != 2) throw TradeError("expected a 2-way trade record");
  return k->pair(0, 1);
}

inline Trade parse_trade(const std::string& text) {
  std::istringstream is(text);
  auto t = read_trade(is);
  if (!t) throw TradeError("no trade record in text");
  return *t;
}

inline std::vector<Trade> read_all_trades(std::istream& in) {
  std::vector<Trade> out;
  while (auto t = read_trade(in)) out.push_back(std::move(*t));
  return out;
}

}  // namespace xtrade
