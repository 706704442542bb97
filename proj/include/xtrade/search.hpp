// Exhaustive classification of extended 1-perfect trades by neighbourhood
// completion, with isomorph rejection at checkpoint depths.

#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "xtrade/canonical.hpp"
#include "xtrade/perm_group.hpp"
#include "xtrade/trade.hpp"
#include "xtrade/word.hpp"

namespace xtrade {

struct SearchConfig {
  int n = 10;
  bool constant_weight = false;
  std::optional<WordSet> restrict_t0_to;
  std::vector<int> checkpoint_depths;
  int workers = 1;
  std::string checkpoint_path;  // written after every checkpoint stage when set
  // Zero position i of the anchor is matched with one position seed_matching[i]
  // (constant-weight seeds only; empty means the identity matching).
  std::vector<int> seed_matching;

  static SearchConfig defaults(int n, bool constant_weight) {
    SearchConfig c;
    c.n = n;
    c.constant_weight = constant_weight;
    if (constant_weight && n == 12) c.checkpoint_depths = {3, 6};
    return c;
  }

  void validate() const {
    if (n % 2 != 0) throw TradeError("search length must be even");
    if (n < 4 || n > 12) throw TradeError("search length must be in 4..12");
    if (constant_weight && !(n == 8 || n == 12)) throw TradeError("constant-weight search supports n = 8 and n = 12 only");
    if (restrict_t0_to && !constant_weight) throw TradeError("restricted search needs constant-weight mode");
    if (restrict_t0_to && !checkpoint_depths.empty()) throw TradeError("restricted search does not use checkpoints");
    for (int d : checkpoint_depths)
      if (d < 1) throw TradeError("checkpoint depths must be positive");
    if (workers < 1) throw TradeError("worker count must be positive");
  }

  /// Equivalence used for isomorph rejection and final classes.
  Equivalence equivalence() const { return constant_weight ? Equivalence::Johnson : Equivalence::Translations; }
};

struct PartialState {
  int n = 0;
  WordSet t0, t1;
  WordSet frontier0, frontier1;
  std::uint64_t multiplicity = 1;
  int depth = 0;  // number of frontier expansions so far
  int step = 1;   // part whose frontier is being expanded

  const WordSet& frontier(int i) const { return i == 0 ? frontier0 : frontier1; }
};

struct ClassRecord {
  Trade trade;
  CanonicalForm form;
  std::size_t volume = 0;
  std::uint64_t raw_count = 0;
  std::uint64_t weighted_count = 0;
};

struct StageStats {
  int depth = 0;
  std::uint64_t states_in = 0;
  std::uint64_t states_out = 0;  // partial states reaching the boundary, before merging
  std::uint64_t merged = 0;      // distinct states kept after merging
};

struct ClassificationResult {
  int n = 0;
  bool constant_weight = false;
  std::vector<ClassRecord> classes;
  std::uint64_t raw_solution_count = 0;
  std::uint64_t weighted_solution_count = 0;
  std::uint64_t nodes = 0;
  std::vector<StageStats> stages;
  bool checkpoints_active = false;
};

namespace detail {

inline std::vector<Mask> adjacent_pair_words(int n) {
  std::vector<Mask> v;
  for (int i = 0; i < n / 2; ++i) v.push_back(Mask{3} << (2 * i));
  return v;
}

}  // namespace detail

inline PartialState seed_state(const SearchConfig& cfg) {
  cfg.validate();
  const int n = cfg.n;
  const Mask ones = full_mask(n);
  PartialState s;
  s.n = n;
  s.step = 1;
  std::vector<Mask> t0, t1, fr;
  if (!cfg.constant_weight) {
    const auto v = detail::adjacent_pair_words(n);
    t0.push_back(0);
    if (n % 4 == 2) {
      t1.push_back(ones);
      for (Mask x : v) {
        t1.push_back(x);
        t0.push_back(x ^ ones);
      }
    } else {
      t0.push_back(ones);
      for (Mask x : v) {
        t1.push_back(x);
        t1.push_back(x ^ ones);
      }
    }
    fr = v;
  } else {
    const int h = n / 2;
    const Mask a = ones & ~full_mask(h);  // 0^h 1^h
    std::vector<int> m = cfg.seed_matching;
    if (m.empty())
      for (int i = 0; i < h; ++i) m.push_back(h + i);
    if (static_cast<int>(m.size()) != h) throw TradeError("seed matching has wrong size");
    t0 = {a, a ^ ones};
    Mask used = 0;
    for (int i = 0; i < h; ++i) {
      if (m[i] < h || m[i] >= n || ((used >> m[i]) & 1U)) throw TradeError("seed matching is not a bijection");
      used |= Mask{1} << m[i];
      const Mask x = a ^ (Mask{1} << i) ^ (Mask{1} << m[i]);
      t1.push_back(x);
      t1.push_back(x ^ ones);
      fr.push_back(x);
    }
  }
  s.t0 = make_word_set(t0);
  s.t1 = make_word_set(t1);
  s.frontier1 = make_word_set(fr);
  return s;
}

namespace detail {

/// Depth-first completion from one partial state.
class Explorer {
 public:
  Explorer(const SearchConfig& cfg, const std::vector<std::uint8_t>* allowed_t0)
      : n_(cfg.n),
        ones_(full_mask(cfg.n)),
        cw_(cfg.constant_weight),
        same_part_complement_(cfg.n % 4 == 0),
        allowed_t0_(allowed_t0) {
    const std::size_t size = std::size_t{1} << n_;
    part_.assign(size, -1);
    adj_[0].assign(size, 0);
    adj_[1].assign(size, 0);
    frontier_[0].assign((size + 63) / 64, 0);
    frontier_[1].assign((size + 63) / 64, 0);
    pairs_ = pair_masks(n_);
  }

  void load(const PartialState& s) {
    std::fill(part_.begin(), part_.end(), static_cast<std::int8_t>(-1));
    std::fill(adj_[0].begin(), adj_[0].end(), 0);
    std::fill(adj_[1].begin(), adj_[1].end(), 0);
    for (int i = 0; i < 2; ++i) {
      std::fill(frontier_[i].begin(), frontier_[i].end(), 0);
      fcount_[i] = 0;
    }
    trail_.clear();
    for (Mask w : s.t0) place(w, 0);
    for (Mask w : s.t1) place(w, 1);
    trail_.clear();
    for (Mask w : s.frontier0) push_frontier(0, w);
    for (Mask w : s.frontier1) push_frontier(1, w);
    depth_ = s.depth;
    step_ = s.step;
    mult_ = s.multiplicity;
  }

  using SolutionFn = std::function<void(const WordSet&, const WordSet&, std::uint64_t)>;
  using PartialFn = std::function<void(PartialState&&)>;

  /// Explores the subtree; states that reach `stop_depth` expansions with work
  /// left are handed to `on_partial` instead of being expanded.
  void run(int stop_depth, const SolutionFn& on_solution, const PartialFn& on_partial) {
    stop_depth_ = stop_depth;
    on_solution_ = &on_solution;
    on_partial_ = &on_partial;
    recurse();
  }

  std::uint64_t nodes() const { return nodes_; }

 private:
  int n_;
  Mask ones_;
  bool cw_;
  bool same_part_complement_;
  const std::vector<std::uint8_t>* allowed_t0_;
  std::vector<std::int8_t> part_;
  std::vector<std::uint8_t> adj_[2];
  std::vector<std::uint64_t> frontier_[2];
  std::size_t fcount_[2] = {0, 0};
  std::vector<Mask> pairs_;
  std::vector<Mask> trail_;
  int depth_ = 0;
  int step_ = 1;
  std::uint64_t mult_ = 1;
  int stop_depth_ = -1;
  std::uint64_t nodes_ = 0;
  const SolutionFn* on_solution_ = nullptr;
  const PartialFn* on_partial_ = nullptr;

  void place(Mask w, int p) {
    part_[w] = static_cast<std::int8_t>(p);
    for (Mask e : pairs_) adj_[p][w ^ e]++;
    trail_.push_back(w);
  }

  void unplace(Mask w) {
    const int p = part_[w];
    part_[w] = -1;
    for (Mask e : pairs_) adj_[p][w ^ e]--;
  }

  void push_frontier(int p, Mask w) {
    auto& word = frontier_[p][w >> 6];
    const std::uint64_t bit = std::uint64_t{1} << (w & 63);
    if (!(word & bit)) {
      word |= bit;
      fcount_[p]++;
    }
  }

  void drop_frontier(int p, Mask w) {
    auto& word = frontier_[p][w >> 6];
    const std::uint64_t bit = std::uint64_t{1} << (w & 63);
    if (word & bit) {
      word &= ~bit;
      fcount_[p]--;
    }
  }

  Mask min_frontier(int p) const {
    for (std::size_t k = 0; k < frontier_[p].size(); ++k)
      if (frontier_[p][k]) return static_cast<Mask>(k * 64 + std::countr_zero(frontier_[p][k]));
    return 0;
  }

  WordSet frontier_list(int p) const {
    WordSet out;
    for (std::size_t k = 0; k < frontier_[p].size(); ++k)
      for (std::uint64_t b = frontier_[p][k]; b; b &= b - 1)
        out.push_back(static_cast<Mask>(k * 64 + std::countr_zero(b)));
    return out;
  }

  WordSet part_list(int p) const {
    WordSet out;
    for (Mask w = 0; w < static_cast<Mask>(part_.size()); ++w)
      if (part_[w] == p) out.push_back(w);
    return out;
  }

  bool may_join(Mask w, int p) const {
    if (part_[w] == p) return true;
    if (part_[w] != -1 || adj_[p][w] != 0) return false;
    if (p == 0 && allowed_t0_ && !(*allowed_t0_)[w]) return false;
    return true;
  }

  // x joins part j; its complement joins j (n = 0 mod 4) or i (n = 2 mod 4).
  bool candidate(Mask x, int i, int j) const {
    if (part_[x] == j) return true;
    if (!may_join(x, j)) return false;
    return may_join(x ^ ones_, same_part_complement_ ? j : i);
  }

  void matchings(Mask v, int i, int j, Mask free, std::vector<Mask>& cur, std::vector<std::vector<Mask>>& out) const {
    if (free == 0) {
      std::vector<Mask> n = cur;
      std::sort(n.begin(), n.end());
      out.push_back(std::move(n));
      return;
    }
    const int c = std::countr_zero(free);
    const Mask rest = free & (free - 1);
    for (Mask r = rest; r; r &= r - 1) {
      const int d = std::countr_zero(r);
      if (cw_ && (((v >> c) ^ (v >> d)) & 1U) == 0) continue;
      const Mask x = v ^ (Mask{1} << c) ^ (Mask{1} << d);
      if (!candidate(x, i, j)) continue;
      cur.push_back(x);
      matchings(v, i, j, rest & ~(Mask{1} << d), cur, out);
      cur.pop_back();
    }
  }

  bool add_checked(Mask w, int p) {
    if (part_[w] == p) return true;
    if (part_[w] != -1 || adj_[p][w] != 0) return false;
    if (p == 0 && allowed_t0_ && !(*allowed_t0_)[w]) return false;
    place(w, p);
    return true;
  }

  void recurse() {
    ++nodes_;
    if (fcount_[0] == 0 && fcount_[1] == 0) {
      (*on_solution_)(part_list(0), part_list(1), mult_);
      return;
    }
    if (depth_ == stop_depth_) {
      PartialState s;
      s.n = n_;
      s.t0 = part_list(0);
      s.t1 = part_list(1);
      s.frontier0 = frontier_list(0);
      s.frontier1 = frontier_list(1);
      s.multiplicity = mult_;
      s.depth = depth_;
      s.step = step_;
      (*on_partial_)(std::move(s));
      return;
    }
    const int saved_step = step_;
    int i = step_;
    if (fcount_[i] == 0) i = 1 - i;
    step_ = i;
    const int j = 1 - i;
    const Mask v = min_frontier(i);
    drop_frontier(i, v);

    std::vector<std::vector<Mask>> options;
    std::vector<Mask> cur;
    matchings(v, i, j, ones_, cur, options);
    std::sort(options.begin(), options.end());

    for (const auto& nbrs : options) {
      const std::size_t mark = trail_.size();
      std::vector<Mask> fresh;
      bool ok = true;
      for (Mask x : nbrs) {
        if (part_[x] == j) continue;
        if (!add_checked(x, j)) {
          ok = false;
          break;
        }
        fresh.push_back(x);
        if (!add_checked(x ^ ones_, same_part_complement_ ? j : i)) {
          ok = false;
          break;
        }
      }
      if (ok) {
        for (Mask x : fresh) push_frontier(j, x);
        ++depth_;
        recurse();
        --depth_;
        for (Mask x : fresh) drop_frontier(j, x);
      }
      while (trail_.size() > mark) {
        unplace(trail_.back());
        trail_.pop_back();
      }
    }
    push_frontier(i, v);
    step_ = saved_step;
  }
};

struct SolutionTally {
  std::uint64_t raw = 0;
  std::uint64_t weighted = 0;
};

// Per-work-item output, merged in item order.
struct ItemOutput {
  std::vector<std::pair<Encoding, PartialState>> partials;  // keyed when merging, unkeyed otherwise
  std::map<Encoding, SolutionTally> solutions;
  std::uint64_t nodes = 0;
  std::uint64_t partial_count = 0;
};

inline Encoding class_key(int n, const WordSet& t0, const WordSet& t1, Equivalence eq) {
  return canonical_pair(n, t0, t1, eq, true, false).key;
}

inline Trade trade_from_key(const Encoding& e, KindSpec kind) {
  const int n = e[0];
  const std::size_t a = e[1];
  std::vector<Mask> p0(e.begin() + 2, e.begin() + 2 + static_cast<std::ptrdiff_t>(a));
  std::vector<Mask> p1(e.begin() + 2 + static_cast<std::ptrdiff_t>(a), e.end());
  return Trade(n, kind, std::move(p0), std::move(p1));
}

inline int default_workers() {
  if (const char* env = std::getenv("XTRADE_WORKERS")) {
    int w = std::atoi(env);
    if (w > 0) return w;
  }
  return 1;
}

template <class Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const int w = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), count));
  for (int t = 0; t < w; ++t)
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < count; k = next++) fn(k);
    });
  for (auto& th : pool) th.join();
}

}  // namespace detail

// --- checkpoint files --------------------------------------------------------

namespace detail {

inline void write_words_line(std::ostream& os, const char* tag, const WordSet& s, int n) {
  os << tag;
  for (Mask w : s) os << ' ' << Word(w, n).str();
  os << '\n';
}

inline WordSet parse_words_line(const std::string& rest, int n) {
  std::istringstream is(rest);
  std::string tok;
  std::vector<Mask> out;
  while (is >> tok) {
    Word w = Word::parse(tok);
    if (w.length() != n) throw TradeError("checkpoint word has wrong length");
    out.push_back(w.bits());
  }
  return make_word_set(std::move(out));
}

}  // namespace detail

struct CheckpointData {
  int n = 0;
  bool constant_weight = false;
  int depth = 0;
  std::vector<PartialState> states;
  std::map<Encoding, detail::SolutionTally> solutions;
  std::uint64_t nodes = 0;
};

inline void write_checkpoint(std::ostream& os, const CheckpointData& c) {
  os << "checkpoint n=" << c.n << " cw=" << (c.constant_weight ? 1 : 0) << " depth=" << c.depth
     << " states=" << c.states.size() << " classes=" << c.solutions.size() << " nodes=" << c.nodes << '\n';
  for (const auto& [key, tally] : c.solutions) {
    Trade t = detail::trade_from_key(key, KindSpec::extended());
    os << "solution raw=" << tally.raw << " weighted=" << tally.weighted << '\n' << format_trade(t) << '\n';
  }
  for (const auto& s : c.states) {
    os << "partial n=" << s.n << " depth=" << s.depth << " step=" << s.step << '\n';
    os << format_word_set(s.t0, s.n) << "---\n" << format_word_set(s.t1, s.n);
    detail::write_words_line(os, "frontier0:", s.frontier0, s.n);
    detail::write_words_line(os, "frontier1:", s.frontier1, s.n);
    os << "mult: " << s.multiplicity << "\n\n";
  }
}

inline CheckpointData read_checkpoint(std::istream& in, Equivalence eq) {
  CheckpointData c;
  std::string line;
  if (!std::getline(in, line)) throw TradeError("empty checkpoint file");
  {
    std::istringstream is(line);
    std::string tag, field;
    is >> tag;
    if (tag != "checkpoint") throw TradeError("not a checkpoint file");
    while (is >> field) {
      auto eqp = field.find('=');
      if (eqp == std::string::npos) continue;
      const std::string k = field.substr(0, eqp);
      const std::string v = field.substr(eqp + 1);
      if (k == "n") c.n = std::stoi(v);
      else if (k == "cw") c.constant_weight = v == "1";
      else if (k == "depth") c.depth = std::stoi(v);
      else if (k == "nodes") c.nodes = std::stoull(v);
    }
  }
  while (std::getline(in, line)) {
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.rfind("solution", 0) == 0) {
      detail::SolutionTally tally;
      std::istringstream is(line);
      std::string tag, field;
      is >> tag;
      while (is >> field) {
        auto eqp = field.find('=');
        if (field.substr(0, eqp) == "raw") tally.raw = std::stoull(field.substr(eqp + 1));
        if (field.substr(0, eqp) == "weighted") tally.weighted = std::stoull(field.substr(eqp + 1));
      }
      auto t = read_trade(in);
      if (!t) throw TradeError("truncated checkpoint solution");
      c.solutions[canonical_pair(t->length(), t->t0(), t->t1(), eq, true, false).key] = tally;
    } else if (line.rfind("partial", 0) == 0) {
      PartialState s;
      std::istringstream is(line);
      std::string tag, field;
      is >> tag;
      while (is >> field) {
        auto eqp = field.find('=');
        const std::string k = field.substr(0, eqp);
        const int v = std::stoi(field.substr(eqp + 1));
        if (k == "n") s.n = v;
        else if (k == "depth") s.depth = v;
        else if (k == "step") s.step = v;
      }
      std::vector<Mask> parts[2];
      int p = 0;
      while (std::getline(in, line)) {
        line = detail::trim(line);
        if (line.empty()) break;
        if (line == "---") {
          p = 1;
        } else if (line.rfind("frontier0:", 0) == 0) {
          s.frontier0 = detail::parse_words_line(line.substr(10), s.n);
        } else if (line.rfind("frontier1:", 0) == 0) {
          s.frontier1 = detail::parse_words_line(line.substr(10), s.n);
        } else if (line.rfind("mult:", 0) == 0) {
          s.multiplicity = std::stoull(line.substr(5));
        } else {
          parts[p].push_back(Word::parse(line).bits());
        }
      }
      s.t0 = make_word_set(std::move(parts[0]));
      s.t1 = make_word_set(std::move(parts[1]));
      c.states.push_back(std::move(s));
    } else {
      throw TradeError("unexpected checkpoint line: " + line);
    }
  }
  return c;
}

// --- driver ------------------------------------------------------------------

namespace detail {

inline std::vector<std::uint8_t> allowed_table(const SearchConfig& cfg) {
  std::vector<std::uint8_t> t;
  if (!cfg.restrict_t0_to) return t;
  t.assign(std::size_t{1} << cfg.n, 0);
  for (Mask w : *cfg.restrict_t0_to) t[w] = 1;
  return t;
}

}  // namespace detail

/// Continues a search from `work` (states at depth `start_depth`) with
/// previously recorded solutions.
inline ClassificationResult classify_from(const SearchConfig& cfg, std::vector<PartialState> work, int start_depth,
                                          std::map<Encoding, detail::SolutionTally> solutions,
                                          std::uint64_t nodes = 0) {
  cfg.validate();
  const Equivalence eq = cfg.equivalence();
  const auto allowed = detail::allowed_table(cfg);
  const std::vector<std::uint8_t>* allowed_ptr = allowed.empty() ? nullptr : &allowed;

  // Stage boundaries: checkpoints merge equivalent states; depth 1 only
  // splits the tree into independent work items.
  std::vector<int> cps;
  for (int d : cfg.checkpoint_depths)
    if (d > start_depth) cps.push_back(d);
  std::sort(cps.begin(), cps.end());
  cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
  std::vector<std::pair<int, bool>> bounds;  // (depth, merge)
  if (start_depth == 0 && (cps.empty() || cps.front() != 1)) bounds.emplace_back(1, false);
  for (int d : cps) bounds.emplace_back(d, true);
  bounds.emplace_back(-1, false);

  ClassificationResult res;
  res.n = cfg.n;
  res.constant_weight = cfg.constant_weight;
  res.checkpoints_active = !cfg.checkpoint_depths.empty();
  res.nodes = nodes;

  for (const auto& [stop, merge] : bounds) {
    StageStats st;
    st.depth = stop;
    st.states_in = work.size();
    std::vector<detail::ItemOutput> outs(work.size());
    detail::parallel_for(work.size(), cfg.workers, [&](std::size_t k) {
      detail::Explorer ex(cfg, allowed_ptr);
      ex.load(work[k]);
      auto& out = outs[k];
      std::map<Encoding, std::size_t> local;
      ex.run(
          stop,
          [&](const WordSet& t0, const WordSet& t1, std::uint64_t mult) {
            auto& tally = out.solutions[detail::class_key(cfg.n, t0, t1, eq)];
            tally.raw += 1;
            tally.weighted += mult;
          },
          [&](PartialState&& s) {
            ++out.partial_count;
            if (!merge) {
              out.partials.emplace_back(Encoding{}, std::move(s));
              return;
            }
            Encoding key = detail::class_key(cfg.n, s.t0, s.t1, eq);
            auto it = local.find(key);
            if (it != local.end()) {
              out.partials[it->second].second.multiplicity += s.multiplicity;
            } else {
              local.emplace(key, out.partials.size());
              out.partials.emplace_back(std::move(key), std::move(s));
            }
          });
      out.nodes = ex.nodes();
    });

    std::vector<PartialState> next;
    std::map<Encoding, std::size_t> seen;
    for (auto& out : outs) {
      res.nodes += out.nodes;
      st.states_out += out.partial_count;
      for (const auto& [key, tally] : out.solutions) {
        auto& t = solutions[key];
        t.raw += tally.raw;
        t.weighted += tally.weighted;
      }
      for (auto& [key, s] : out.partials) {
        if (!merge) {
          next.push_back(std::move(s));
          continue;
        }
        auto it = seen.find(key);
        if (it != seen.end()) {
          next[it->second].multiplicity += s.multiplicity;
        } else {
          seen.emplace(key, next.size());
          next.push_back(std::move(s));
        }
      }
    }
    st.merged = next.size();
    res.stages.push_back(st);
    work = std::move(next);
    if (merge && !cfg.checkpoint_path.empty()) {
      CheckpointData cd;
      cd.n = cfg.n;
      cd.constant_weight = cfg.constant_weight;
      cd.depth = stop;
      cd.states = work;
      cd.solutions = solutions;
      cd.nodes = res.nodes;
      std::ofstream f(cfg.checkpoint_path);
      if (!f) throw TradeError("cannot write checkpoint file " + cfg.checkpoint_path);
      write_checkpoint(f, cd);
    }
  }

  for (const auto& [key, tally] : solutions) {
    ClassRecord r{detail::trade_from_key(key, KindSpec::extended()), CanonicalForm::from_encoding(key), 0, tally.raw,
                  tally.weighted};
    r.volume = r.trade.volume();
    res.raw_solution_count += tally.raw;
    res.weighted_solution_count += tally.weighted;
    res.classes.push_back(std::move(r));
  }
  std::sort(res.classes.begin(), res.classes.end(), [](const ClassRecord& a, const ClassRecord& b) {
    if (a.volume != b.volume) return a.volume < b.volume;
    return a.form < b.form;
  });
  return res;
}

inline ClassificationResult classify(const SearchConfig& cfg) {
  cfg.validate();
  PartialState seed = seed_state(cfg);
  if (cfg.restrict_t0_to) {
    for (Mask w : seed.t0)
      if (!contains(*cfg.restrict_t0_to, w)) {
        ClassificationResult empty;
        empty.n = cfg.n;
        empty.constant_weight = cfg.constant_weight;
        return empty;
      }
  }
  return classify_from(cfg, {seed}, 0, {});
}

/// Classes of trades whose T0 lies in cfg.restrict_t0_to. Every T0 word can
/// serve as the anchor, so the seed is tried for one anchor per orbit of the
/// restriction set's coordinate group and for each matching up to the
/// anchor's stabilizer.
inline ClassificationResult classify_restricted(const SearchConfig& cfg) {
  cfg.validate();
  if (!cfg.restrict_t0_to) throw TradeError("classify_restricted needs a restriction set");
  const int n = cfg.n;
  const int h = n / 2;
  const Mask ones = full_mask(n);
  WordSet w;
  for (Mask x : *cfg.restrict_t0_to)
    if (popcount(x) == h && contains(*cfg.restrict_t0_to, x ^ ones)) w.push_back(x);

  ClassificationResult res;
  res.n = n;
  res.constant_weight = true;
  if (w.empty()) return res;

  const std::vector<WordSet> parts{w};
  const PermGroup group(n, perm_canonical(n, parts).automorphisms);
  std::vector<Perm> elems;
  if (group.order() <= 1'000'000) elems = group.elements();

  std::map<Mask, bool> done;
  std::map<Encoding, ClassRecord> merged;
  for (Mask a : w) {
    if (done[a]) continue;
    std::vector<Mask> stack{a};
    done[a] = true;
    while (!stack.empty()) {
      Mask x = stack.back();
      stack.pop_back();
      for (const auto& g : group.generators()) {
        Mask y = g.apply(x);
        if (!done[y]) {
          done[y] = true;
          stack.push_back(y);
        }
      }
    }

    // sigma sends the zeros of a to 0..h-1 and its ones to h..n-1.
    Perm sigma = Perm::identity(n);
    int z = 0, o = h;
    for (int c = 0; c < n; ++c) sigma.p[c] = static_cast<std::uint8_t>(((a >> c) & 1U) ? o++ : z++);
    const Perm sigma_inv = sigma.inverse();
    std::vector<Perm> stab;
    for (const auto& g : elems)
      if (g.apply(a) == a) stab.push_back(sigma * g * sigma_inv);
    std::vector<Mask> relabelled;
    for (Mask x : w) relabelled.push_back(sigma.apply(x));

    std::vector<int> m(h);
    std::iota(m.begin(), m.end(), h);
    std::map<std::vector<int>, bool> seen;
    do {
      if (seen[m]) continue;
      for (const auto& g : stab) {
        std::vector<int> img(h);
        for (int i = 0; i < h; ++i) img[g[i]] = g[m[i]];
        seen[img] = true;
      }
      SearchConfig sub = cfg;
      sub.restrict_t0_to = make_word_set(relabelled);
      sub.seed_matching = m;
      const PartialState seed = seed_state(sub);
      ClassificationResult r = classify_from(sub, {seed}, 0, {});
      res.nodes += r.nodes;
      res.raw_solution_count += r.raw_solution_count;
      res.weighted_solution_count += r.weighted_solution_count;
      for (auto& c : r.classes) {
        auto [it, fresh] = merged.emplace(c.form.encoding(), c);
        if (!fresh) {
          it->second.raw_count += c.raw_count;
          it->second.weighted_count += c.weighted_count;
        }
      }
    } while (std::next_permutation(m.begin(), m.end()));
  }
  for (auto& [key, c] : merged) res.classes.push_back(std::move(c));
  std::sort(res.classes.begin(), res.classes.end(), [](const ClassRecord& x, const ClassRecord& y) {
    if (x.volume != y.volume) return x.volume < y.volume;
    return x.form < y.form;
  });
  return res;
}

inline ClassificationResult resume(const SearchConfig& cfg, std::istream& checkpoint) {
  CheckpointData cd = read_checkpoint(checkpoint, cfg.equivalence());
  if (cd.n != cfg.n || cd.constant_weight != cfg.constant_weight)
    throw TradeError("checkpoint does not match the search configuration");
  ClassificationResult r = classify_from(cfg, std::move(cd.states), cd.depth, std::move(cd.solutions), cd.nodes);
  r.checkpoints_active = true;
  return r;
}

struct DoubleCount {
  std::uint64_t expected = 0;
  std::uint64_t observed = 0;
  bool ok = false;
};

inline std::uint64_t factorial(int k) {
  std::uint64_t f = 1;
  for (int i = 2; i <= k; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

/// Labelled solutions implied by the class list: for each class,
/// |T0 u T1| times the number of ways to carry a word's neighbourhood onto the
/// seed, divided by |Aut|.
inline DoubleCount double_count_validate(const ClassificationResult& r, const SearchConfig& cfg) {
  if (cfg.restrict_t0_to) throw TradeError("double counting does not apply to restricted searches");
  DoubleCount dc;
  const int h = cfg.n / 2;
  const std::uint64_t placements = cfg.constant_weight ? factorial(h) * 2 : factorial(h) * (std::uint64_t{1} << h);
  for (const auto& c : r.classes) {
    const std::uint64_t aut = automorphisms(c.trade, cfg.equivalence()).order;
    const std::uint64_t num = 2 * c.volume * placements;
    if (aut == 0 || num % aut != 0)
      throw TradeError("non-integer labelled count for a class: automorphism order " + std::to_string(aut));
    dc.expected += num / aut;
  }
  dc.observed = r.checkpoints_active ? r.weighted_solution_count : r.raw_solution_count;
  dc.ok = dc.expected == dc.observed;
  return dc;
}

}  // namespace xtrade
