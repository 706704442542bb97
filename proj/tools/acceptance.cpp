// Acceptance checks. Usage: acceptance [criterion ...]; with no arguments all
// criteria except the long length-12 run (3) are checked. One line per
// criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "xtrade/analysis.hpp"
#include "xtrade/canonical.hpp"
#include "xtrade/constructions.hpp"
#include "xtrade/fixtures.hpp"
#include "xtrade/report.hpp"
#include "xtrade/search.hpp"
#include "xtrade/trade.hpp"

using namespace xtrade;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;  // failed sub-checks
  std::string summary;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back(what);
    }
  }
};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : sep) + x;
  return s;
}

template <class T>
std::string list(const std::vector<T>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

int env_workers() {
  if (const char* e = std::getenv("XTRADE_WORKERS"); e && *e) return std::max(1, std::atoi(e));
  return std::max(1u, std::thread::hardware_concurrency());
}

ClassificationResult run_classify(int n, bool cw, int workers, std::vector<int> checkpoints = {}) {
  SearchConfig c = SearchConfig::defaults(n, cw);
  c.workers = workers;
  if (!checkpoints.empty()) c.checkpoint_depths = checkpoints;
  return classify(c);
}

/// Fixture id for every class, "?" when none matches.
std::vector<std::string> match_fixtures(const ClassificationResult& r, const std::string& file, Equivalence eq) {
  std::vector<std::string> ids;
  const auto fx = trade_fixtures(file);
  for (const auto& c : r.classes) {
    std::string id = "?";
    for (const auto& f : fx)
      if (f.trade->volume() == c.volume && are_equivalent(*f.trade, c.trade, eq)) {
        id = f.id;
        break;
      }
    ids.push_back(id);
  }
  return ids;
}

std::vector<std::size_t> volumes(const ClassificationResult& r) {
  std::vector<std::size_t> v;
  for (const auto& c : r.classes) v.push_back(c.volume);
  return v;
}

// --- 1 ------------------------------------------------------------------------

Outcome criterion1() {
  Outcome o;
  const auto t = Clock::now();
  const auto r = run_classify(8, false, 1);
  const double secs = since(t);
  o.check(r.classes.size() == 5, "classes " + std::to_string(r.classes.size()));
  o.check(volumes(r) == std::vector<std::size_t>{8, 12, 14, 16, 16}, "volumes " + list(volumes(r)));
  std::multiset<std::size_t> duals;
  for (const auto& c : r.classes)
    if (c.volume == 16) duals.insert(dual_space(c.trade.support(), 8).members.size());
  o.check(duals == std::multiset<std::size_t>{2, 4}, "volume-16 dual sizes");
  o.check(secs < 10, "runtime " + std::to_string(secs) + " s");
  std::ostringstream s;
  s << "classes=" << r.classes.size() << " volumes=" << list(volumes(r)) << " vol16-duals=2,4 time=" << secs << "s";
  o.summary = s.str();
  return o;
}

// --- 2 ------------------------------------------------------------------------

Outcome criterion2() {
  Outcome o;
  const auto t = Clock::now();
  const auto r = run_classify(10, false, 1);
  const double secs = since(t);
  o.check(r.classes.size() == 8, "classes " + std::to_string(r.classes.size()));
  o.check(volumes(r) == std::vector<std::size_t>{16, 24, 28, 32, 32, 32, 36, 40}, "volumes " + list(volumes(r)));
  o.check(r.raw_solution_count == 1817, "raw " + std::to_string(r.raw_solution_count));
  const auto ids = match_fixtures(r, "length10.txt", Equivalence::Translations);
  std::set<std::string> distinct(ids.begin(), ids.end());
  o.check(distinct.size() == 8 && !distinct.count("?"), "fixture matching " + join(ids, ","));
  std::size_t orbit_total = 0;
  std::vector<std::string> per_class;
  for (std::size_t i = 0; i < r.classes.size(); ++i) {
    const auto a = automorphisms(r.classes[i].trade, Equivalence::Translations);
    orbit_total += a.coordinate_orbits.size();
    per_class.push_back(ids[i] + ":" + std::to_string(a.coordinate_orbits.size()));
    if (ids[i] == "?") continue;
    const Fixture& f = load_fixture(ids[i]);
    o.check(a.order == f.expect_product("aut"), ids[i] + " |Aut| " + std::to_string(a.order));
    o.check(rank_string(r.classes[i].trade) == f.expect("rank"), ids[i] + " rank " + rank_string(r.classes[i].trade));
  }
  o.check(secs < 300, "runtime " + std::to_string(secs) + " s");
  const bool others_ok = o.pass;
  o.check(orbit_total == 15, "coordinate-orbit total " + std::to_string(orbit_total) + ", printed 15");
  if (others_ok && orbit_total == 14) o.notes = {"only mismatch: coordinate-orbit total 14, printed 15"};
  std::ostringstream s;
  s << "classes=" << r.classes.size() << " raw=" << r.raw_solution_count << " aut and rank match the fixtures"
    << " orbits " << join(per_class, " ") << " time=" << secs << "s";
  o.summary = s.str();
  return o;
}

// --- 3 ------------------------------------------------------------------------

Outcome criterion3() {
  Outcome o;
  const int workers = env_workers();
  const auto t = Clock::now();
  const auto r = run_classify(12, true, workers, {3, 6});
  const double secs = since(t);
  o.check(r.classes.size() == 25, "classes " + std::to_string(r.classes.size()));
  o.check(r.weighted_solution_count == 32076, "weighted " + std::to_string(r.weighted_solution_count));
  std::multiset<std::size_t> want, got;
  for (const auto& f : trade_fixtures("length12.txt")) want.insert(f.trade->volume());
  for (const auto& c : r.classes) got.insert(c.volume);
  o.check(want == got, "volume multiset");
  const auto ids = match_fixtures(r, "length12.txt", Equivalence::Johnson);
  std::set<std::string> distinct(ids.begin(), ids.end());
  o.check(distinct.size() == 25 && !distinct.count("?"), "fixture matching " + join(ids, ","));
  for (std::size_t i = 0; i < r.classes.size(); ++i) {
    if (ids[i] == "?") continue;
    const auto a = automorphisms(r.classes[i].trade, Equivalence::Translations);
    o.check(a.order == load_fixture(ids[i]).expect_product("aut"), ids[i] + " |Aut| " + std::to_string(a.order));
  }
  const DoubleCount dc = double_count_validate(r, SearchConfig::defaults(12, true));
  o.check(dc.ok, "double count " + std::to_string(dc.expected));
  o.check(secs * workers <= 8 * 3600, "cpu time");
  std::ostringstream s;
  s << "classes=" << r.classes.size() << " weighted=" << r.weighted_solution_count << " double-count=" << dc.expected
    << " workers=" << workers << " time=" << secs << "s";
  o.summary = s.str();
  return o;
}

// --- 4 ------------------------------------------------------------------------

Outcome criterion4() {
  Outcome o;
  const WordSet w = witt_design();
  o.check(w.size() == 132, "blocks " + std::to_string(w.size()));
  std::map<Mask, int> cover;
  for (Mask b : w)
    for (Mask r = b; r; r &= r - 1) cover[b & ~(r & -r)]++;
  int bad = 0;
  for (Mask m = 0; m < (Mask{1} << 12); ++m)
    if (popcount(m) == 5 && cover[m] != 1) ++bad;
  o.check(bad == 0, std::to_string(bad) + " badly covered 5-sets");

  SearchConfig c = SearchConfig::defaults(12, true);
  c.checkpoint_depths.clear();
  c.restrict_t0_to = w;
  const auto r = classify_restricted(c);
  auto ids = match_fixtures(r, "length12.txt", Equivalence::Johnson);
  std::sort(ids.begin(), ids.end());
  const std::vector<std::string> want{"108a", "108b", "120a", "120b", "132", "72b", "96a"};
  o.check(ids == want, "classes " + join(ids, ","));
  int c132 = 0;
  for (const auto& k : r.classes) c132 += k.volume == 132;
  o.check(c132 == 1, "volume-132 classes " + std::to_string(c132));
  o.summary = "blocks=132 5-sets covered once; restricted classes " + join(ids, ",") +
              "; volume-132 classes=" + std::to_string(c132);
  return o;
}

// --- 5 ------------------------------------------------------------------------

Outcome criterion5() {
  Outcome o;
  const std::set<std::string> continuing{"72a", "108a", "110a", "110b"};
  std::map<std::string, KWayTrade> three;
  std::vector<std::string> counts;
  for (const auto& f : trade_fixtures("length12.txt")) {
    const auto mates = find_third_mate(*f.trade);
    const std::size_t want = continuing.count(f.id) ? 1 : 0;
    o.check(mates.size() == want, f.id + " mates " + std::to_string(mates.size()));
    if (!mates.empty()) {
      counts.push_back(f.id + ":" + std::to_string(mates.size()));
      three.emplace(f.id, KWayTrade(12, f.trade->kind(), {f.trade->t0(), f.trade->t1(), mates.front()}));
    }
  }
  if (three.size() == 4) {
    const auto& a = three.at("72a");
    const auto& b = three.at("108a");
    const auto& c = three.at("110a");
    const auto& d = three.at("110b");
    o.check(!are_equivalent(a, b, Equivalence::Johnson), "72a ~ 108a");
    o.check(!are_equivalent(a, c, Equivalence::Johnson), "72a ~ 110a");
    o.check(!are_equivalent(b, c, Equivalence::Johnson), "108a ~ 110a");
    o.check(are_equivalent(c, d, Equivalence::Johnson), "110a !~ 110b");
  }
  o.summary = "one mate for " + join(counts, " ") + ", none for the other 21; 3-way classes: 72a, 108a, 110a=110b";
  return o;
}

// --- 6 ------------------------------------------------------------------------

Outcome criterion6() {
  Outcome o;
  const auto sts = trade_fixtures("sts_length10.txt");
  std::vector<CanonicalForm> forms;
  for (const auto& s : sts) forms.push_back(steiner_class(*s.trade));
  const auto r = run_classify(10, false, 1);
  const auto ids = match_fixtures(r, "length10.txt", Equivalence::Translations);
  int cells = 0;
  for (std::size_t i = 0; i < r.classes.size(); ++i) {
    const auto cat = derived_catalog(r.classes[i].trade, 3);
    std::map<std::string, std::uint64_t> got;
    for (const auto& e : cat.entries) {
      auto it = std::find(forms.begin(), forms.end(), e.form);
      if (it == forms.end()) {
        o.check(false, ids[i] + " has an unlisted derived class of volume " + std::to_string(e.representative.volume()));
        continue;
      }
      got[sts[it - forms.begin()].id] = e.occurrences;
    }
    for (const auto& s : sts) {
      const int want = s.expect_counts("counts").at(ids[i]);
      const std::uint64_t g = got.count(s.id) ? got[s.id] : 0;
      o.check(g == static_cast<std::uint64_t>(want), ids[i] + "/" + s.id + " " + std::to_string(g) + " != " +
                                                          std::to_string(want));
      ++cells;
    }
    o.check(cat.failures == 0, ids[i] + " derivation failures");
  }
  std::set<CanonicalForm> all;
  std::vector<std::string> uniform;
  for (const auto& f : trade_fixtures("length12.txt")) {
    const auto cat = derived_catalog(*f.trade, kStsBlockSize);
    o.check(cat.failures == 0, f.id + " derivation failures");
    for (const auto& e : cat.entries) all.insert(e.form);
    if (cat.entries.size() == 1) uniform.push_back(f.id);
  }
  o.check(all.size() == 87, "length-12 union " + std::to_string(all.size()));
  o.check(uniform == std::vector<std::string>{"32", "132"}, "uniform " + join(uniform, ","));
  o.summary = std::to_string(cells) + " derived-count cells match; length-12 union=" + std::to_string(all.size()) +
              "; STS-uniform=" + join(uniform, ",");
  return o;
}

// --- 7 ------------------------------------------------------------------------

/// Maximum cliques of the halved n-cube by Bron-Kerbosch with pivoting.
std::vector<std::vector<Mask>> halved_cube_max_cliques(int n) {
  std::vector<Mask> verts;
  for (Mask x = 0; x < (Mask{1} << n); ++x)
    if (popcount(x) % 2 == 0) verts.push_back(x);
  auto adj = [](Mask a, Mask b) { return popcount(a ^ b) == 2; };
  std::vector<std::vector<Mask>> cliques;
  std::size_t best = 0;
  std::vector<Mask> r;
  std::function<void(std::vector<Mask>, std::vector<Mask>)> bk = [&](std::vector<Mask> p, std::vector<Mask> x) {
    if (p.empty() && x.empty()) {
      if (r.size() > best) {
        best = r.size();
        cliques.clear();
      }
      if (r.size() == best) cliques.push_back(r);
      return;
    }
    if (r.size() + p.size() < best) return;
    Mask u = p.empty() ? x.front() : p.front();
    std::size_t most = 0;
    for (const auto* s : {&p, &x})
      for (Mask c : *s) {
        std::size_t k = std::count_if(p.begin(), p.end(), [&](Mask v) { return adj(c, v); });
        if (k >= most) {
          most = k;
          u = c;
        }
      }
    std::vector<Mask> cand;
    for (Mask v : p)
      if (!adj(u, v)) cand.push_back(v);
    for (Mask v : cand) {
      std::vector<Mask> np, nx;
      for (Mask y : p)
        if (adj(v, y)) np.push_back(y);
      for (Mask y : x)
        if (adj(v, y)) nx.push_back(y);
      r.push_back(v);
      bk(np, nx);
      r.pop_back();
      p.erase(std::find(p.begin(), p.end(), v));
      x.push_back(v);
    }
  };
  bk(verts, {});
  return cliques;
}

bool clique_condition(const Trade& t, const std::vector<std::vector<Mask>>& cliques) {
  for (const auto& c : cliques) {
    int a = 0, b = 0;
    for (Mask w : c) {
      a += contains(t.t0(), w);
      b += contains(t.t1(), w);
    }
    if (a != b || a > 1) return false;
  }
  return true;
}

Outcome criterion7() {
  Outcome o;
  const auto t = Clock::now();
  std::vector<const Fixture*> trades;
  for (const auto& f : all_fixtures())
    if (f.trade && f.kind.kind == TradeKind::Extended) trades.push_back(&f);

  // Constant-weight extended trades are Steiner S(n/2-1, n/2, n) trades and back.
  int steiner_checked = 0;
  for (const auto* f : trades) {
    const Trade& tr = *f->trade;
    const int h = tr.length() / 2;
    bool cw = true;
    for (Mask w : tr.support()) cw = cw && popcount(w) == h;
    if (!cw) continue;
    ++steiner_checked;
    const Trade st = tr.with_kind(KindSpec::steiner(h));
    o.check(is_valid(tr) == is_valid(st), f->id + " Steiner equivalence");
    std::vector<Mask> bent(tr.t0().begin(), tr.t0().end());
    const Mask w0 = bent[0];
    const Mask lo = w0 & -w0;
    const Mask hi = (~w0 & full_mask(tr.length())) & -(~w0 & full_mask(tr.length()));
    bent[0] = w0 ^ lo ^ hi;
    if (!contains(tr.t1(), bent[0]) && !contains(tr.t0(), bent[0])) {
      const Trade a(tr.length(), tr.kind(), bent, tr.t1());
      o.check(is_valid(a) == is_valid(a.with_kind(KindSpec::steiner(h))), f->id + " perturbed Steiner equivalence");
    }
  }

  // Graph criterion against counting on brute-force maximum cliques.
  std::mt19937 rng(20261016);
  int graph_checked = 0;
  for (int n : {6, 8, 10}) {
    const auto cliques = halved_cube_max_cliques(n);
    o.check(cliques.size() == (std::size_t{1} << (n - 1)) && cliques.front().size() == static_cast<std::size_t>(n),
            "max cliques of the halved " + std::to_string(n) + "-cube");
    std::vector<Trade> samples;
    for (const auto* f : trades)
      if (f->n == n) samples.push_back(*f->trade);
    if (n == 6) samples.push_back(double_trade(double_trade(trivial_trade())));
    const std::size_t base = samples.size();
    for (std::size_t i = 0; i < base; ++i) {
      // drop one word from each part, or move one word between parts
      const Trade& s = samples[i];
      std::vector<Mask> a(s.t0().begin(), s.t0().end()), b(s.t1().begin(), s.t1().end());
      if (a.size() > 1) {
        a.erase(a.begin() + rng() % a.size());
        b.erase(b.begin() + rng() % b.size());
        samples.emplace_back(n, s.kind(), a, b);
      }
    }
    std::vector<Mask> even;
    for (Mask x = 0; x < (Mask{1} << n); ++x)
      if (popcount(x) % 2 == 0) even.push_back(x);
    for (int k = 0; k < 200; ++k) {
      std::shuffle(even.begin(), even.end(), rng);
      const std::size_t sz = 1 + rng() % 6;
      samples.emplace_back(n, KindSpec::extended(), std::vector<Mask>(even.begin(), even.begin() + sz),
                           std::vector<Mask>(even.begin() + sz, even.begin() + 2 * sz));
    }
    for (const auto& s : samples) {
      ++graph_checked;
      o.check(is_valid(s) == clique_condition(s, cliques), "graph criterion disagrees with clique count, n=" +
                                                                std::to_string(n));
    }
  }

  int props = 0;
  for (const auto* f : trades) {
    const Trade& tr = *f->trade;
    const int n = tr.length();
    const auto sym = complement_symmetry(tr);
    o.check(sym == (n % 4 == 2 ? ComplementSymmetry::SwapsParts : ComplementSymmetry::FixesParts),
            f->id + " complement " + to_string(sym));
    o.check(eigenfunction_check(tr), f->id + " eigenfunction");
    const DualSpace d = dual_space(tr.support(), n);
    if (is_primary(tr)) o.check(d.closed_under_product, f->id + " dual not closed under product");
    o.check(affine_rank(tr.support()) + dual_rank(d) == n, f->id + " rank sum");
    ++props;
  }
  const auto g = girth(load_fixture("110b").trade.value());
  o.check(g && *g == 6, "girth(110b)");
  const double secs = since(t);
  o.check(secs < 60, "runtime " + std::to_string(secs) + " s");
  std::ostringstream s;
  s << "Steiner equivalence on " << steiner_checked << " constant-weight trades, graph criterion on " << graph_checked
    << " sets, complement/eigen/closure/rank on "
    << props << " fixtures, girth(110b)=" << (g ? *g : -1) << ", time=" << secs << "s";
  o.summary = s.str();
  return o;
}

// --- 8 ------------------------------------------------------------------------

Outcome criterion8() {
  Outcome o;
  const auto r8 = run_classify(8, false, 1);
  std::vector<std::size_t> vols;
  for (const auto* id : {"D01", "D02", "D12"}) {
    const Trade& d = load_fixture(id).trade.value();
    const Trade& direct = code_difference(load_fixture(std::string("C") + id[1]).code.value(),
                                          load_fixture(std::string("C") + id[2]).code.value(), 8);
    vols.push_back(direct.volume());
    bool found = false;
    for (const auto& c : r8.classes) found = found || are_equivalent(c.trade, direct, Equivalence::Translations);
    o.check(found, std::string(id) + " not among the length-8 classes");
    o.check(are_equivalent(d, direct, Equivalence::Translations), std::string(id) + " fixture");
  }
  o.check(vols == std::vector<std::size_t>{8, 12, 14}, "difference volumes " + list(vols));

  Trade t = trivial_trade();
  int top = 2;
  while (t.length() + 2 <= kMaxLength) {
    t = double_trade(t);
    top = t.length();
    o.check(is_valid(t) && t.volume() == (std::size_t{1} << (top / 2 - 1)), "doubled length " + std::to_string(top));
  }

  const KWayTrade triv(trivial_trade());
  const Trade c6 = concatenate(parity_latin_trade(3, 2), {triv, triv, triv});
  o.check(are_equivalent(c6, load_fixture("L6").trade.value(), Equivalence::Translations), "parity concatenation vs L6");

  std::vector<KWayTrade> pool{triv, KWayTrade(load_fixture("L6").trade.value())};
  for (const auto& f : trade_fixtures("length8.txt"))
    if (f.n == 8 && f.kind.kind == TradeKind::Extended) pool.emplace_back(*f.trade);
  for (const auto& f : trade_fixtures("length10.txt")) pool.emplace_back(*f.trade);
  std::mt19937 rng(7);
  int done = 0;
  while (done < 50) {
    const int m = 2 + static_cast<int>(rng() % 2);
    std::vector<KWayTrade> comps;
    int len = 0;
    for (int i = 0; i < m; ++i) {
      comps.push_back(pool[rng() % pool.size()]);
      len += comps.back().length();
    }
    if (len > kMaxLength) continue;
    ++done;
    const Trade out = concatenate(parity_latin_trade(m, 2), comps);
    o.check(is_valid(out), "composition invalid");
    bool primary_in = true;
    for (const auto& c : comps) primary_in = primary_in && is_primary(c.pair(0, 1));
    if (primary_in) o.check(is_primary(out), "composition not primary");
    const DualSpace d = dual_space(out.support(), out.length());
    for (Mask b : block_indicators(comps)) o.check(contains(d.members, b), "block indicator missing from dual");
  }
  o.summary = "difference volumes 8,12,14 match length-8 classes; doubling valid up to length " +
              std::to_string(top) + "; parity concatenation = L6; " + std::to_string(done) + " random compositions";
  return o;
}

// --- 9 ------------------------------------------------------------------------

Outcome criterion9() {
  Outcome o;
  std::vector<std::string> digests;
  for (int n : {8, 10}) {
    std::string first;
    for (int w : {1, 4, 8}) {
      const std::string rec = format_records(run_classify(n, false, w));
      if (w == 1) first = rec;
      o.check(rec == first, "length " + std::to_string(n) + " records differ with " + std::to_string(w) + " workers");
    }
    digests.push_back(std::to_string(n) + ":" + digest(first));
  }
  o.summary = "records identical for 1/4/8 workers, digests " + join(digests, " ");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty()) which = {1, 2, 4, 5, 6, 7, 8, 9};
  const std::map<int, std::function<Outcome()>> table{{1, criterion1}, {2, criterion2}, {3, criterion3},
                                                      {4, criterion4}, {5, criterion5}, {6, criterion6},
                                                      {7, criterion7}, {8, criterion8}, {9, criterion9}};
  bool all = true;
  for (int c : which) {
    auto it = table.find(c);
    if (it == table.end()) {
      std::cerr << "unknown criterion " << c << '\n';
      return 2;
    }
    Outcome o;
    try {
      o = it->second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.notes.push_back(std::string("exception: ") + e.what());
    }
    all = all && o.pass;
    std::cout << "criterion " << c << ": " << (o.pass ? "PASS" : "FAIL");
    if (!o.notes.empty()) std::cout << " (" << join(o.notes, "; ") << ")";
    std::cout << " - " << o.summary << std::endl;
  }
  return all ? 0 : 1;
}
