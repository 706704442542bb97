#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "xtrade/analysis.hpp"
#include "xtrade/canonical.hpp"
#include "xtrade/constructions.hpp"
#include "xtrade/report.hpp"
#include "xtrade/search.hpp"
#include "xtrade/trade.hpp"

using namespace xtrade;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open " + path);
  return f;
}

void write_out(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw UsageError("cannot write " + path);
  f << text;
}

/// A word list, one word per line; a "span n=" file is expanded.
WordSet read_words(const std::string& path, int* n_out = nullptr) {
  auto f = open_in(path);
  std::stringstream buf;
  buf << f.rdbuf();
  const std::string text = buf.str();
  if (text.find("span n=") != std::string::npos) {
    std::istringstream is(text);
    GeneratorMatrix g = parse_generator_matrix(is);
    if (n_out) *n_out = g.n;
    return span(g);
  }
  std::istringstream is(text);
  std::string line;
  std::vector<Mask> words;
  int n = 0;
  while (std::getline(is, line)) {
    line = detail::trim(line);
    if (line.empty() || line[0] == '#') continue;
    Word w = Word::parse(line);
    if (n && w.length() != n) throw TradeError("mixed word lengths in " + path);
    n = w.length();
    words.push_back(w.bits());
  }
  if (n_out) *n_out = n;
  return make_word_set(std::move(words));
}

std::vector<KWayTrade> read_records(const std::string& path) {
  auto f = open_in(path);
  std::vector<KWayTrade> out;
  while (auto t = read_kway(f)) out.push_back(std::move(*t));
  if (out.empty()) throw TradeError("no trade records in " + path);
  return out;
}

int default_workers() {
  if (const char* e = std::getenv("XTRADE_WORKERS"); e && *e) return std::max(1, std::atoi(e));
  return 1;
}

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) s += (i ? " " : "") + std::string(argv[i]);
  return s;
}

// --- classify -----------------------------------------------------------------

struct ClassifyOpts {
  int length = 10;
  bool constant_weight = false;
  std::string checkpoints;
  std::string restrict_file;
  int workers = 1;
  std::string out;
  std::string resume_file;
  std::string checkpoint_file;
};

int cmd_classify(const ClassifyOpts& o, const std::string& cmdline) {
  SearchConfig cfg = SearchConfig::defaults(o.length, o.constant_weight);
  cfg.workers = o.workers;
  cfg.checkpoint_path = o.checkpoint_file;
  if (!o.checkpoints.empty()) {
    cfg.checkpoint_depths.clear();
    std::stringstream ss(o.checkpoints);
    std::string d;
    while (std::getline(ss, d, ','))
      if (!d.empty() && d != "none") cfg.checkpoint_depths.push_back(std::stoi(d));
  }
  if (!o.restrict_file.empty()) {
    cfg.restrict_t0_to = read_words(o.restrict_file);
    cfg.checkpoint_depths.clear();
  }
  try {
    cfg.validate();
  } catch (const TradeError& e) {
    throw UsageError(e.what());
  }

  const auto start = std::chrono::steady_clock::now();
  ClassificationResult r;
  if (!o.resume_file.empty()) {
    auto f = open_in(o.resume_file);
    r = resume(cfg, f);
  } else if (cfg.restrict_t0_to) {
    r = classify_restricted(cfg);
  } else {
    r = classify(cfg);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::cout << format_summary_table(r);
  int rc = kOk;
  if (!cfg.restrict_t0_to) {
    const DoubleCount dc = double_count_validate(r, cfg);
    std::cout << "double-count expected=" << dc.expected << " observed=" << dc.observed << (dc.ok ? " ok" : " MISMATCH")
              << '\n';
    if (!dc.ok) rc = kFailed;
  }
  for (const auto& s : r.stages)
    if (s.depth > 0)
      std::cout << "stage depth=" << s.depth << " in=" << s.states_in << " out=" << s.states_out << " kept=" << s.merged
                << '\n';

  const std::string records = format_records(r);
  if (!o.out.empty()) {
    write_out(o.out, records);
    RunManifest m;
    m.command_line = cmdline;
    m.config = config_json(cfg);
    m.wall_seconds = secs;
    m.workers = cfg.workers;
    m.classes = r.classes.size();
    m.raw = r.raw_solution_count;
    m.weighted = r.weighted_solution_count;
    m.nodes = r.nodes;
    m.output_digest = digest(records);
    write_out(o.out + ".manifest.json", m.to_json().dump(2) + "\n");
  }
  return rc;
}

// --- analyze ------------------------------------------------------------------

struct AnalyzeOpts {
  std::string in;
  bool dual = false, rank = false, kernel = false, girth = false, witt = false, third = false, orbits = false;
  int derived = 0;
};

std::string kernel_form(const WordSet& s, int n) {
  const KernelDecomposition k = kernel_decomposition(s, n);
  std::string out = "<";
  for (std::size_t i = 0; i < k.kernel_basis.size(); ++i) out += (i ? "," : "") + detail::word_str(k.kernel_basis[i], n);
  out += ">+";
  if (k.representatives.size() > 1) out += "{";
  for (std::size_t i = 0; i < k.representatives.size(); ++i)
    out += (i ? "," : "") + detail::word_str(k.representatives[i], n);
  if (k.representatives.size() > 1) out += "}";
  return out;
}

int cmd_analyze(const AnalyzeOpts& o) {
  const auto records = read_records(o.in);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const KWayTrade& kw = records[i];
    const Trade t = kw.pair(0, 1);
    const int n = t.length();
    std::cout << "trade " << i + 1 << ": n=" << n << " vol=" << t.volume() << " kind=" << t.kind().str() << '\n';
    if (o.rank) std::cout << "  rank " << rank_string(t) << '\n';
    if (o.dual) {
      const DualSpace d = dual_space(t.support(), n);
      std::cout << "  dual size=" << d.members.size() << " basis:";
      for (Mask b : d.standard_basis) std::cout << ' ' << detail::word_str(b, n);
      std::cout << (d.closed_under_product ? "" : " (not closed under product)") << '\n';
    }
    if (o.kernel) {
      std::cout << "  T0 = " << kernel_form(t.t0(), n) << '\n';
      std::cout << "  T1 = " << kernel_form(t.t1(), n) << '\n';
    }
    if (o.girth) {
      const auto g = girth(t);
      std::cout << "  girth " << (g ? std::to_string(*g) : std::string("none")) << '\n';
    }
    if (o.orbits) {
      const AutomorphismReport a = automorphisms(t);
      std::cout << "  |Aut| " << aut_string(a) << '\n';
      std::cout << "  coordinate orbits " << partition_string(a.coordinate_orbits) << '\n';
      std::cout << "  word orbits";
      for (auto s : a.word_orbit_sizes) std::cout << ' ' << s;
      std::cout << '\n';
    }
    if (o.witt) {
      bool applicable = n == 12;
      for (Mask w : t.t0()) applicable = applicable && popcount(w) == 6;
      if (!applicable)
        std::cout << "  witt: not a length-12 weight-6 trade\n";
      else
        std::cout << "  T0 in S(5,6,12): " << (is_sub_witt(t.t0()) ? "yes" : "no") << '\n';
    }
    if (o.third) {
      const auto mates = find_third_mate(t);
      std::cout << "  third mates " << mates.size() << '\n';
      for (const auto& m : mates) {
        std::cout << "  ---\n";
        for (Mask w : m) std::cout << "  " << detail::word_str(w, n) << '\n';
      }
    }
    if (o.derived > 0) {
      const DerivedCatalog c = derived_catalog(t, o.derived);
      std::cout << "  derived k=" << c.k << " centres=" << c.centres << " classes=" << c.entries.size()
                << " failures=" << c.failures << '\n';
      for (const auto& e : c.entries)
        std::cout << "    " << e.occurrences << "  vol=" << e.representative.volume() << "  ("
                  << blocks_string(e.representative.t0()) << ") (" << blocks_string(e.representative.t1()) << ")\n";
    }
  }
  return kOk;
}

// --- verify -------------------------------------------------------------------

struct VerifyOpts {
  std::string in;
  std::string kind;
  bool primary = false;
  bool eigen = false;
};

int cmd_verify(const VerifyOpts& o) {
  const auto records = read_records(o.in);
  int bad = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    KWayTrade kw = records[i];
    if (!o.kind.empty()) kw = KWayTrade(kw.length(), KindSpec::parse(o.kind), kw.parts());
    std::vector<std::string> problems;
    for (int a = 0; a < kw.ways(); ++a)
      for (int b = a + 1; b < kw.ways(); ++b) {
        const Trade t = kw.pair(a, b);
        const VerifyReport r = verify(t);
        for (const auto& v : r.violations)
          problems.push_back("parts " + std::to_string(a) + "," + std::to_string(b) + ": " + v.what + " at " +
                             detail::word_str(v.center, t.length()) + " (" + std::to_string(v.count0) + " vs " +
                             std::to_string(v.count1) + ")");
        if (!r.valid) continue;
        if (o.primary && !is_primary(t)) problems.push_back("not primary");
        if (o.eigen && !eigenfunction_check(t)) problems.push_back("eigenfunction check failed");
      }
    std::cout << "record " << i + 1 << ": " << (problems.empty() ? "ok" : "FAILED") << '\n';
    for (const auto& p : problems) std::cout << "  " << p << '\n';
    if (!problems.empty()) ++bad;
  }
  return bad ? kFailed : kOk;
}

// --- construct ----------------------------------------------------------------

int cmd_double(const std::string& in, const std::string& out) {
  const auto records = read_records(in);
  std::string text;
  for (const auto& kw : records) text += format_trade(double_trade(kw.pair(0, 1)));
  write_out(out, text);
  return kOk;
}

int cmd_concat(const std::string& latin, const std::vector<std::string>& files, const std::string& out) {
  int m = 0, q = 0;
  char comma = 0;
  std::istringstream is(latin);
  if (!(is >> m >> comma >> q) || comma != ',') throw UsageError("--latin expects m,q");
  std::vector<KWayTrade> comps;
  for (const auto& f : files) comps.push_back(read_records(f).front());
  if (comps.size() == 1)
    while (static_cast<int>(comps.size()) < m) comps.push_back(comps.front());
  write_out(out, format_trade(concatenate(parity_latin_trade(m, q), comps)));
  return kOk;
}

int cmd_span(const std::string& in, const std::string& out) {
  int n = 0;
  const WordSet s = read_words(in, &n);
  write_out(out, format_word_set(s, n));
  return kOk;
}

int cmd_diff(const std::string& a, const std::string& b, const std::string& out) {
  int na = 0, nb = 0;
  const WordSet c = read_words(a, &na);
  const WordSet d = read_words(b, &nb);
  if (na != nb) throw UsageError("codes have different lengths");
  write_out(out, format_trade(code_difference(c, d, na)));
  return kOk;
}

int cmd_witt(const std::string& out) {
  write_out(out, format_word_set(witt_design(), 12));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classification and analysis of extended 1-perfect trades"};
  app.require_subcommand(1);

  ClassifyOpts co;
  co.workers = default_workers();
  auto* classify_cmd = app.add_subcommand("classify", "exhaustive classification");
  classify_cmd->add_option("--length", co.length, "word length")->required();
  classify_cmd->add_flag("--constant-weight", co.constant_weight, "restrict to weight-n/2 words");
  classify_cmd->add_option("--checkpoints", co.checkpoints, "comma-separated isomorph rejection depths");
  classify_cmd->add_option("--restrict-t0", co.restrict_file, "word list that T0 must lie in");
  classify_cmd->add_option("--workers", co.workers, "worker threads (default $XTRADE_WORKERS or 1)");
  classify_cmd->add_option("--out", co.out, "record file; a manifest goes to <out>.manifest.json");
  classify_cmd->add_option("--resume", co.resume_file, "continue from a checkpoint file");
  classify_cmd->add_option("--checkpoint-file", co.checkpoint_file, "write a checkpoint after each merge stage");

  AnalyzeOpts ao;
  auto* analyze_cmd = app.add_subcommand("analyze", "per-trade analyses");
  analyze_cmd->add_option("--in", ao.in, "trade record file")->required();
  analyze_cmd->add_flag("--dual", ao.dual);
  analyze_cmd->add_flag("--rank", ao.rank);
  analyze_cmd->add_flag("--kernel", ao.kernel);
  analyze_cmd->add_flag("--girth", ao.girth);
  analyze_cmd->add_option("--derived", ao.derived, "derived Steiner trades of block size k");
  analyze_cmd->add_flag("--witt", ao.witt);
  analyze_cmd->add_flag("--third-mate", ao.third);
  analyze_cmd->add_flag("--orbits", ao.orbits);

  VerifyOpts vo;
  auto* verify_cmd = app.add_subcommand("verify", "check trade conditions");
  verify_cmd->add_option("--in", vo.in, "trade record file")->required();
  verify_cmd->add_option("--kind", vo.kind, "ext, perf or steiner:k (overrides the records)");
  verify_cmd->add_flag("--primary", vo.primary);
  verify_cmd->add_flag("--eigen", vo.eigen);

  auto* construct_cmd = app.add_subcommand("construct", "build trades and codes");
  construct_cmd->require_subcommand(1);
  std::string c_in, c_out, c_latin, c_a, c_b;
  std::vector<std::string> c_components;
  auto* dbl = construct_cmd->add_subcommand("double", "(T0.00 u T1.11, T0.11 u T1.00)");
  dbl->add_option("--in", c_in)->required();
  auto* cat = construct_cmd->add_subcommand("concat", "concatenation along a parity latin trade");
  cat->add_option("--latin", c_latin, "m,q")->required();
  cat->add_option("--components", c_components, "one trade file per coordinate (or one for all)")->required();
  auto* spn = construct_cmd->add_subcommand("span", "linear span of a generator matrix");
  spn->add_option("--in", c_in)->required();
  auto* dif = construct_cmd->add_subcommand("diff", "(C \\ D, D \\ C)");
  dif->add_option("--a", c_a)->required();
  dif->add_option("--b", c_b)->required();
  auto* witt = construct_cmd->add_subcommand("witt", "blocks of S(5,6,12)");
  for (auto* s : {dbl, cat, spn, dif, witt}) s->add_option("--out", c_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*classify_cmd) return cmd_classify(co, join_args(argc, argv));
    if (*analyze_cmd) return cmd_analyze(ao);
    if (*verify_cmd) return cmd_verify(vo);
    if (*dbl) return cmd_double(c_in, c_out);
    if (*cat) return cmd_concat(c_latin, c_components, c_out);
    if (*spn) return cmd_span(c_in, c_out);
    if (*dif) return cmd_diff(c_a, c_b, c_out);
    if (*witt) return cmd_witt(c_out);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailed;
  }
  return kUsage;
}
