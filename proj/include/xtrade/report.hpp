// Class summary tables, record files and run manifests.

#pragma once

#include <bit>
#include <cstdint>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "xtrade/analysis.hpp"
#include "xtrade/canonical.hpp"
#include "xtrade/search.hpp"
#include "xtrade/trade.hpp"

namespace xtrade {

/// "r0+d": affine rank of T0, then the extra dimension T1 adds.
inline std::string rank_string(const Trade& t) {
  const int r0 = affine_rank(t.t0());
  const int ru = affine_rank(t.support());
  return std::to_string(r0) + "+" + std::to_string(ru - r0);
}

inline std::string partition_string(const std::vector<std::vector<int>>& p) {
  std::string out;
  for (const auto& cell : p) {
    if (!out.empty()) out += ' ';
    for (int c : cell) out += static_cast<char>(c < 10 ? '0' + c : 'a' + c - 10);
  }
  return out;
}

/// Support of a word in 0-9ab point notation, e.g. "034".
inline std::string block_string(Mask w) {
  std::string out;
  for (; w; w &= w - 1) {
    const int c = std::countr_zero(w);
    out += static_cast<char>(c < 10 ? '0' + c : 'a' + c - 10);
  }
  return out;
}

inline std::string blocks_string(const WordSet& s) {
  std::string out;
  for (Mask w : s) out += (out.empty() ? "" : " ") + block_string(w);
  return out;
}

inline std::string aut_string(const AutomorphismReport& a) {
  std::string s = std::to_string(a.order);
  if (a.translation_count * a.perm_stabilizer_order == a.order)
    s += " (" + std::to_string(a.translation_count) + "*" + std::to_string(a.perm_stabilizer_order) + ")";
  return s;
}

struct ClassSummary {
  std::size_t volume = 0;
  std::string aut;
  std::uint64_t aut_order = 0;
  std::string rank;
  std::vector<std::string> dual_basis;
  std::string orbits;
};

inline ClassSummary summarize(const Trade& t, Equivalence eq) {
  ClassSummary s;
  s.volume = t.volume();
  const AutomorphismReport a = automorphisms(t, eq);
  s.aut = aut_string(a);
  s.aut_order = a.order;
  s.rank = rank_string(t);
  for (Mask b : dual_space(t.support(), t.length()).standard_basis) s.dual_basis.push_back(detail::word_str(b, t.length()));
  s.orbits = partition_string(a.coordinate_orbits);
  return s;
}

inline std::string format_summary_table(const ClassificationResult& r) {
  std::ostringstream os;
  os << std::left << std::setw(4) << "#" << std::setw(6) << "vol" << std::setw(24) << "|Aut|" << std::setw(7) << "rank"
     << std::setw(28) << "coordinate orbits" << "dual basis\n";
  for (std::size_t i = 0; i < r.classes.size(); ++i) {
    const ClassSummary s = summarize(r.classes[i].trade, Equivalence::Translations);
    std::string dual;
    for (const auto& b : s.dual_basis) dual += (dual.empty() ? "" : " ") + b;
    os << std::setw(4) << i + 1 << std::setw(6) << s.volume << std::setw(24) << s.aut << std::setw(7) << s.rank
       << std::setw(28) << s.orbits << dual << '\n';
  }
  os << "classes=" << r.classes.size() << " raw=" << r.raw_solution_count << " weighted=" << r.weighted_solution_count
     << '\n';
  return os.str();
}

/// Trade records with class metadata as "key: value" lines.
inline std::string format_records(const ClassificationResult& r) {
  std::ostringstream os;
  os << "# classes=" << r.classes.size() << " raw=" << r.raw_solution_count << " weighted=" << r.weighted_solution_count
     << '\n';
  for (std::size_t i = 0; i < r.classes.size(); ++i) {
    const auto& c = r.classes[i];
    os << format_trade(c.trade);
    os << "class: " << i + 1 << '\n';
    os << "canon: " << c.form.hex() << '\n';
    os << "raw: " << c.raw_count << '\n';
    os << "weighted: " << c.weighted_count << "\n\n";
  }
  return os.str();
}

/// 64-bit FNV-1a, used as the output digest.
inline std::string digest(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

struct RunManifest {
  std::string command_line;
  nlohmann::json config;
  double wall_seconds = 0;
  int workers = 1;
  std::size_t classes = 0;
  std::uint64_t raw = 0;
  std::uint64_t weighted = 0;
  std::uint64_t nodes = 0;
  std::string output_digest;

  nlohmann::json to_json() const {
    return {{"command_line", command_line},
            {"config", config},
            {"wall_seconds", wall_seconds},
            {"workers", workers},
            {"classes", classes},
            {"raw_solution_count", raw},
            {"weighted_solution_count", weighted},
            {"nodes", nodes},
            {"output_digest", output_digest}};
  }
};

inline nlohmann::json config_json(const SearchConfig& c) {
  nlohmann::json j{{"n", c.n},
                   {"constant_weight", c.constant_weight},
                   {"checkpoint_depths", c.checkpoint_depths},
                   {"restricted", c.restrict_t0_to.has_value()}};
  if (c.restrict_t0_to) j["restriction_size"] = c.restrict_t0_to->size();
  return j;
}

}  // namespace xtrade
