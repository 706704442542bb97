#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>

#include "xtrade/analysis.hpp"
#include "xtrade/fixtures.hpp"
#include "xtrade/report.hpp"
#include "xtrade/search.hpp"

using namespace xtrade;

namespace {

const ClassificationResult& length10() {
  static const ClassificationResult r = classify(SearchConfig::defaults(10, false));
  return r;
}

std::vector<std::size_t> volumes(const ClassificationResult& r) {
  std::vector<std::size_t> v;
  for (const auto& c : r.classes) v.push_back(c.volume);
  return v;
}

/// All distance-4 sets of even-weight words of length n (n <= 6).
std::vector<WordSet> distance4_codes(int n) {
  std::vector<Mask> even;
  for (Mask x = 0; x < (Mask{1} << n); ++x)
    if (popcount(x) % 2 == 0) even.push_back(x);
  std::vector<WordSet> out;
  WordSet cur;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (!cur.empty()) out.push_back(cur);
    for (std::size_t j = i; j < even.size(); ++j) {
      bool ok = true;
      for (Mask c : cur) ok = ok && popcount(c ^ even[j]) >= 4;
      if (!ok) continue;
      cur.push_back(even[j]);
      rec(j + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

bool includes(const WordSet& big, const WordSet& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

}  // namespace

TEST(Seed, LengthTenMatchesStepOne) {
  const PartialState s = seed_state(SearchConfig::defaults(10, false));
  EXPECT_EQ(s.t0.size(), 6U);
  EXPECT_EQ(s.t1.size(), 6U);
  EXPECT_EQ(s.frontier1.size(), 5U);
  EXPECT_TRUE(contains(s.t0, Word::parse("0000000000").bits()));
  EXPECT_TRUE(contains(s.t0, Word::parse("1111111100").bits()));
  EXPECT_TRUE(contains(s.t1, Word::parse("1111111111").bits()));
  EXPECT_TRUE(contains(s.t1, Word::parse("0000000011").bits()));
}

TEST(Seed, ConstantWeightAnchor) {
  const PartialState s = seed_state(SearchConfig::defaults(12, true));
  EXPECT_TRUE(contains(s.t0, Word::parse("000000111111").bits()));
  EXPECT_TRUE(contains(s.t0, Word::parse("111111000000").bits()));
  EXPECT_EQ(s.t1.size(), 12U);
  EXPECT_EQ(s.frontier1.size(), 6U);
}

TEST(Seed, RejectsUnsupportedConfigurations) {
  EXPECT_THROW(seed_state(SearchConfig::defaults(9, false)), TradeError);
  EXPECT_THROW(seed_state(SearchConfig::defaults(10, true)), TradeError);
  EXPECT_THROW(seed_state(SearchConfig::defaults(14, false)), TradeError);
  SearchConfig c = SearchConfig::defaults(10, false);
  c.restrict_t0_to = WordSet{0};
  EXPECT_THROW(c.validate(), TradeError);
}

TEST(Classify, LengthSixAgainstBruteForceEnumeration) {
  const SearchConfig cfg = SearchConfig::defaults(6, false);
  const auto r = classify(cfg);
  const PartialState seed = seed_state(cfg);
  const auto codes = distance4_codes(6);
  std::uint64_t brute = 0;
  for (const auto& a : codes) {
    if (!includes(a, seed.t0)) continue;
    for (const auto& b : codes) {
      if (b.size() != a.size() || !includes(b, seed.t1) || !disjoint(a, b)) continue;
      const Trade t(6, KindSpec::extended(), a, b);
      if (is_valid(t) && is_primary(t)) ++brute;
    }
  }
  EXPECT_GT(brute, 0U);
  EXPECT_EQ(r.raw_solution_count, brute);
  const auto dc = double_count_validate(r, cfg);
  EXPECT_TRUE(dc.ok);
  EXPECT_EQ(dc.expected, brute);
}

TEST(Classify, LengthEight) {
  const SearchConfig cfg = SearchConfig::defaults(8, false);
  const auto r = classify(cfg);
  EXPECT_EQ(volumes(r), (std::vector<std::size_t>{8, 12, 14, 16, 16}));
  EXPECT_TRUE(double_count_validate(r, cfg).ok);
  for (const auto& c : r.classes) {
    EXPECT_TRUE(is_valid(c.trade));
    EXPECT_TRUE(is_primary(c.trade));
  }
}

TEST(Classify, LengthTen) {
  const auto& r = length10();
  EXPECT_EQ(volumes(r), (std::vector<std::size_t>{16, 24, 28, 32, 32, 32, 36, 40}));
  EXPECT_EQ(r.raw_solution_count, 1817U);
  const auto dc = double_count_validate(r, SearchConfig::defaults(10, false));
  EXPECT_EQ(dc.expected, 1817U);
  EXPECT_TRUE(dc.ok);
  for (const auto& c : r.classes) {
    EXPECT_TRUE(is_valid(c.trade));
    EXPECT_TRUE(is_primary(c.trade));
    EXPECT_EQ(complement_symmetry(c.trade), ComplementSymmetry::SwapsParts);
  }
}

TEST(Classify, CheckpointsKeepClassesAndWeightedCount) {
  SearchConfig cfg = SearchConfig::defaults(10, false);
  cfg.checkpoint_depths = {2};
  const auto r = classify(cfg);
  ASSERT_EQ(r.classes.size(), length10().classes.size());
  for (std::size_t i = 0; i < r.classes.size(); ++i) EXPECT_EQ(r.classes[i].form, length10().classes[i].form);
  EXPECT_EQ(r.weighted_solution_count, 1817U);
  EXPECT_LT(r.raw_solution_count, 1817U);
  EXPECT_TRUE(double_count_validate(r, cfg).ok);
}

TEST(Classify, DeterministicAcrossWorkerCounts) {
  SearchConfig cfg = SearchConfig::defaults(10, false);
  cfg.workers = 3;
  EXPECT_EQ(format_records(classify(cfg)), format_records(length10()));
}

TEST(Classify, ResumeFromCheckpointFile) {
  const auto path = std::filesystem::temp_directory_path() / "xtrade_test_checkpoint.txt";
  SearchConfig cfg = SearchConfig::defaults(10, false);
  cfg.checkpoint_depths = {2};
  cfg.checkpoint_path = path.string();
  const auto full = classify(cfg);
  std::ifstream in(path);
  ASSERT_TRUE(in);
  cfg.checkpoint_path.clear();
  const auto resumed = resume(cfg, in);
  EXPECT_EQ(format_records(resumed), format_records(full));
  std::filesystem::remove(path);
}

TEST(ClassifyRestricted, WittDesign) {
  SearchConfig cfg = SearchConfig::defaults(12, true);
  cfg.checkpoint_depths.clear();
  cfg.restrict_t0_to = witt_design();
  const auto r = classify_restricted(cfg);
  std::vector<std::string> ids;
  for (const auto& c : r.classes) {
    EXPECT_TRUE(is_valid(c.trade));
    for (const auto& f : trade_fixtures("length12.txt"))
      if (f.trade->volume() == c.volume && are_equivalent(*f.trade, c.trade, Equivalence::Johnson)) ids.push_back(f.id);
  }
  EXPECT_EQ(ids, (std::vector<std::string>{"72b", "96a", "108a", "108b", "120a", "120b", "132"}));
  EXPECT_EQ(std::count_if(r.classes.begin(), r.classes.end(), [](const ClassRecord& c) { return c.volume == 132; }), 1);
  for (const auto& c : r.classes) EXPECT_TRUE(is_sub_witt(c.trade.t0()) || is_sub_witt(c.trade.t1()));
}

TEST(ClassifyRestricted, TooSmallRestrictionHasNoSolutions) {
  SearchConfig cfg = SearchConfig::defaults(12, true);
  cfg.checkpoint_depths.clear();
  cfg.restrict_t0_to = WordSet{};
  EXPECT_TRUE(classify_restricted(cfg).classes.empty());
  const Mask a = Word::parse("000000111111").bits();
  cfg.restrict_t0_to = make_word_set({a, a ^ full_mask(12)});
  const auto r = classify_restricted(cfg);
  EXPECT_TRUE(r.classes.empty());
  EXPECT_EQ(r.raw_solution_count, 0U);
}

TEST(ThirdMate, UniqueForFourTrades) {
  for (const auto& f : trade_fixtures("length12.txt")) {
    const auto mates = find_third_mate(*f.trade);
    const bool listed = f.third.has_value();
    EXPECT_EQ(mates.size(), listed ? 1U : 0U) << f.id;
    if (listed && mates.size() == 1) EXPECT_EQ(mates.front(), *f.third) << f.id;
  }
  EXPECT_TRUE(find_third_mate(*load_fixture("132").trade).empty());
}

TEST(ThirdMate, ContainsPrintedOrbitRepresentatives) {
  const auto a = find_third_mate(*load_fixture("110a").trade);
  const auto b = find_third_mate(*load_fixture("110b").trade);
  ASSERT_EQ(a.size(), 1U);
  ASSERT_EQ(b.size(), 1U);
  EXPECT_TRUE(contains(a.front(), Word::parse("000010111011").bits()));
  EXPECT_TRUE(contains(b.front(), Word::parse("000011110011").bits()));
}
