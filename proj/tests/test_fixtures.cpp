#include <gtest/gtest.h>

#include <set>

#include "xtrade/analysis.hpp"
#include "xtrade/fixtures.hpp"
#include "xtrade/report.hpp"

using namespace xtrade;

TEST(Fixtures, AllFilesLoad) {
  std::set<std::string> ids;
  for (const auto& f : all_fixtures()) {
    EXPECT_TRUE(ids.insert(f.id).second) << "duplicate id " << f.id;
    EXPECT_TRUE(f.trade || f.code) << f.id;
  }
  EXPECT_EQ(trade_fixtures("length10.txt").size(), 8U);
  EXPECT_EQ(trade_fixtures("length12.txt").size(), 25U);
  EXPECT_EQ(trade_fixtures("sts_length10.txt").size(), 15U);
  EXPECT_THROW(load_fixture("no-such-trade"), TradeError);
}

TEST(Fixtures, TradesVerifyAndArePrimary) {
  for (const auto& f : all_fixtures()) {
    if (!f.trade) continue;
    EXPECT_TRUE(is_valid(*f.trade)) << f.id << ' ' << verify(*f.trade).violations.size();
    if (f.kind.kind == TradeKind::Extended) EXPECT_TRUE(is_primary(*f.trade)) << f.id;
  }
}

TEST(Fixtures, Volumes) {
  for (const auto& f : all_fixtures())
    if (f.trade && f.has("volume")) EXPECT_EQ(f.trade->volume(), std::stoul(f.expect("volume"))) << f.id;
  EXPECT_EQ(load_fixture("132").trade->t0().size(), 132U);
}

TEST(Fixtures, CodeSizes) {
  for (const auto& f : all_fixtures())
    if (f.code && f.has("size")) EXPECT_EQ(f.code->size(), std::stoul(f.expect("size"))) << f.id;
}

TEST(Fixtures, ConstantWeightFlag) {
  for (const auto& f : all_fixtures()) {
    if (!f.flag("constant-weight")) continue;
    for (Mask w : f.trade->support()) EXPECT_EQ(popcount(w), f.n / 2) << f.id;
  }
}

TEST(Fixtures, DualSpaces) {
  int checked = 0;
  for (const auto& f : all_fixtures()) {
    if (!f.trade || !f.has("dual")) continue;
    const DualSpace d = dual_space(f.trade->support(), f.n);
    EXPECT_EQ(span_of(f.expect_words("dual")), d.members) << f.id;
    ++checked;
  }
  EXPECT_EQ(checked, 27);
}

TEST(Fixtures, Ranks) {
  for (const auto& f : all_fixtures())
    if (f.trade && f.has("rank")) EXPECT_EQ(rank_string(*f.trade), f.expect("rank")) << f.id;
}

TEST(Fixtures, WittMembership) {
  for (const auto& f : trade_fixtures("length12.txt")) {
    const bool sub = is_sub_witt(f.trade->t0()) || is_sub_witt(f.trade->t1());
    EXPECT_EQ(sub, f.flag("witt")) << f.id;
  }
}

TEST(Fixtures, ThirdMates) {
  for (const auto& f : trade_fixtures("length12.txt")) {
    EXPECT_EQ(f.third.has_value(), f.flag("third-mate")) << f.id;
    if (!f.third) continue;
    EXPECT_TRUE(is_valid(f.kway())) << f.id;
  }
}

TEST(Fixtures, NoSquares) {
  for (const auto& f : all_fixtures()) {
    if (!f.flag("no-squares")) continue;
    const auto g = girth(*f.trade);
    ASSERT_TRUE(g.has_value()) << f.id;
    EXPECT_GT(*g, 4) << f.id;
  }
  EXPECT_EQ(girth(*load_fixture("110b").trade), 6);
}

TEST(Fixtures, EightyAPartsDifferByATranslation) {
  const Trade& t = *load_fixture("80a").trade;
  EXPECT_EQ(translate(t.t0(), Word::parse("000000111111").bits()), t.t1());
}

TEST(Fixtures, ErrataAreRecorded) {
  for (const char* id : {"80b", "T32b"}) EXPECT_FALSE(load_fixture(id).errata.empty()) << id;
}

TEST(Fixtures, DataDirectoryOverride) {
  EXPECT_EQ(fixture_data_dir().filename(), "v1");
  EXPECT_THROW(load_fixture_file("missing.txt"), TradeError);
}
