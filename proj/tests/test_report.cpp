#include <gtest/gtest.h>

#include <sstream>

#include "xtrade/fixtures.hpp"
#include "xtrade/report.hpp"

using namespace xtrade;

namespace {

const ClassificationResult& length8() {
  static const ClassificationResult r = classify(SearchConfig::defaults(8, false));
  return r;
}

}  // namespace

TEST(Report, RecordsReadBack) {
  const auto& r = length8();
  std::istringstream in(format_records(r));
  std::size_t i = 0;
  while (true) {
    std::vector<std::string> extra;
    auto t = read_trade(in, &extra);
    if (!t) break;
    ASSERT_LT(i, r.classes.size());
    EXPECT_EQ(*t, r.classes[i].trade);
    ASSERT_EQ(extra.size(), 4U);
    EXPECT_EQ(extra[0], "class: " + std::to_string(i + 1));
    EXPECT_EQ(extra[1], "canon: " + r.classes[i].form.hex());
    EXPECT_EQ(CanonicalForm::from_hex(extra[1].substr(7)), r.classes[i].form);
    ++i;
  }
  EXPECT_EQ(i, r.classes.size());
}

TEST(Report, SummaryTable) {
  const std::string s = format_summary_table(length8());
  EXPECT_NE(s.find("classes=5 raw=57"), std::string::npos);
  std::istringstream in(s);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) rows += !line.empty() && std::isdigit(static_cast<unsigned char>(line[0]));
  EXPECT_EQ(rows, 5);
}

TEST(Report, SummaryOfFixture) {
  const ClassSummary s = summarize(*load_fixture("T16").trade, Equivalence::Translations);
  EXPECT_EQ(s.volume, 16U);
  EXPECT_EQ(s.rank, "4+1");
  EXPECT_EQ(s.orbits, "0123456789");
  EXPECT_EQ(s.aut_order, load_fixture("T16").expect_product("aut"));
}

TEST(Report, Strings) {
  EXPECT_EQ(partition_string({{0, 1}, {10, 11}}), "01 ab");
  EXPECT_EQ(block_string(Word::parse("110000000011").bits()), "01ab");
  EXPECT_EQ(blocks_string(make_word_set({0b111, 0b11000})), "012 34");
  AutomorphismReport a;
  a.order = 12;
  a.translation_count = 2;
  a.perm_stabilizer_order = 6;
  EXPECT_EQ(aut_string(a), "12 (2*6)");
  a.perm_stabilizer_order = 5;
  EXPECT_EQ(aut_string(a), "12");
}

TEST(Report, Manifest) {
  SearchConfig cfg = SearchConfig::defaults(12, true);
  RunManifest m;
  m.command_line = "xtrade classify --length 12";
  m.config = config_json(cfg);
  m.classes = 25;
  m.weighted = 32076;
  m.output_digest = digest("x");
  const auto j = m.to_json();
  EXPECT_EQ(j["config"]["n"], 12);
  EXPECT_EQ(j["config"]["constant_weight"], true);
  EXPECT_EQ(j["config"]["checkpoint_depths"], nlohmann::json::array({3, 6}));
  EXPECT_EQ(j["weighted_solution_count"], 32076);
  EXPECT_EQ(j["output_digest"], m.output_digest);
  cfg.checkpoint_depths.clear();
  cfg.restrict_t0_to = witt_design();
  EXPECT_EQ(config_json(cfg)["restriction_size"], 132);
}

TEST(Report, DigestIsFnv1a) {
  EXPECT_EQ(digest(""), "cbf29ce484222325");
  EXPECT_EQ(digest("a"), "af63dc4c8601ec8c");
  EXPECT_NE(digest(format_records(length8())), digest(""));
}
