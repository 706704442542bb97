#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "xtrade/canonical.hpp"
#include "xtrade/constructions.hpp"
#include "xtrade/fixtures.hpp"

using namespace xtrade;

namespace {

/// Odd-word clique check: every odd word sees as many T0 as T1 neighbours, at most one.
bool odd_clique_oracle(const Trade& t) {
  const int n = t.length();
  for (Mask x = 0; x < (Mask{1} << n); ++x) {
    if (popcount(x) % 2 == 0) continue;
    int a = 0, b = 0;
    for (Mask w : t.t0()) a += popcount(w ^ x) == 1;
    for (Mask w : t.t1()) b += popcount(w ^ x) == 1;
    if (a != b || a > 1) return false;
  }
  return disjoint(t.t0(), t.t1());
}

}  // namespace

TEST(Doubling, ChainUpToWordLimit) {
  Trade t = trivial_trade();
  EXPECT_TRUE(odd_clique_oracle(t));
  while (t.length() + 2 <= kMaxLength) {
    t = double_trade(t);
    EXPECT_EQ(t.volume(), std::size_t{1} << (t.length() / 2 - 1));
    if (t.length() <= 12) EXPECT_TRUE(odd_clique_oracle(t));
    EXPECT_TRUE(is_primary(t));
  }
  EXPECT_EQ(t.length(), kMaxLength);
  EXPECT_THROW(double_trade(t), TradeError);
}

TEST(Doubling, RejectsInvalidInput) {
  const Trade bad(4, KindSpec::extended(), {0}, {Word::parse("1100").bits()});
  EXPECT_THROW(double_trade(bad), TradeError);
}

TEST(Doubling, TwiceFromTrivialIsL6) {
  EXPECT_TRUE(are_equivalent(double_trade(double_trade(trivial_trade())), *load_fixture("L6").trade,
                             Equivalence::Translations));
}

TEST(Latin, ParityTradeIsLatin) {
  for (int m = 2; m <= 4; ++m)
    for (int q = 2; q <= 4; ++q) {
      const auto t = parity_latin_trade(m, q);
      ASSERT_EQ(static_cast<int>(t.parts.size()), q);
      std::size_t total = 0;
      for (const auto& p : t.parts) total += p.size();
      std::size_t all = 1;
      for (int i = 0; i < m; ++i) all *= q;
      EXPECT_EQ(total, all);
      for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b)
          if (a != b) EXPECT_TRUE(is_latin_trade(t, a, b)) << m << ' ' << q << ' ' << a << ' ' << b;
    }
  EXPECT_THROW(parity_latin_trade(1, 2), TradeError);
}

TEST(Latin, BrokenTradeDetected) {
  auto t = parity_latin_trade(3, 2);
  t.parts[0].pop_back();
  EXPECT_FALSE(is_latin_trade(t, 0, 1));
}

TEST(Concatenation, ParityOfThreeTrivialsIsL6) {
  const KWayTrade triv(trivial_trade());
  const Trade c = concatenate(parity_latin_trade(3, 2), {triv, triv, triv});
  EXPECT_EQ(c.length(), 6);
  EXPECT_TRUE(odd_clique_oracle(c));
  EXPECT_TRUE(are_equivalent(c, *load_fixture("L6").trade, Equivalence::Translations));
}

TEST(Concatenation, Errors) {
  const KWayTrade triv(trivial_trade());
  EXPECT_THROW(concatenate(parity_latin_trade(3, 2), {triv, triv}), TradeError);
  EXPECT_THROW(concatenate(parity_latin_trade(2, 3), {triv, triv}), TradeError);
  const KWayTrade big(*load_fixture("T40").trade);
  EXPECT_THROW(concatenate(parity_latin_trade(2, 2), {big, big}), TradeError);
}

TEST(Concatenation, RandomCompositions) {
  std::vector<KWayTrade> pool{KWayTrade(trivial_trade()), KWayTrade(*load_fixture("L6").trade)};
  for (const auto& f : trade_fixtures("length8.txt"))
    if (f.kind.kind == TradeKind::Extended && f.n == 8) pool.emplace_back(*f.trade);
  std::mt19937 rng(3);
  int done = 0;
  while (done < 30) {
    const int m = 2 + static_cast<int>(rng() % 2);
    std::vector<KWayTrade> comps;
    int len = 0;
    for (int i = 0; i < m; ++i) {
      comps.push_back(pool[rng() % pool.size()]);
      len += comps.back().length();
    }
    if (len > 12) continue;
    ++done;
    const Trade out = concatenate(parity_latin_trade(m, 2), comps);
    EXPECT_TRUE(odd_clique_oracle(out));
    std::size_t vol = 1;
    for (const auto& c : comps) vol *= c.parts()[0].size();
    EXPECT_EQ(out.volume(), vol << (m - 1));
    const DualSpace d = dual_space(out.support(), out.length());
    for (Mask b : block_indicators(comps)) EXPECT_TRUE(contains(d.members, b));
  }
}

TEST(Span, FixtureCodes) {
  for (const char* id : {"C0", "C1", "C2"}) {
    const auto& f = load_fixture(id);
    ASSERT_TRUE(f.code.has_value());
    EXPECT_EQ(f.code->size(), 16U) << id;
    for (Mask a : *f.code)
      for (Mask b : *f.code) EXPECT_TRUE(contains(*f.code, a ^ b));
  }
  EXPECT_EQ(span({8, {}}), WordSet{0});
}

TEST(Span, GeneratorMatrixRoundTrip) {
  const GeneratorMatrix g{8, {Word::parse("00001111").bits(), Word::parse("00110011").bits()}};
  std::istringstream in(format_generator_matrix(g));
  const GeneratorMatrix h = parse_generator_matrix(in);
  EXPECT_EQ(h.n, 8);
  EXPECT_EQ(h.rows, g.rows);
  std::istringstream bad("00001111\n");
  EXPECT_THROW(parse_generator_matrix(bad), TradeError);
}

TEST(Difference, VolumesOfCodePairs) {
  const auto c = [](const char* id) { return *load_fixture(id).code; };
  const std::vector<std::pair<const char*, const char*>> pairs{{"C0", "C1"}, {"C0", "C2"}, {"C1", "C2"}};
  std::vector<std::size_t> vols;
  for (const auto& [a, b] : pairs) {
    const Trade t = code_difference(c(a), c(b), 8);
    EXPECT_TRUE(odd_clique_oracle(t));
    vols.push_back(t.volume());
  }
  EXPECT_EQ(vols, (std::vector<std::size_t>{8, 12, 14}));
  EXPECT_TRUE(are_equivalent(code_difference(c("C0"), c("C1"), 8), *load_fixture("D01").trade, Equivalence::Translations));
  EXPECT_THROW(code_difference(c("C0"), c("C0"), 8), TradeError);
}
