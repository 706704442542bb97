#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

#include "xtrade/fixtures.hpp"
#include "xtrade/trade.hpp"

using namespace xtrade;

namespace {

std::vector<Mask> words(std::initializer_list<const char*> ws) {
  std::vector<Mask> out;
  for (const char* w : ws) out.push_back(Word::parse(w).bits());
  return out;
}

Mask block(const char* pts) {
  Mask m = 0;
  for (const char* p = pts; *p; ++p) m |= Mask{1} << (*p <= '9' ? *p - '0' : *p - 'a' + 10);
  return m;
}

Trade length6() {
  return Trade(6, KindSpec::extended(), words({"000000", "111100", "110011", "001111"}),
               words({"111111", "000011", "001100", "110000"}));
}

// Trade condition on the cliques {neighbours of an odd word} of the halved
// cube (all maximum cliques for n >= 6), counted directly.
bool clique_oracle(const Trade& t) {
  const int n = t.length();
  for (Mask x = 0; x < (Mask{1} << n); ++x) {
    if (popcount(x) % 2 == 0) continue;
    int a = 0, b = 0;
    for (int i = 0; i < n; ++i) {
      a += contains(t.t0(), x ^ (Mask{1} << i));
      b += contains(t.t1(), x ^ (Mask{1} << i));
    }
    if (a != b || a > 1) return false;
  }
  return true;
}

/// Replaces one T0 word by a word of the same weight parity outside the support.
Trade perturbed(const Trade& t, std::mt19937& rng, bool keep_weight) {
  std::vector<Mask> a(t.t0().begin(), t.t0().end());
  const WordSet u = t.support();
  const std::size_t i = rng() % a.size();
  while (true) {
    const Mask y = rng() & full_mask(t.length());
    if (contains(u, y)) continue;
    if (keep_weight ? popcount(y) != popcount(a[i]) : (popcount(y) ^ popcount(a[i])) & 1) continue;
    a[i] = y;
    return Trade(t.length(), t.kind(), a, t.t1());
  }
}

std::vector<Trade> all_extended_fixture_trades() {
  std::vector<Trade> out;
  for (const auto& f : all_fixtures())
    if (f.trade && f.kind.kind == TradeKind::Extended) out.push_back(*f.trade);
  return out;
}

}  // namespace

TEST(Trade, ConstructionRejectsDegenerateInput) {
  const auto t0 = words({"000000", "111100"});
  EXPECT_THROW(Trade(6, KindSpec::extended(), t0, t0), TradeError);
  EXPECT_THROW(Trade(6, KindSpec::extended(), t0, words({"111111"})), TradeError);
  EXPECT_THROW(Trade(6, KindSpec::extended(), {}, {}), TradeError);
  EXPECT_THROW(Trade(4, KindSpec::extended(), words({"0000"}), {0x30}), TradeError);
}

TEST(VerifyExtended, LengthSixTrade) {
  EXPECT_TRUE(verify_extended(length6()).valid);
  EXPECT_TRUE(verify_extended(Trade(2, KindSpec::extended(), {0}, {3})).valid);
  const Trade bad(6, KindSpec::extended(), words({"000000", "110100", "110011", "001111"}),
                  words({"111111", "000011", "001100", "110000"}));
  const auto r = verify_extended(bad);
  EXPECT_FALSE(r.valid);
  EXPECT_FALSE(r.violations.empty());
}

TEST(VerifyExtended, AgreesWithCliqueCounting) {
  std::mt19937 rng(11);
  std::vector<Trade> samples = all_extended_fixture_trades();
  samples.push_back(length6());
  const std::size_t base = samples.size();
  for (std::size_t i = 0; i < base; ++i)
    if (samples[i].length() <= 10) samples.push_back(perturbed(samples[i], rng, false));
  for (int n : {6, 8, 10}) {
    for (int k = 0; k < 300; ++k) {
      std::set<Mask> used;
      const int sz = 1 + static_cast<int>(rng() % 5);
      std::vector<Mask> a, b;
      while (static_cast<int>(a.size() + b.size()) < 2 * sz) {
        Mask x = rng() & full_mask(n);
        if (popcount(x) % 2 || !used.insert(x).second) continue;
        (a.size() < static_cast<std::size_t>(sz) ? a : b).push_back(x);
      }
      samples.emplace_back(n, KindSpec::extended(), a, b);
    }
  }
  int valid = 0;
  for (const auto& s : samples) {
    if (s.length() > 10) continue;
    EXPECT_EQ(verify_extended(s).valid, clique_oracle(s));
    valid += clique_oracle(s);
  }
  EXPECT_GT(valid, 10);
}

TEST(Verify1Perfect, PunctureOfLengthSix) {
  const Trade p = puncture(length6(), 5);
  EXPECT_EQ(p.kind().kind, TradeKind::OnePerfect);
  // direct ball check over all 32 centres
  for (Mask c = 0; c < 32; ++c) {
    int a = contains(p.t0(), c), b = contains(p.t1(), c);
    for (int i = 0; i < 5; ++i) {
      a += contains(p.t0(), c ^ (Mask{1} << i));
      b += contains(p.t1(), c ^ (Mask{1} << i));
    }
    EXPECT_EQ(a, b);
    EXPECT_LE(a, 1);
  }
  EXPECT_TRUE(verify_1perfect(p).valid);
  std::vector<Mask> t1(p.t1().begin(), p.t1().end());
  t1.back() ^= 0x10;
  if (!contains(p.t0(), t1.back())) EXPECT_FALSE(verify_1perfect(Trade(5, p.kind(), p.t0(), t1)).valid);
  EXPECT_THROW(verify_1perfect(length6()), TradeError);
}

TEST(VerifySteiner, TripleSystemTrade) {
  const Trade s(6, KindSpec::steiner(3), {block("012"), block("034"), block("135"), block("245")},
                {block("013"), block("024"), block("125"), block("345")});
  EXPECT_TRUE(verify_steiner(s).valid);
  const Trade bad(6, KindSpec::steiner(3), {block("012"), block("034"), block("135"), block("245")},
                  {block("013"), block("024"), block("125"), block("234")});
  EXPECT_FALSE(verify_steiner(bad).valid);
  EXPECT_THROW(verify_steiner(Trade(6, KindSpec::steiner(3), {block("01")}, {block("23")})), TradeError);
}

TEST(VerifySteiner, ConstantWeightExtendedEquivalenceExhaustiveLengthFour) {
  // every pair of disjoint equal-size sets of weight-2 words of length 4
  std::vector<Mask> w2;
  for (Mask x = 0; x < 16; ++x)
    if (popcount(x) == 2) w2.push_back(x);
  int checked = 0, valid = 0;
  for (int code = 0; code < 729; ++code) {
    std::vector<Mask> a, b;
    int c = code;
    for (Mask x : w2) {
      if (c % 3 == 1) a.push_back(x);
      if (c % 3 == 2) b.push_back(x);
      c /= 3;
    }
    if (a.empty() || a.size() != b.size()) continue;
    const Trade e(4, KindSpec::extended(), a, b);
    EXPECT_EQ(verify_extended(e).valid, verify_steiner(e.with_kind(KindSpec::steiner(2))).valid);
    ++checked;
    valid += verify_extended(e).valid;
  }
  EXPECT_GT(checked, 100);
  EXPECT_GT(valid, 0);
}

TEST(VerifySteiner, ConstantWeightExtendedEquivalenceOnFixtures) {
  std::mt19937 rng(3);
  int seen = 0;
  for (const auto& t : all_extended_fixture_trades()) {
    const int h = t.length() / 2;
    bool cw = true;
    for (Mask w : t.support()) cw = cw && popcount(w) == h;
    if (!cw) continue;
    ++seen;
    EXPECT_TRUE(verify_steiner(t.with_kind(KindSpec::steiner(h))).valid);
    const Trade p = perturbed(t, rng, true);
    EXPECT_EQ(verify_extended(p).valid, verify_steiner(p.with_kind(KindSpec::steiner(h))).valid);
  }
  EXPECT_EQ(seen, 28);
}

TEST(Primary, ConnectedTradeGraph) {
  EXPECT_TRUE(is_primary(length6()));
  for (const auto& f : trade_fixtures("length10.txt")) EXPECT_TRUE(is_primary(*f.trade)) << f.id;
  // two far-apart translates of a length-10 trade
  const Trade t = *load_fixture("T16").trade;
  int found = 0;
  for (Mask x = 1; x < 1024; ++x) {
    if (popcount(x) % 2) continue;
    bool apart = true;
    for (Mask w : t.support())
      for (Mask v : translate(t.support(), x)) apart = apart && popcount(w ^ v) > 2;
    if (!apart) continue;
    const Trade u(10, t.kind(), set_union(t.t0(), translate(t.t0(), x)), set_union(t.t1(), translate(t.t1(), x)));
    ASSERT_TRUE(is_valid(u));
    ++found;
    EXPECT_FALSE(is_primary(u));
  }
  EXPECT_GT(found, 0);
  EXPECT_THROW(is_primary(Trade(6, KindSpec::extended(), {0}, {3})), TradeError);
}

TEST(ComplementSymmetry, FollowsLengthModFour) {
  for (const auto& t : all_extended_fixture_trades()) {
    const auto want = t.length() % 4 == 2 ? ComplementSymmetry::SwapsParts : ComplementSymmetry::FixesParts;
    EXPECT_EQ(complement_symmetry(t), want) << format_trade(t);
  }
  EXPECT_EQ(complement_symmetry(*load_fixture("pp1").trade), ComplementSymmetry::FixesParts);
  EXPECT_EQ(complement_symmetry(*load_fixture("pp2").trade), ComplementSymmetry::FixesParts);
  EXPECT_EQ(complement_symmetry(Trade(6, KindSpec::extended(), {0}, {3})), ComplementSymmetry::Neither);
}

TEST(Eigenfunction, HoldsOnTradesAndFailsOnPerturbations) {
  EXPECT_TRUE(is_eigenfunction(length6(), Ambient::HalvedCube, -3));
  EXPECT_TRUE(is_eigenfunction(Trade(2, KindSpec::extended(), {0}, {3}), Ambient::Hypercube, 0));
  EXPECT_TRUE(eigenfunction_check(puncture(length6(), 0)));
  EXPECT_TRUE(is_eigenfunction(*load_fixture("T16").trade, Ambient::Hypercube, 0));
  std::mt19937 rng(9);
  for (const auto& t : all_extended_fixture_trades()) {
    EXPECT_TRUE(eigenfunction_check(t));
    EXPECT_FALSE(eigenfunction_check(perturbed(t, rng, false)));
  }
  for (const auto& f : trade_fixtures("sts_length10.txt")) EXPECT_TRUE(eigenfunction_check(*f.trade)) << f.id;
}

TEST(ParityExtension, InverseOfPuncturing) {
  for (const auto& t : all_extended_fixture_trades()) {
    const int n = t.length();
    if (n < 4) continue;
    const Trade p = puncture(t, n - 1);
    EXPECT_TRUE(verify_1perfect(p).valid);
    EXPECT_EQ(extend_parity(p), t);
  }
  const Trade p = puncture(length6(), 5);
  for (Mask w : extend_parity(p).support()) EXPECT_EQ(popcount(w) % 2, 0);
  EXPECT_THROW(puncture(length6(), 6), TradeError);
}

TEST(Kernel, PrintedFormOfT16) {
  const Fixture& f = load_fixture("T16");
  const WordSet t0 = f.as_printed ? f.as_printed->t0() : f.trade->t0();
  const auto k = kernel_decomposition(t0, 10);
  EXPECT_EQ(k.kernel.size(), 16U);
  EXPECT_EQ(span_of(k.kernel_basis),
            span_of(words({"0000001111", "0000110011", "0011000011", "1100000011"})));
  EXPECT_EQ(k.representatives, words({"0101010101"}));
}

TEST(Kernel, DecompositionReproducesTheSet) {
  const auto single = kernel_decomposition({0x5}, 4);
  EXPECT_EQ(single.kernel, WordSet{0});
  EXPECT_EQ(single.representatives, WordSet{0x5});
  const WordSet lin = span_of({0x3, 0xc});
  const auto l = kernel_decomposition(lin, 4);
  EXPECT_EQ(l.kernel, lin);
  EXPECT_EQ(l.representatives, WordSet{0});
  for (const auto& t : all_extended_fixture_trades()) {
    const auto k = kernel_decomposition(t.t0(), t.length());
    EXPECT_EQ(k.kernel.size() * k.representatives.size(), t.t0().size());
    std::vector<Mask> sum;
    for (Mask a : k.kernel)
      for (Mask r : k.representatives) sum.push_back(a ^ r);
    EXPECT_EQ(make_word_set(sum), t.t0());
  }
}

TEST(Girth, KnownValues) {
  EXPECT_EQ(girth(*load_fixture("110b").trade), std::optional<int>(6));
  EXPECT_EQ(girth(*load_fixture("T16").trade), std::optional<int>(4));
  EXPECT_EQ(girth(Trade(2, KindSpec::extended(), {0}, {3})), std::nullopt);
}

TEST(TextFormat, RoundTrip) {
  std::ostringstream os;
  std::vector<Trade> ts;
  for (const auto& t : all_extended_fixture_trades()) {
    ts.push_back(t);
    os << format_trade(t) << '\n';
  }
  std::istringstream is(os.str());
  EXPECT_EQ(read_all_trades(is), ts);
  const Fixture& f = load_fixture("110a");
  const KWayTrade k = f.kway();
  std::istringstream ks(format_kway(k));
  auto back = read_kway(ks);
  ASSERT_TRUE(back);
  EXPECT_EQ(back->parts(), k.parts());
  EXPECT_THROW(parse_trade("trade n=4 kind=ext vol=2\n0000\n---\n1100\n"), TradeError);
  EXPECT_THROW(parse_trade("trade n=4 kind=ext vol=1\n000\n---\n1100\n"), TradeError);
}
