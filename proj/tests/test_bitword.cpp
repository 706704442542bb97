#include <gtest/gtest.h>

#include <random>

#include "xtrade/word.hpp"

using namespace xtrade;

namespace {

Word W(const char* s) { return Word::parse(s); }

GraphAutomorphism random_aut(int n, std::mt19937& rng) {
  std::vector<int> img(n);
  std::iota(img.begin(), img.end(), 0);
  std::shuffle(img.begin(), img.end(), rng);
  return {CoordPermutation(img), Word(rng() & full_mask(n), n), false};
}

}  // namespace

TEST(Word, ParseAndPrintUseLeftmostCoordinateZero) {
  const Word w = W("1000000000");
  EXPECT_EQ(w.bits(), 1U);
  EXPECT_EQ(w.length(), 10);
  EXPECT_EQ(W("0101 0101 01").str(), "0101010101");
  EXPECT_THROW(W("0102"), TradeError);
  EXPECT_THROW(W(""), TradeError);
  EXPECT_THROW(Word(0x10, 4), TradeError);
}

TEST(Word, Weight) {
  EXPECT_EQ(weight(W("0000000000")), 0);
  EXPECT_EQ(weight(W("0101010101")), 5);
  EXPECT_EQ(weight(W("000001011111")), 6);
}

TEST(Word, HammingDistance) {
  EXPECT_EQ(hamming_distance(W("000000"), W("111100")), 4);
  EXPECT_EQ(hamming_distance(W("110011"), W("110011")), 0);
  EXPECT_EQ(hamming_distance(zero_word(9), ones_word(9)), 9);
  EXPECT_THROW(hamming_distance(W("00"), W("000")), TradeError);
  std::mt19937 rng(1);
  for (int k = 0; k < 200; ++k) {
    Word x(rng() & 0xfff, 12), y(rng() & 0xfff, 12);
    EXPECT_EQ(hamming_distance(x, y), weight(x ^ y));
  }
}

TEST(Word, Complement) {
  EXPECT_EQ(complement(W("0000001111")).str(), "1111110000");
  EXPECT_EQ(complement(W("000000111111")).str(), "111111000000");
  const Word w = W("1011001");
  EXPECT_EQ(complement(complement(w)), w);
}

TEST(Word, HalvedNeighborsAgainstBruteForce) {
  const auto n4 = halved_neighbors(W("0000"));
  std::vector<std::string> s;
  for (const auto& w : n4) s.push_back(w.str());
  // ascending bitmask: 1100 (3), 1010 (5), 0110 (6), 1001 (9), 0101 (10), 0011 (12)
  EXPECT_EQ(s, (std::vector<std::string>{"1100", "1010", "0110", "1001", "0101", "0011"}));
  EXPECT_EQ(halved_neighbors(W("0110100111")).size(), 45U);
  const Word w = W("111100");
  std::vector<Word> brute;
  for (Mask x = 0; x < 64; ++x)
    if (popcount(x ^ w.bits()) == 2) brute.emplace_back(x, 6);
  EXPECT_EQ(halved_neighbors(w), brute);
  for (const auto& v : halved_neighbors(w)) EXPECT_EQ(weight(v) % 2, weight(w) % 2);
}

TEST(Word, JohnsonNeighborsAgainstBruteForce) {
  const Word a = W("000000111111");
  const auto nb = johnson_neighbors(a);
  EXPECT_EQ(nb.size(), 36U);
  std::vector<Word> brute;
  for (Mask x = 0; x < 4096; ++x)
    if (popcount(x) == 6 && popcount(x ^ a.bits()) == 2) brute.emplace_back(x, 12);
  EXPECT_EQ(nb, brute);
  EXPECT_NE(std::find(nb.begin(), nb.end(), W("000001111110")), nb.end());
  EXPECT_EQ(std::find(nb.begin(), nb.end(), a), nb.end());
  EXPECT_EQ(johnson_neighbors(W("1100000")).size(), 10U);
}

TEST(Permutation, CyclesUseHexLikeLabels) {
  const auto p = CoordPermutation::from_cycles("(0b)(1a)(25)", 12);
  EXPECT_EQ(p[0], 11);
  EXPECT_EQ(p[10], 1);
  EXPECT_EQ(p[3], 3);
  EXPECT_EQ(p.apply(W("100000000000").bits()), W("000000000001").bits());
  EXPECT_TRUE((p * p).is_identity());
  EXPECT_THROW(CoordPermutation({0, 0, 1}), TradeError);
}

TEST(Automorphism, ApplyIsPermuteThenTranslate) {
  const GraphAutomorphism id = GraphAutomorphism::identity(6);
  EXPECT_EQ(apply(id, W("101100")), W("101100"));
  const Word w = W("110101");
  const GraphAutomorphism tr{CoordPermutation::identity(6), w, false};
  EXPECT_EQ(apply(tr, w), zero_word(6));
  const GraphAutomorphism g{CoordPermutation::from_cycles("(01)", 6), W("001000"), false};
  EXPECT_EQ(apply(g, W("100000")).str(), "011000");
}

TEST(Automorphism, GroupLawAndDistancePreservation) {
  std::mt19937 rng(5);
  for (int k = 0; k < 100; ++k) {
    const int n = 4 + static_cast<int>(rng() % 9);
    const auto g = random_aut(n, rng);
    const auto h = random_aut(n, rng);
    const Word x(rng() & full_mask(n), n), y(rng() & full_mask(n), n);
    EXPECT_EQ(apply(g, apply(g.inverse(), x)), x);
    EXPECT_EQ(apply(g * h, x), apply(g, apply(h, x)));
    EXPECT_EQ(hamming_distance(apply(g, x), apply(g, y)), hamming_distance(x, y));
  }
}
