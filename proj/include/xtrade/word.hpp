// Binary words of length n <= 16 packed into a bitmask.
//
// Coordinate i of the usual left-to-right string notation is bit i of the
// mask, so "1100" has bits 0 and 1 set (mask 0x3).

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace xtrade {

inline constexpr int kMaxLength = 16;

using Mask = std::uint32_t;

class TradeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr Mask full_mask(int n) { return n >= 32 ? ~Mask{0} : ((Mask{1} << n) - 1); }

inline int popcount(Mask m) { return std::popcount(m); }

/// A binary word of fixed length. Immutable value type.
class Word {
 public:
  constexpr Word() = default;
  constexpr Word(Mask bits, int n) : bits_(bits), n_(static_cast<std::uint8_t>(n)) {
    if (n < 1 || n > kMaxLength) throw TradeError("word length out of range: " + std::to_string(n));
    if ((bits & ~full_mask(n)) != 0) throw TradeError("word has bits beyond its length");
  }

  /// Parses "0101 10" style text; spaces are ignored.
  static Word parse(std::string_view text) {
    Mask bits = 0;
    int n = 0;
    for (char c : text) {
      if (c == ' ' || c == '\t' || c == '_') continue;
      if (c != '0' && c != '1') throw TradeError("bad character in word: '" + std::string(text) + "'");
      if (n >= kMaxLength) throw TradeError("word too long: '" + std::string(text) + "'");
      if (c == '1') bits |= Mask{1} << n;
      ++n;
    }
    if (n == 0) throw TradeError("empty word");
    return Word(bits, n);
  }

  constexpr Mask bits() const { return bits_; }
  constexpr int length() const { return n_; }
  bool bit(int i) const { return (bits_ >> i) & 1U; }

  std::string str() const {
    std::string s(n_, '0');
    for (int i = 0; i < n_; ++i)
      if (bit(i)) s[i] = '1';
    return s;
  }

  friend constexpr bool operator==(const Word&, const Word&) = default;
  friend constexpr auto operator<=>(const Word& a, const Word& b) {
    if (a.n_ != b.n_) return a.n_ <=> b.n_;
    return a.bits_ <=> b.bits_;
  }

  Word operator^(const Word& o) const {
    check_same(o);
    return Word(bits_ ^ o.bits_, n_);
  }

  void check_same(const Word& o) const {
    if (n_ != o.n_) throw TradeError("length mismatch between words");
  }

 private:
  Mask bits_ = 0;
  std::uint8_t n_ = 1;
};

inline int weight(const Word& w) { return popcount(w.bits()); }

inline int hamming_distance(const Word& x, const Word& y) {
  x.check_same(y);
  return popcount(x.bits() ^ y.bits());
}

inline Word complement(const Word& w) { return Word(w.bits() ^ full_mask(w.length()), w.length()); }

inline Word zero_word(int n) { return Word(0, n); }
inline Word ones_word(int n) { return Word(full_mask(n), n); }

/// Words at Hamming distance 2, ascending by mask.
inline std::vector<Word> halved_neighbors(const Word& w) {
  const int n = w.length();
  std::vector<Word> out;
  out.reserve(n * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out.emplace_back(w.bits() ^ (Mask{1} << i) ^ (Mask{1} << j), n);
  std::sort(out.begin(), out.end());
  return out;
}

/// Same-weight words at Hamming distance 2 (one 1<->0 swap), ascending by mask.
inline std::vector<Word> johnson_neighbors(const Word& w) {
  const int n = w.length();
  std::vector<Word> out;
  for (int i = 0; i < n; ++i) {
    if (!w.bit(i)) continue;
    for (int j = 0; j < n; ++j)
      if (!w.bit(j)) out.emplace_back(w.bits() ^ (Mask{1} << i) ^ (Mask{1} << j), n);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Coordinate permutation; image[i] is where coordinate i is sent.
class CoordPermutation {
 public:
  CoordPermutation() = default;
  explicit CoordPermutation(std::vector<int> image) : image_(std::move(image)) {
    const int n = static_cast<int>(image_.size());
    if (n < 1 || n > kMaxLength) throw TradeError("permutation length out of range");
    Mask seen = 0;
    for (int v : image_) {
      if (v < 0 || v >= n || ((seen >> v) & 1U)) throw TradeError("not a permutation");
      seen |= Mask{1} << v;
    }
  }

  static CoordPermutation identity(int n) {
    std::vector<int> im(n);
    std::iota(im.begin(), im.end(), 0);
    return CoordPermutation(std::move(im));
  }

  /// Parses cycle notation such as "(0123456789a)(0b)" with a=10, b=11, ...
  static CoordPermutation from_cycles(std::string_view text, int n) {
    std::vector<int> im(n);
    std::iota(im.begin(), im.end(), 0);
    std::vector<int> cycle;
    bool open = false;
    auto close_cycle = [&] {
      for (std::size_t k = 0; k < cycle.size(); ++k) im[cycle[k]] = cycle[(k + 1) % cycle.size()];
      cycle.clear();
    };
    for (char c : text) {
      if (c == ' ') continue;
      if (c == '(') {
        if (open) throw TradeError("nested cycle");
        open = true;
      } else if (c == ')') {
        if (!open) throw TradeError("unbalanced cycle");
        close_cycle();
        open = false;
      } else {
        int v = -1;
        if (c >= '0' && c <= '9') v = c - '0';
        else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
        if (v < 0 || v >= n || !open) throw TradeError("bad cycle notation: " + std::string(text));
        cycle.push_back(v);
      }
    }
    if (open) throw TradeError("unterminated cycle");
    return CoordPermutation(std::move(im));
  }

  int size() const { return static_cast<int>(image_.size()); }
  int operator[](int i) const { return image_[i]; }
  std::span<const int> image() const { return image_; }

  Mask apply(Mask m) const {
    Mask out = 0;
    for (int i = 0; i < size(); ++i)
      if ((m >> i) & 1U) out |= Mask{1} << image_[i];
    return out;
  }
  Word apply(const Word& w) const {
    if (w.length() != size()) throw TradeError("permutation/word length mismatch");
    return Word(apply(w.bits()), w.length());
  }

  CoordPermutation inverse() const {
    std::vector<int> inv(image_.size());
    for (int i = 0; i < size(); ++i) inv[image_[i]] = i;
    return CoordPermutation(std::move(inv));
  }

  /// (a * b)(x) = a(b(x)): apply b first.
  friend CoordPermutation operator*(const CoordPermutation& a, const CoordPermutation& b) {
    std::vector<int> im(b.image_.size());
    for (int i = 0; i < b.size(); ++i) im[i] = a.image_[b.image_[i]];
    return CoordPermutation(std::move(im));
  }

  bool is_identity() const {
    for (int i = 0; i < size(); ++i)
      if (image_[i] != i) return false;
    return true;
  }

  std::string cycles() const {
    static constexpr char kDigits[] = "0123456789abcdefg";
    std::string out;
    std::vector<bool> done(image_.size(), false);
    for (int i = 0; i < size(); ++i) {
      if (done[i] || image_[i] == i) continue;
      out += '(';
      for (int j = i; !done[j]; j = image_[j]) {
        done[j] = true;
        out += kDigits[j];
      }
      out += ')';
    }
    return out.empty() ? "()" : out;
  }

  friend bool operator==(const CoordPermutation&, const CoordPermutation&) = default;

 private:
  std::vector<int> image_;
};

/// x -> perm(x) + translation.
struct GraphAutomorphism {
  CoordPermutation perm;
  Word translation;
  bool swaps_parts = false;

  static GraphAutomorphism identity(int n) { return {CoordPermutation::identity(n), zero_word(n), false}; }

  Word apply(const Word& w) const { return perm.apply(w) ^ translation; }
  Mask apply(Mask m) const { return perm.apply(m) ^ translation.bits(); }

  GraphAutomorphism inverse() const {
    CoordPermutation inv = perm.inverse();
    return {inv, inv.apply(translation), swaps_parts};
  }

  /// Composition: (a * b)(x) = a(b(x)).
  friend GraphAutomorphism operator*(const GraphAutomorphism& a, const GraphAutomorphism& b) {
    return {a.perm * b.perm, a.perm.apply(b.translation) ^ a.translation, a.swaps_parts != b.swaps_parts};
  }
};

inline Word apply(const GraphAutomorphism& g, const Word& w) { return g.apply(w); }

/// Number of weight-k words of length n.
inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace xtrade
