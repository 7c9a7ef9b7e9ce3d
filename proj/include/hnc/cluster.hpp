#pragma once

#include <array>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "hnc/errors.hpp"

namespace hnc {

// A subset of the label set {0..n-1}, stored as a fixed-width bitset so that
// union/intersection/difference cost O(n/word). Label arithmetic throughout
// the library is 0-based; the 1-based convention of the text formats is only
// applied at parse/print boundaries.
class Cluster {
 public:
  static constexpr int kMaxLabels = 256;

  constexpr Cluster() = default;

  static Cluster single(int label) {
    Cluster c;
    c.add(label);
    return c;
  }

  static Cluster full(int n) {
    check_label(n - 1);
    Cluster c;
    for (int w = 0; w < kWords; ++w) {
      int lo = w * 64;
      if (n <= lo) break;
      int bits = n - lo >= 64 ? 64 : n - lo;
      c.words_[w] = bits == 64 ? ~0ull : ((1ull << bits) - 1ull);
    }
    return c;
  }

  static Cluster of(std::initializer_list<int> labels) {
    Cluster c;
    for (int l : labels) c.add(l);
    return c;
  }

  void add(int label) {
    check_label(label);
    words_[label >> 6] |= 1ull << (label & 63);
  }

  void remove(int label) {
    check_label(label);
    words_[label >> 6] &= ~(1ull << (label & 63));
  }

  bool contains(int label) const {
    if (label < 0 || label >= kMaxLabels) return false;
    return (words_[label >> 6] >> (label & 63)) & 1ull;
  }

  bool empty() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }

  int count() const {
    int c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
  }

  // Smallest member label, -1 when empty.
  int lowest() const {
    for (int w = 0; w < kWords; ++w)
      if (words_[w]) return w * 64 + std::countr_zero(words_[w]);
    return -1;
  }

  bool subset_of(const Cluster& o) const {
    for (int w = 0; w < kWords; ++w)
      if (words_[w] & ~o.words_[w]) return false;
    return true;
  }

  bool disjoint(const Cluster& o) const {
    for (int w = 0; w < kWords; ++w)
      if (words_[w] & o.words_[w]) return false;
    return true;
  }

  friend Cluster operator|(const Cluster& a, const Cluster& b) {
    Cluster r;
    for (int w = 0; w < kWords; ++w) r.words_[w] = a.words_[w] | b.words_[w];
    return r;
  }

  friend Cluster operator&(const Cluster& a, const Cluster& b) {
    Cluster r;
    for (int w = 0; w < kWords; ++w) r.words_[w] = a.words_[w] & b.words_[w];
    return r;
  }

  // Set difference a \ b.
  friend Cluster operator-(const Cluster& a, const Cluster& b) {
    Cluster r;
    for (int w = 0; w < kWords; ++w) r.words_[w] = a.words_[w] & ~b.words_[w];
    return r;
  }

  bool operator==(const Cluster&) const = default;

  // Total order (high word first) used for canonical sorting and map keys.
  std::strong_ordering operator<=>(const Cluster& o) const {
    for (int w = kWords - 1; w >= 0; --w)
      if (words_[w] != o.words_[w])
        return words_[w] < o.words_[w] ? std::strong_ordering::less
                                       : std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  std::vector<int> labels() const {
    std::vector<int> out;
    out.reserve(count());
    for (int w = 0; w < kWords; ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        out.push_back(w * 64 + std::countr_zero(bits));
        bits &= bits - 1;
      }
    }
    return out;
  }

  // Diagnostic form with 1-based labels, e.g. "{1,3,5}".
  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for (int l : labels()) {
      if (!first) s += ",";
      s += std::to_string(l + 1);
      first = false;
    }
    return s + "}";
  }

  std::size_t hash() const {
    std::size_t h = 0xcbf29ce484222325ull;
    for (auto w : words_) {
      h ^= w;
      h *= 0x100000001b3ull;
    }
    return h;
  }

 private:
  static constexpr int kWords = kMaxLabels / 64;

  static void check_label(int label) {
    if (label < 0 || label >= kMaxLabels)
      throw DomainError("cluster label out of range [0," +
                        std::to_string(kMaxLabels) + "): " +
                        std::to_string(label));
  }

  std::array<std::uint64_t, kWords> words_{};
};

}  // namespace hnc
