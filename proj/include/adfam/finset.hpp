#pragma once

// Finite subsets of the non-negative integers as dynamic bitsets. All set
// algebra used by the library routes through this type so that semantics
// (and iteration order: ascending) are fixed in one place.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace adfam {

class horizon_error : public std::runtime_error {
 public:
  explicit horizon_error(const std::string& what) : std::runtime_error(what) {}
};

class FinSet {
 public:
  // A set may carry the ground interval [0, H) it lives in; kFreeHorizon
  // marks context-free sets. Algebra merges stamps permissively (max);
  // operations that require one shared ground interval check explicitly.
  static constexpr int kFreeHorizon = -1;

  FinSet() = default;
  FinSet(std::initializer_list<int> xs) {
    for (int x : xs) insert(x);
  }
  static FinSet interval(int lo, int hi) {  // [lo, hi)
    FinSet s;
    for (int x = std::max(lo, 0); x < hi; ++x) s.insert(x);
    return s;
  }
  static FinSet from_sorted(const std::vector<int>& xs) {
    FinSet s;
    for (int x : xs) s.insert(x);
    return s;
  }

  int horizon() const { return horizon_; }
  FinSet with_horizon(int H) const {
    if (H < 1) throw horizon_error("horizon must be positive");
    if (!empty() && max() >= H)
      throw horizon_error("element " + std::to_string(max()) + " outside ground interval [0, " +
                          std::to_string(H) + ")");
    FinSet r = *this;
    r.horizon_ = H;
    return r;
  }

  void insert(int x) {
    if (x < 0) throw std::out_of_range("FinSet element must be non-negative");
    if (horizon_ != kFreeHorizon && x >= horizon_)
      throw horizon_error("element " + std::to_string(x) + " outside ground interval [0, " +
                          std::to_string(horizon_) + ")");
    size_t w = static_cast<size_t>(x) >> 6;
    if (w >= words_.size()) words_.resize(w + 1, 0);
    words_[w] |= (uint64_t(1) << (x & 63));
  }
  void erase(int x) {
    if (x < 0) return;
    size_t w = static_cast<size_t>(x) >> 6;
    if (w < words_.size()) words_[w] &= ~(uint64_t(1) << (x & 63));
  }
  bool contains(int x) const {
    if (x < 0) return false;
    size_t w = static_cast<size_t>(x) >> 6;
    return w < words_.size() && (words_[w] >> (x & 63)) & 1;
  }

  bool empty() const {
    for (uint64_t w : words_)
      if (w) return false;
    return true;
  }
  int size() const {
    int n = 0;
    for (uint64_t w : words_) n += std::popcount(w);
    return n;
  }
  int min() const {
    for (size_t i = 0; i < words_.size(); ++i)
      if (words_[i]) return static_cast<int>(i * 64 + std::countr_zero(words_[i]));
    throw std::logic_error("min of empty FinSet");
  }
  int max() const {
    for (size_t i = words_.size(); i-- > 0;)
      if (words_[i]) return static_cast<int>(i * 64 + 63 - std::countl_zero(words_[i]));
    throw std::logic_error("max of empty FinSet");
  }

  friend FinSet operator|(const FinSet& a, const FinSet& b) {
    FinSet r;
    r.horizon_ = std::max(a.horizon_, b.horizon_);
    r.words_.resize(std::max(a.words_.size(), b.words_.size()), 0);
    for (size_t i = 0; i < r.words_.size(); ++i) {
      uint64_t wa = i < a.words_.size() ? a.words_[i] : 0;
      uint64_t wb = i < b.words_.size() ? b.words_[i] : 0;
      r.words_[i] = wa | wb;
    }
    return r;
  }
  friend FinSet operator&(const FinSet& a, const FinSet& b) {
    FinSet r;
    r.horizon_ = std::max(a.horizon_, b.horizon_);
    r.words_.resize(std::min(a.words_.size(), b.words_.size()), 0);
    for (size_t i = 0; i < r.words_.size(); ++i) r.words_[i] = a.words_[i] & b.words_[i];
    return r;
  }
  friend FinSet operator-(const FinSet& a, const FinSet& b) {  // set difference
    FinSet r = a;
    r.horizon_ = std::max(a.horizon_, b.horizon_);
    for (size_t i = 0; i < std::min(a.words_.size(), b.words_.size()); ++i)
      r.words_[i] &= ~b.words_[i];
    return r;
  }
  friend FinSet operator^(const FinSet& a, const FinSet& b) {
    FinSet r;
    r.horizon_ = std::max(a.horizon_, b.horizon_);
    r.words_.resize(std::max(a.words_.size(), b.words_.size()), 0);
    for (size_t i = 0; i < r.words_.size(); ++i) {
      uint64_t wa = i < a.words_.size() ? a.words_[i] : 0;
      uint64_t wb = i < b.words_.size() ? b.words_[i] : 0;
      r.words_[i] = wa ^ wb;
    }
    return r;
  }
  FinSet& operator|=(const FinSet& b) { return *this = *this | b; }
  FinSet& operator&=(const FinSet& b) { return *this = *this & b; }
  FinSet& operator-=(const FinSet& b) { return *this = *this - b; }

  bool intersects(const FinSet& b) const {
    size_t n = std::min(words_.size(), b.words_.size());
    for (size_t i = 0; i < n; ++i)
      if (words_[i] & b.words_[i]) return true;
    return false;
  }
  bool subset_of(const FinSet& b) const {
    for (size_t i = 0; i < words_.size(); ++i) {
      uint64_t wb = i < b.words_.size() ? b.words_[i] : 0;
      if (words_[i] & ~wb) return false;
    }
    return true;
  }
  friend bool operator==(const FinSet& a, const FinSet& b) { return !(a != b); }
  friend bool operator!=(const FinSet& a, const FinSet& b) {
    size_t n = std::max(a.words_.size(), b.words_.size());
    for (size_t i = 0; i < n; ++i) {
      uint64_t wa = i < a.words_.size() ? a.words_[i] : 0;
      uint64_t wb = i < b.words_.size() ? b.words_[i] : 0;
      if (wa != wb) return true;
    }
    return false;
  }
  friend bool operator<(const FinSet& a, const FinSet& b) {  // by ascending element list
    auto ea = a.elements(), eb = b.elements();
    return std::lexicographical_compare(ea.begin(), ea.end(), eb.begin(), eb.end());
  }

  // Restriction to [0, m).
  FinSet below(int m) const {
    FinSet r = *this;
    if (m <= 0) return FinSet();
    size_t w = static_cast<size_t>(m) >> 6;
    if (w < r.words_.size()) {
      int bit = m & 63;
      r.words_[w] &= bit ? ((uint64_t(1) << bit) - 1) : 0;
      r.words_.resize(w + (bit ? 1 : 0));
    }
    return r;
  }
  // Restriction to [m, infinity).
  FinSet from(int m) const { return *this - below(m); }

  std::vector<int> elements() const {
    std::vector<int> out;
    for (size_t i = 0; i < words_.size(); ++i) {
      uint64_t w = words_[i];
      while (w) {
        int b = std::countr_zero(w);
        out.push_back(static_cast<int>(i * 64) + b);
        w &= w - 1;
      }
    }
    return out;
  }

  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for (int x : elements()) {
      if (!first) s += ",";
      s += std::to_string(x);
      first = false;
    }
    return s + "}";
  }

  size_t hash() const {
    size_t h = 0xcbf29ce484222325ULL;
    for (size_t i = 0; i < words_.size(); ++i) {
      if (!words_[i]) continue;  // trailing zero words must not affect the hash
      h ^= i + 0x100;
      h *= 0x100000001b3ULL;
      h ^= static_cast<size_t>(words_[i]);
      h *= 0x100000001b3ULL;
    }
    return h;
  }

 private:
  std::vector<uint64_t> words_;
  int horizon_ = kFreeHorizon;
};

struct FinSetHash {
  size_t operator()(const FinSet& s) const { return s.hash(); }
};

}  // namespace adfam
