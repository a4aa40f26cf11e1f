#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace dconvex {

using VertexId = std::uint32_t;

inline constexpr VertexId kNoVertex = static_cast<VertexId>(-1);

// Set of vertex indices in [0, universe_size), stored as a bitset.
// All binary operations require both operands to share the same universe.
class VertexSet {
 public:
  VertexSet() = default;

  explicit VertexSet(std::size_t universe_size)
      : universe_(universe_size), words_((universe_size + 63) / 64, 0) {}

  static VertexSet of(std::size_t universe_size,
                      std::initializer_list<VertexId> members) {
    VertexSet s(universe_size);
    for (VertexId v : members) s.insert(v);
    return s;
  }

  static VertexSet full(std::size_t universe_size) {
    VertexSet s(universe_size);
    for (std::size_t i = 0; i < s.words_.size(); ++i) s.words_[i] = ~0ull;
    s.trim();
    return s;
  }

  std::size_t universe_size() const { return universe_; }

  bool contains(VertexId v) const {
    return v < universe_ && (words_[v >> 6] >> (v & 63)) & 1u;
  }

  void insert(VertexId v) {
    check_index(v);
    words_[v >> 6] |= 1ull << (v & 63);
  }

  void erase(VertexId v) {
    check_index(v);
    words_[v >> 6] &= ~(1ull << (v & 63));
  }

  void clear() {
    for (auto& w : words_) w = 0;
  }

  std::size_t size() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  bool empty() const {
    for (auto w : words_) {
      if (w) return false;
    }
    return true;
  }

  // Smallest member, or kNoVertex when empty.
  VertexId first() const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (words_[i]) {
        return static_cast<VertexId>(i * 64 +
                                     std::countr_zero(words_[i]));
      }
    }
    return kNoVertex;
  }

  VertexSet& operator|=(const VertexSet& o) {
    check_universe(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }

  VertexSet& operator&=(const VertexSet& o) {
    check_universe(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }

  VertexSet& operator-=(const VertexSet& o) {
    check_universe(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }

  friend VertexSet operator|(VertexSet a, const VertexSet& b) { return a |= b; }
  friend VertexSet operator&(VertexSet a, const VertexSet& b) { return a &= b; }
  friend VertexSet operator-(VertexSet a, const VertexSet& b) { return a -= b; }

  VertexSet complement() const {
    VertexSet r = full(universe_);
    r -= *this;
    return r;
  }

  bool is_subset_of(const VertexSet& o) const {
    check_universe(o);
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (words_[i] & ~o.words_[i]) return false;
    }
    return true;
  }

  bool intersects(const VertexSet& o) const {
    check_universe(o);
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (words_[i] & o.words_[i]) return true;
    }
    return false;
  }

  friend bool operator==(const VertexSet& a, const VertexSet& b) {
    return a.universe_ == b.universe_ && a.words_ == b.words_;
  }

  // Visits members in ascending order.
  template <class F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w) {
        const int b = std::countr_zero(w);
        f(static_cast<VertexId>(i * 64 + b));
        w &= w - 1;
      }
    }
  }

  std::vector<VertexId> to_vector() const {
    std::vector<VertexId> out;
    out.reserve(size());
    for_each([&](VertexId v) { out.push_back(v); });
    return out;
  }

 private:
  void check_index(VertexId v) const {
    if (v >= universe_) {
      throw std::out_of_range("vertex index " + std::to_string(v) +
                              " out of range for universe of size " +
                              std::to_string(universe_));
    }
  }

  void check_universe(const VertexSet& o) const {
    if (universe_ != o.universe_) {
      throw std::logic_error("vertex sets over different universes (" +
                             std::to_string(universe_) + " vs " +
                             std::to_string(o.universe_) + ")");
    }
  }

  void trim() {
    if (universe_ % 64 != 0 && !words_.empty()) {
      words_.back() &= (1ull << (universe_ % 64)) - 1;
    }
  }

  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace dconvex
