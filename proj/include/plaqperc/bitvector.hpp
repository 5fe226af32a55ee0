#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace plaqperc {

// Fixed-length packed bit vector. Bit i lives in word i / 64 at position i % 64.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t n, bool value = false)
      : size_(n), words_((n + 63) / 64, value ? ~std::uint64_t{0} : 0) {
    trim();
  }

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  bool operator[](std::size_t i) const { return test(i); }

  void set(std::size_t i, bool value = true) {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }
  void reset(std::size_t i) { set(i, false); }
  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool any() const {
    for (auto w : words_)
      if (w) return true;
    return false;
  }
  bool none() const { return !any(); }

  BitVector operator~() const {
    BitVector r = *this;
    for (auto& w : r.words_) w = ~w;
    r.trim();
    return r;
  }
  BitVector& operator|=(const BitVector& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  BitVector& operator&=(const BitVector& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  BitVector& operator^=(const BitVector& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
    return *this;
  }
  BitVector& subtract(const BitVector& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }
  friend BitVector operator|(BitVector a, const BitVector& b) { return a |= b; }
  friend BitVector operator&(BitVector a, const BitVector& b) { return a &= b; }
  friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }

  // True if every set bit of *this is also set in o.
  bool is_subset_of(const BitVector& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }

  friend bool operator==(const BitVector&, const BitVector&) = default;

  const std::vector<std::uint64_t>& words() const { return words_; }

  template <typename F>
  void for_each_set(F&& f) const {
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
      std::uint64_t w = words_[wi];
      while (w) {
        const int b = std::countr_zero(w);
        f(wi * 64 + static_cast<std::size_t>(b));
        w &= w - 1;
      }
    }
  }

  std::vector<std::size_t> set_indices() const {
    std::vector<std::size_t> out;
    out.reserve(count());
    for_each_set([&](std::size_t i) { out.push_back(i); });
    return out;
  }

 private:
  void trim() {
    if (size_ % 64 != 0 && !words_.empty())
      words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
  }

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace plaqperc
