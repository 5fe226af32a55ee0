#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace plaqperc {

// Disjoint-set forest with path halving and union by size.
class UnionFind {
 public:
  UnionFind() = default;
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1), components_(n) {
    std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
  }

  std::size_t size() const { return parent_.size(); }
  std::size_t components() const { return components_; }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    --components_;
    return true;
  }

  bool same(std::uint32_t a, std::uint32_t b) { return find(a) == find(b); }

  // Dense component labels 0..k-1, numbered by first occurrence.
  std::vector<std::uint32_t> labels() {
    std::vector<std::uint32_t> root_label(parent_.size(), UINT32_MAX);
    std::vector<std::uint32_t> out(parent_.size());
    std::uint32_t next = 0;
    for (std::uint32_t i = 0; i < parent_.size(); ++i) {
      const std::uint32_t r = find(i);
      if (root_label[r] == UINT32_MAX) root_label[r] = next++;
      out[i] = root_label[r];
    }
    return out;
  }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
  std::size_t components_ = 0;
};

}  // namespace plaqperc
