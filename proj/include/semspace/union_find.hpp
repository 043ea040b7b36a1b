#pragma once

#include <numeric>
#include <vector>

namespace semspace {

/// Disjoint sets with path halving and union by smaller root index, so the
/// representative of every set is its smallest member.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

  std::size_t components() {
    std::size_t count = 0;
    for (std::size_t i = 0; i < parent_.size(); ++i) count += find(i) == i ? 1 : 0;
    return count;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace semspace
