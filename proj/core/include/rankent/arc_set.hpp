#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rankent/permutation.hpp"

namespace rankent {

using Arc = std::pair<int, int>;  // (u, v) means u -> v, read "u beats v"

// Two disjoint, sorted, nonempty vertex lists.
struct BipartitePair {
  std::vector<int> left;
  std::vector<int> right;

  BipartitePair(std::vector<int> l, std::vector<int> r);
  int left_size() const { return static_cast<int>(left.size()); }
  int right_size() const { return static_cast<int>(right.size()); }
};

// A set of arcs over an explicit ground set. Arcs are loop-free, duplicate-free
// and kept sorted; every endpoint must lie in the ground set.
class ArcSet {
 public:
  ArcSet() = default;  // empty ground, no arcs
  ArcSet(std::vector<int> ground, std::vector<Arc> arcs);

  const std::vector<int>& ground() const { return ground_; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  std::size_t size() const { return arcs_.size(); }
  bool contains(int u, int v) const;
  bool ground_contains(int v) const;

 private:
  std::vector<int> ground_;  // sorted, unique
  std::vector<Arc> arcs_;    // sorted, unique
};

// Every arc reversed, same ground set.
ArcSet reverse(const ArcSet& d);

// Arcs of d going left -> right only; ground set shrinks to left u right.
ArcSet restrict_to(const ArcSet& d, const BipartitePair& pair);

// Agreement score of a ranking against an arc set:
//   sum over arcs (u,v) of +1 if sigma(u) < sigma(v), else -1.
// sigma must cover the ground set (sigma of [n] with ground within [n]).
int fit(const Permutation& sigma, const ArcSet& d);

// Arc density of d across pair.left x pair.right. Arcs must populate at most
// one direction (all left->right or all right->left); mixed directions are an
// error because a single number cannot summarize them.
double density(const ArcSet& d, const BipartitePair& pair);

// Positions that pair.right's images occupy when the images of
// left u right are merged and sorted: a right_size-subset of
// {1, ..., left_size + right_size}.
std::vector<int> relative_positions(const Permutation& sigma, const BipartitePair& pair);

}  // namespace rankent
