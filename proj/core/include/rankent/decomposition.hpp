#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "rankent/regularity.hpp"
#include "rankent/tournament.hpp"

namespace rankent {

enum class NodeRole { root, left, right, rest };

struct TreeNode {
  int id = 0;      // 1-based, creation (BFS) order
  int parent = 0;  // 0 for the root
  NodeRole role = NodeRole::root;
  int depth = 0;
  std::vector<int> vertices;  // sorted

  bool internal = false;  // true when the node was split
  int child_left = 0, child_right = 0, child_rest = 0;  // node ids, 0 = absent
  ArcSet cross;           // arcs left-part -> right-part of the split
  double density = 0;     // of cross over |left| x |right|, always >= 1/2
  RegularityVerdict verdict;
};

struct DecompositionTree {
  int n = 0;
  int leaf_threshold = 0;
  double delta = 0;
  double floor_fraction = 0;
  std::uint64_t seed = 0;
  std::vector<TreeNode> nodes;     // node id i lives at index i-1
  std::vector<int> internal_ids;   // processing order
  std::vector<int> leaf_ids;

  const TreeNode& node(int id) const { return nodes[static_cast<std::size_t>(id - 1)]; }
};

struct TreeBuildOptions {
  double delta = 0.4;
  int leaf_threshold = 0;  // 0 picks ceil(sqrt(n))
  double floor_fraction = 0.1;
  std::uint64_t seed = 0;
  RegularSearchOptions search;
};

// Breadth-first: blocks of size >= leaf_threshold are split by
// ternary_partition (with a per-node seed derived from the tree seed);
// smaller blocks become leaves. leaf_threshold must be >= 2 so the recursion
// terminates.
DecompositionTree build_tree(const Tournament& t, const TreeBuildOptions& opts = {});

struct TreeStats {
  long long internal_size_sum = 0;  // sum of |block| over internal nodes
  long long leaf_depth_sum = 0;     // sum of |leaf| * depth over leaves; equals the above
  int internal_count = 0;
  int leaf_count = 0;
  int max_depth = 0;
  std::vector<int> leaf_sizes;      // in leaf id order
  double min_side_fraction = 1.0;   // min over splits of min(|L|,|R|)/|block|
};

TreeStats tree_stats(const DecompositionTree& tree);  // throws if the two sums disagree

// Structural invariants.
// Every later internal block is contained in one split side of any earlier
// internal node it meets, or avoids that node's split sides entirely.
bool check_nesting(const DecompositionTree& tree);
// No arc appears in two different internal nodes' cross sets.
bool check_arc_disjoint(const DecompositionTree& tree);

// Weighted leaf-depth lower bound for a branching-b tree: with leaves of size
// u_i at depth d_i summing to s and each u_i <= t,
//   sum u_i d_i >= s log_b(s / t),
// with equality on complete b-ary trees over unit leaves at t = 1.
struct TreeLemmaInstance {
  long long root_size = 0;  // s
  int branching = 0;        // b >= 2
  long long leaf_cap = 0;   // t >= 1
  std::vector<std::pair<long long, int>> leaves;  // (size, depth)
};

struct LtreeResult {
  double lhs = 0;  // sum u_i d_i
  double rhs = 0;  // s log_b(s / t)
  bool holds = false;
};

LtreeResult check_ltree(const TreeLemmaInstance& instance, double tol = 1e-9);

TreeLemmaInstance lemma_instance(const DecompositionTree& tree, int branching = 3);

// The n-1 half-half pairs of the aligned binary split of [n], n a power of
// two, level by level, left to right: ({1..n/2},{n/2+1..n}), then the two
// quarter pairs, and so on down to singletons.
std::vector<BipartitePair> dyadic_pairs(int n);

// Relative-position subsets of sigma for every dyadic pair, in dyadic order.
std::vector<std::vector<int>> dyadic_profile(const Permutation& sigma);

// Inverse of dyadic_profile: rebuild sigma from the per-pair subsets.
Permutation permutation_from_profile(int n, const std::vector<std::vector<int>>& profile);

// One node per line: id, parent id (0 for root), role (root/L/R/W), and the
// comma-separated vertex list. Stable across runs with equal seeds.
void write_tree(std::ostream& out, const DecompositionTree& tree);

}  // namespace rankent
