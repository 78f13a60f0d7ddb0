#include "rankent/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <iterator>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>

#include "rankent/rng.hpp"

namespace rankent {

namespace {

std::uint64_t node_seed(std::uint64_t tree_seed, int node_id) {
  return Rng(tree_seed).fork(static_cast<std::uint64_t>(node_id)).seed();
}

}  // namespace

DecompositionTree build_tree(const Tournament& t, const TreeBuildOptions& opts) {
  const int n = t.size();
  if (opts.delta <= 0 || opts.delta >= 1)
    throw std::invalid_argument("build_tree: need 0 < delta < 1");
  if (opts.floor_fraction <= 0 || opts.floor_fraction >= 1)
    throw std::invalid_argument("build_tree: need 0 < floor_fraction < 1");
  int threshold = opts.leaf_threshold;
  if (threshold == 0)
    threshold = std::max(2, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)))));
  if (threshold < 2) throw std::invalid_argument("build_tree: leaf_threshold must be >= 2");

  DecompositionTree tree;
  tree.n = n;
  tree.leaf_threshold = threshold;
  tree.delta = opts.delta;
  tree.floor_fraction = opts.floor_fraction;
  tree.seed = opts.seed;

  {
    TreeNode root;
    root.id = 1;
    root.parent = 0;
    root.role = NodeRole::root;
    root.depth = 0;
    root.vertices.resize(static_cast<std::size_t>(n));
    for (int v = 1; v <= n; ++v) root.vertices[static_cast<std::size_t>(v - 1)] = v;
    tree.nodes.push_back(std::move(root));
  }

  std::deque<int> queue{1};
  while (!queue.empty()) {
    const int id = queue.front();
    queue.pop_front();

    if (static_cast<int>(tree.node(id).vertices.size()) < threshold) {
      tree.leaf_ids.push_back(id);
      continue;
    }

    TernaryPartition split;
    try {
      split = ternary_partition(t, tree.node(id).vertices, opts.delta, opts.floor_fraction,
                                node_seed(opts.seed, id), opts.search);
    } catch (const RegularPairSearchError& e) {
      throw std::runtime_error("build_tree: node " + std::to_string(id) + " (" +
                               std::to_string(tree.node(id).vertices.size()) +
                               " vertices): " + e.what());
    }

    const int depth = tree.node(id).depth;
    auto add_child = [&](std::vector<int> vertices, NodeRole role) {
      TreeNode child;
      child.id = static_cast<int>(tree.nodes.size()) + 1;
      child.parent = id;
      child.role = role;
      child.depth = depth + 1;
      child.vertices = std::move(vertices);
      tree.nodes.push_back(std::move(child));
      queue.push_back(tree.nodes.back().id);
      return tree.nodes.back().id;
    };

    const int left_id = add_child(split.left, NodeRole::left);
    const int right_id = add_child(split.right, NodeRole::right);
    const int rest_id = split.rest.empty() ? 0 : add_child(split.rest, NodeRole::rest);

    TreeNode& node = tree.nodes[static_cast<std::size_t>(id - 1)];
    node.internal = true;
    node.child_left = left_id;
    node.child_right = right_id;
    node.child_rest = rest_id;
    node.cross = std::move(split.arcs);
    node.density = split.density;
    node.verdict = split.verdict;
    tree.internal_ids.push_back(id);
  }
  return tree;
}

TreeStats tree_stats(const DecompositionTree& tree) {
  TreeStats stats;
  for (int id : tree.internal_ids) {
    const TreeNode& node = tree.node(id);
    stats.internal_size_sum += static_cast<long long>(node.vertices.size());
    ++stats.internal_count;
    const auto left = tree.node(node.child_left).vertices.size();
    const auto right = tree.node(node.child_right).vertices.size();
    const double frac = static_cast<double>(std::min(left, right)) /
                        static_cast<double>(node.vertices.size());
    stats.min_side_fraction = std::min(stats.min_side_fraction, frac);
  }
  for (int id : tree.leaf_ids) {
    const TreeNode& node = tree.node(id);
    ++stats.leaf_count;
    stats.leaf_sizes.push_back(static_cast<int>(node.vertices.size()));
    stats.leaf_depth_sum += static_cast<long long>(node.vertices.size()) * node.depth;
    stats.max_depth = std::max(stats.max_depth, node.depth);
  }
  if (stats.internal_size_sum != stats.leaf_depth_sum)
    throw std::logic_error("tree_stats: weighted depth disagrees between the two computations");
  return stats;
}

bool check_nesting(const DecompositionTree& tree) {
  auto subset = [](const std::vector<int>& a, const std::vector<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
  };
  auto disjoint = [](const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> both;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
    return both.empty();
  };
  for (std::size_t i = 0; i < tree.internal_ids.size(); ++i) {
    const TreeNode& early = tree.node(tree.internal_ids[i]);
    const auto& left = tree.node(early.child_left).vertices;
    const auto& right = tree.node(early.child_right).vertices;
    std::vector<int> span;
    std::set_union(left.begin(), left.end(), right.begin(), right.end(),
                   std::back_inserter(span));
    for (std::size_t j = i + 1; j < tree.internal_ids.size(); ++j) {
      const auto& block = tree.node(tree.internal_ids[j]).vertices;
      if (!(subset(block, left) || subset(block, right) || disjoint(block, span))) return false;
    }
  }
  return true;
}

bool check_arc_disjoint(const DecompositionTree& tree) {
  std::set<std::pair<int, int>> seen;
  for (int id : tree.internal_ids)
    for (const auto& arc : tree.node(id).cross.arcs())
      if (!seen.insert(arc).second) return false;
  return true;
}

LtreeResult check_ltree(const TreeLemmaInstance& instance, double tol) {
  if (instance.branching < 2) throw std::invalid_argument("check_ltree: branching must be >= 2");
  if (instance.root_size < 1) throw std::invalid_argument("check_ltree: root size must be >= 1");
  if (instance.leaf_cap < 1) throw std::invalid_argument("check_ltree: leaf cap must be >= 1");
  if (instance.leaves.empty()) throw std::invalid_argument("check_ltree: no leaves");
  long long total = 0, lhs = 0;
  for (const auto& [size, depth] : instance.leaves) {
    if (size < 1) throw std::invalid_argument("check_ltree: leaf size must be >= 1");
    if (depth < 0) throw std::invalid_argument("check_ltree: negative depth");
    total += size;
    lhs += size * depth;
  }
  if (total != instance.root_size)
    throw std::invalid_argument("check_ltree: leaf sizes sum to " + std::to_string(total) +
                                ", root has " + std::to_string(instance.root_size));
  LtreeResult result;
  result.lhs = static_cast<double>(lhs);
  const long double ratio = static_cast<long double>(instance.root_size) /
                            static_cast<long double>(instance.leaf_cap);
  result.rhs = static_cast<double>(static_cast<long double>(instance.root_size) *
                                   std::log(ratio) /
                                   std::log(static_cast<long double>(instance.branching)));
  result.holds = result.lhs >= result.rhs - tol;
  return result;
}

TreeLemmaInstance lemma_instance(const DecompositionTree& tree, int branching) {
  TreeLemmaInstance inst;
  inst.root_size = tree.n;
  inst.branching = branching;
  inst.leaf_cap = tree.leaf_threshold;
  for (int id : tree.leaf_ids) {
    const TreeNode& node = tree.node(id);
    inst.leaves.emplace_back(static_cast<long long>(node.vertices.size()), node.depth);
  }
  return inst;
}

std::vector<BipartitePair> dyadic_pairs(int n) {
  if (n < 2 || (n & (n - 1)) != 0)
    throw std::invalid_argument("dyadic_pairs: n must be a power of two, n >= 2");
  std::vector<BipartitePair> out;
  for (int size = n; size >= 2; size /= 2) {
    for (int start = 1; start + size - 1 <= n; start += size) {
      const int m = size / 2;
      std::vector<int> left(static_cast<std::size_t>(m)), right(static_cast<std::size_t>(m));
      for (int i = 0; i < m; ++i) {
        left[static_cast<std::size_t>(i)] = start + i;
        right[static_cast<std::size_t>(i)] = start + m + i;
      }
      out.emplace_back(std::move(left), std::move(right));
    }
  }
  return out;
}

std::vector<std::vector<int>> dyadic_profile(const Permutation& sigma) {
  std::vector<std::vector<int>> profile;
  for (const auto& pair : dyadic_pairs(sigma.size()))
    profile.push_back(relative_positions(sigma, pair));
  return profile;
}

Permutation permutation_from_profile(int n, const std::vector<std::vector<int>>& profile) {
  const std::vector<BipartitePair> pairs = dyadic_pairs(n);
  if (profile.size() != pairs.size())
    throw std::invalid_argument("permutation_from_profile: expected " +
                                std::to_string(pairs.size()) + " subsets, got " +
                                std::to_string(profile.size()));
  std::map<std::pair<int, int>, std::size_t> index;  // (start, size) -> pair index
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const int start = pairs[i].left.front();
    const int size = 2 * pairs[i].left_size();
    index[{start, size}] = i;
  }
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const int m = pairs[i].left_size();
    const auto& y = profile[i];
    if (static_cast<int>(y.size()) != m)
      throw std::invalid_argument("permutation_from_profile: subset size mismatch");
    std::uint32_t mask = 0;
    for (int b : y) {
      if (b < 1 || b > 2 * m)
        throw std::invalid_argument("permutation_from_profile: position outside [2m]");
      if ((mask >> (b - 1)) & 1)
        throw std::invalid_argument("permutation_from_profile: repeated position");
      mask |= 1u << (b - 1);
    }
  }

  // Vertices of the block {start..start+size-1} in rank order.
  auto merge = [&](auto&& self, int start, int size) -> std::vector<int> {
    if (size == 1) return {start};
    const int m = size / 2;
    const std::vector<int> low = self(self, start, m);
    const std::vector<int> high = self(self, start + m, m);
    const std::vector<int>& y = profile[index.at({start, size})];
    std::vector<int> merged(static_cast<std::size_t>(size), 0);
    std::size_t hi = 0;
    for (int b : y) merged[static_cast<std::size_t>(b - 1)] = high[hi++];
    std::size_t lo = 0;
    for (auto& slot : merged)
      if (slot == 0) slot = low[lo++];
    return merged;
  };
  const std::vector<int> order = merge(merge, 1, n);
  std::vector<int> images(static_cast<std::size_t>(n));
  for (int pos = 1; pos <= n; ++pos)
    images[static_cast<std::size_t>(order[static_cast<std::size_t>(pos - 1)] - 1)] = pos;
  return Permutation(std::move(images));
}

void write_tree(std::ostream& out, const DecompositionTree& tree) {
  auto role_name = [](NodeRole role) {
    switch (role) {
      case NodeRole::root: return "root";
      case NodeRole::left: return "L";
      case NodeRole::right: return "R";
      case NodeRole::rest: return "W";
    }
    return "?";
  };
  for (const TreeNode& node : tree.nodes) {
    out << node.id << " " << node.parent << " ";
    for (std::size_t i = 0; i < node.vertices.size(); ++i)
      out << (i ? "," : "") << node.vertices[i];
    out << " " << role_name(node.role) << "\n";
  }
}

}  // namespace rankent
