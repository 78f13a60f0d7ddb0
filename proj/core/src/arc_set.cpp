#include "rankent/arc_set.hpp"

#include <algorithm>
#include <iterator>
#include <stdexcept>
#include <string>

namespace rankent {

namespace {

void require_sorted_unique(std::vector<int>& v, const char* what) {
  std::sort(v.begin(), v.end());
  if (std::adjacent_find(v.begin(), v.end()) != v.end())
    throw std::invalid_argument(std::string(what) + ": repeated vertex");
}

}  // namespace

BipartitePair::BipartitePair(std::vector<int> l, std::vector<int> r)
    : left(std::move(l)), right(std::move(r)) {
  if (left.empty() || right.empty())
    throw std::invalid_argument("BipartitePair: both sides must be nonempty");
  require_sorted_unique(left, "BipartitePair.left");
  require_sorted_unique(right, "BipartitePair.right");
  std::vector<int> both;
  std::set_intersection(left.begin(), left.end(), right.begin(), right.end(),
                        std::back_inserter(both));
  if (!both.empty()) throw std::invalid_argument("BipartitePair: sides must be disjoint");
}

ArcSet::ArcSet(std::vector<int> ground, std::vector<Arc> arcs)
    : ground_(std::move(ground)), arcs_(std::move(arcs)) {
  require_sorted_unique(ground_, "ArcSet.ground");
  std::sort(arcs_.begin(), arcs_.end());
  if (std::adjacent_find(arcs_.begin(), arcs_.end()) != arcs_.end())
    throw std::invalid_argument("ArcSet: duplicate arc");
  for (const auto& [u, v] : arcs_) {
    if (u == v) throw std::invalid_argument("ArcSet: loop arc");
    if (!ground_contains(u) || !ground_contains(v))
      throw std::invalid_argument("ArcSet: arc endpoint outside ground set");
  }
}

bool ArcSet::contains(int u, int v) const {
  return std::binary_search(arcs_.begin(), arcs_.end(), Arc{u, v});
}

bool ArcSet::ground_contains(int v) const {
  return std::binary_search(ground_.begin(), ground_.end(), v);
}

ArcSet reverse(const ArcSet& d) {
  std::vector<Arc> rev;
  rev.reserve(d.size());
  for (const auto& [u, v] : d.arcs()) rev.emplace_back(v, u);
  return ArcSet(d.ground(), std::move(rev));
}

ArcSet restrict_to(const ArcSet& d, const BipartitePair& pair) {
  auto in = [](const std::vector<int>& s, int v) {
    return std::binary_search(s.begin(), s.end(), v);
  };
  std::vector<Arc> kept;
  for (const auto& [u, v] : d.arcs())
    if (in(pair.left, u) && in(pair.right, v)) kept.emplace_back(u, v);
  std::vector<int> ground;
  std::set_union(pair.left.begin(), pair.left.end(), pair.right.begin(), pair.right.end(),
                 std::back_inserter(ground));
  return ArcSet(std::move(ground), std::move(kept));
}

int fit(const Permutation& sigma, const ArcSet& d) {
  const int n = sigma.size();
  if (!d.ground().empty() && (d.ground().front() < 1 || d.ground().back() > n))
    throw std::invalid_argument("fit: ground set not covered by the permutation");
  int score = 0;
  for (const auto& [u, v] : d.arcs()) score += sigma(u) < sigma(v) ? 1 : -1;
  return score;
}

double density(const ArcSet& d, const BipartitePair& pair) {
  auto in = [](const std::vector<int>& s, int v) {
    return std::binary_search(s.begin(), s.end(), v);
  };
  std::uint64_t forward = 0, backward = 0;
  for (const auto& [u, v] : d.arcs()) {
    if (in(pair.left, u) && in(pair.right, v)) ++forward;
    else if (in(pair.right, u) && in(pair.left, v)) ++backward;
  }
  if (forward > 0 && backward > 0)
    throw std::invalid_argument("density: arcs populate both directions across the pair");
  const double cells =
      static_cast<double>(pair.left_size()) * static_cast<double>(pair.right_size());
  return static_cast<double>(forward + backward) / cells;
}

std::vector<int> relative_positions(const Permutation& sigma, const BipartitePair& pair) {
  const int n = sigma.size();
  for (int v : pair.left)
    if (v < 1 || v > n) throw std::invalid_argument("relative_positions: left vertex out of range");
  for (int v : pair.right)
    if (v < 1 || v > n) throw std::invalid_argument("relative_positions: right vertex out of range");

  // Rank of each right image among all images of left u right.
  std::vector<int> all;
  all.reserve(pair.left.size() + pair.right.size());
  for (int v : pair.left) all.push_back(sigma(v));
  for (int v : pair.right) all.push_back(sigma(v));
  std::sort(all.begin(), all.end());
  std::vector<int> out;
  out.reserve(pair.right.size());
  for (int v : pair.right) {
    const auto it = std::lower_bound(all.begin(), all.end(), sigma(v));
    out.push_back(static_cast<int>(it - all.begin()) + 1);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace rankent
