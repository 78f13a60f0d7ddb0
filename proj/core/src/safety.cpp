#include "rankent/safety.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "rankent/rng.hpp"

namespace rankent {

SafetyParams derive_safety_params(int left_size, int right_size, double delta, double epsilon) {
  if (left_size < 1 || right_size < 1)
    throw std::invalid_argument("derive_safety_params: sides must be nonempty");
  if (delta <= 0 || delta >= 0.5)
    throw std::invalid_argument("derive_safety_params: need 0 < delta < 1/2");
  if (epsilon <= 0 || epsilon >= 0.5)
    throw std::invalid_argument("derive_safety_params: need 0 < epsilon < 1/2");
  SafetyParams p;
  p.l = left_size + right_size;
  p.gamma = static_cast<double>(left_size) / static_cast<double>(p.l);
  p.delta = delta;
  p.epsilon = epsilon;
  p.lambda = 2 * delta;
  p.zeta = epsilon * delta * p.gamma * (1 - p.gamma) / 4;
  p.width = std::max(1, static_cast<int>(std::floor(p.lambda * static_cast<double>(p.l))));
  p.intervals = std::max(1, p.l / p.width);
  return p;
}

std::vector<std::pair<int, int>> interval_ranges(const SafetyParams& params) {
  std::vector<std::pair<int, int>> out;
  out.reserve(static_cast<std::size_t>(params.intervals));
  for (int j = 0; j < params.intervals; ++j) {
    const int start = j * params.width + 1;
    const int end = (j + 1 == params.intervals) ? params.l : (j + 1) * params.width;
    out.emplace_back(start, end);
  }
  return out;
}

bool interval_condition(const std::vector<int>& x_ranks, const SafetyParams& params) {
  for (int r : x_ranks)
    if (r < 1 || r > params.l)
      throw std::invalid_argument("interval_condition: rank outside [l]");
  const double lo = (params.gamma * params.lambda - params.zeta) * static_cast<double>(params.l);
  const double hi = (params.gamma * params.lambda + params.zeta) * static_cast<double>(params.l);
  for (const auto& [start, end] : interval_ranges(params)) {
    int count = 0;
    for (int r : x_ranks) count += (r >= start && r <= end) ? 1 : 0;
    if (static_cast<double>(count) < lo || static_cast<double>(count) > hi) return false;
  }
  return true;
}

namespace {

struct FlatArcs {
  // Arcs as (side of u, index of u within side, side of v, index of v).
  struct Entry {
    bool u_left, v_left;
    int ui, vi;
  };
  std::vector<Entry> entries;
};

FlatArcs flatten(const ArcSet& d, const BipartitePair& lr) {
  auto side_index = [](const std::vector<int>& side, int v) {
    const auto it = std::lower_bound(side.begin(), side.end(), v);
    if (it == side.end() || *it != v) return -1;
    return static_cast<int>(it - side.begin());
  };
  FlatArcs flat;
  for (const auto& [u, v] : d.arcs()) {
    FlatArcs::Entry e;
    int i = side_index(lr.left, u);
    if (i >= 0) {
      e.u_left = true;
      e.ui = i;
    } else {
      i = side_index(lr.right, u);
      if (i < 0) throw std::invalid_argument("safety: arc endpoint outside L u R");
      e.u_left = false;
      e.ui = i;
    }
    int j = side_index(lr.left, v);
    if (j >= 0) {
      e.v_left = true;
      e.vi = j;
    } else {
      j = side_index(lr.right, v);
      if (j < 0) throw std::invalid_argument("safety: arc endpoint outside L u R");
      e.v_left = false;
      e.vi = j;
    }
    flat.entries.push_back(e);
  }
  return flat;
}

// Max fit over all bijections tau with tau(L) = x, tau(R) = y; positions are
// whatever integers x, y hold (only their order matters).
int max_fit_over_bijections(const FlatArcs& flat, std::vector<int> x, std::vector<int> y) {
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  int best = std::numeric_limits<int>::min();
  std::vector<int> px = x;
  do {
    std::vector<int> py = y;
    do {
      int score = 0;
      for (const auto& e : flat.entries) {
        const int pu = e.u_left ? px[static_cast<std::size_t>(e.ui)] : py[static_cast<std::size_t>(e.ui)];
        const int pv = e.v_left ? px[static_cast<std::size_t>(e.vi)] : py[static_cast<std::size_t>(e.vi)];
        score += pu < pv ? 1 : -1;
      }
      best = std::max(best, score);
    } while (std::next_permutation(py.begin(), py.end()));
  } while (std::next_permutation(px.begin(), px.end()));
  return best;
}

void check_sides(const BipartitePair& lr, int side_cap, const char* who) {
  if (lr.left_size() > side_cap || lr.right_size() > side_cap)
    throw std::runtime_error(std::string(who) +
                             ": side exceeds the exhaustive cap; use unsafe_prob_monte_carlo");
}

}  // namespace

bool is_safe_exhaustive(const ArcSet& d, const BipartitePair& lr, const std::vector<int>& x,
                        const std::vector<int>& y, double epsilon, int side_cap) {
  check_sides(lr, side_cap, "is_safe_exhaustive");
  if (static_cast<int>(x.size()) != lr.left_size() ||
      static_cast<int>(y.size()) != lr.right_size())
    throw std::invalid_argument("is_safe_exhaustive: position counts must match side sizes");
  {
    std::vector<int> all = x;
    all.insert(all.end(), y.begin(), y.end());
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end())
      throw std::invalid_argument("is_safe_exhaustive: positions must be distinct");
  }
  if (epsilon <= 0) throw std::invalid_argument("is_safe_exhaustive: need epsilon > 0");
  const FlatArcs flat = flatten(d, lr);
  const double threshold =
      epsilon * static_cast<double>(lr.left_size()) * static_cast<double>(lr.right_size()) / 4;
  return static_cast<double>(max_fit_over_bijections(flat, x, y)) < threshold;
}

double unsafe_prob_bound(const SafetyParams& params) {
  return 2.0 * static_cast<double>(params.intervals) *
         std::exp(-2 * params.zeta * params.zeta * static_cast<double>(params.l) / params.lambda);
}

MonteCarloEstimate unsafe_prob_monte_carlo(const ArcSet& d, const BipartitePair& lr,
                                           double epsilon, int ambient, std::uint64_t samples,
                                           std::uint64_t seed, int side_cap) {
  check_sides(lr, side_cap, "unsafe_prob_monte_carlo");
  const int a = lr.left_size(), b = lr.right_size();
  const int l = a + b;
  if (ambient < l)
    throw std::invalid_argument("unsafe_prob_monte_carlo: ambient smaller than |L| + |R|");
  if (samples == 0) throw std::invalid_argument("unsafe_prob_monte_carlo: need samples > 0");
  if (epsilon <= 0) throw std::invalid_argument("unsafe_prob_monte_carlo: need epsilon > 0");

  const FlatArcs flat = flatten(d, lr);
  const double threshold = epsilon * static_cast<double>(a) * static_cast<double>(b) / 4;

  // Safety depends only on which of the l merged slots belong to x, so cache
  // the verdict per interleaving pattern.
  std::unordered_map<std::uint32_t, bool> unsafe_by_pattern;
  Rng rng(seed);
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    const std::vector<int> chosen = rng.sample(ambient, l);  // draw order: first a are x
    std::vector<int> merged(chosen.begin(), chosen.end());
    std::sort(merged.begin(), merged.end());
    std::uint32_t pattern = 0;
    for (int i = 0; i < a; ++i) {
      const auto it = std::lower_bound(merged.begin(), merged.end(), chosen[static_cast<std::size_t>(i)]);
      pattern |= 1u << static_cast<int>(it - merged.begin());
    }
    auto found = unsafe_by_pattern.find(pattern);
    if (found == unsafe_by_pattern.end()) {
      std::vector<int> x, y;
      for (int i = 0; i < l; ++i) {
        if ((pattern >> i) & 1) x.push_back(i + 1);
        else y.push_back(i + 1);
      }
      const bool unsafe =
          static_cast<double>(max_fit_over_bijections(flat, x, y)) >= threshold;
      found = unsafe_by_pattern.emplace(pattern, unsafe).first;
    }
    if (found->second) ++hits;
  }
  MonteCarloEstimate est;
  est.samples = samples;
  est.hits = hits;
  est.estimate = static_cast<double>(hits) / static_cast<double>(samples);
  est.std_error = std::sqrt(est.estimate * (1 - est.estimate) / static_cast<double>(samples));
  return est;
}

}  // namespace rankent
