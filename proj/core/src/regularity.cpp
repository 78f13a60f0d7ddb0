#include "rankent/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "rankent/rng.hpp"

namespace rankent {

namespace {

// Deviation of a subpair as exact integers: numerator |e'*AB - e*A'B'| over
// denominator AB*A'B'. Violation test and max tracking both stay rational.
struct Deviation {
  std::int64_t num = 0;
  std::int64_t den = 1;
  bool larger_than(const Deviation& other) const {
    return static_cast<__int128>(num) * other.den > static_cast<__int128>(other.num) * den;
  }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool violates(double delta) const {
    return static_cast<double>(num) >= delta * static_cast<double>(den);
  }
};

Deviation deviation_of(std::int64_t sub_edges, std::int64_t sub_cells, std::int64_t edges,
                       std::int64_t cells) {
  Deviation d;
  d.num = std::llabs(sub_edges * cells - edges * sub_cells);
  d.den = cells * sub_cells;
  return d;
}

// Smallest subset size strictly above delta * side, in the same double
// arithmetic used everywhere else.
int qualifying_min(double delta, int side) {
  int s = static_cast<int>(std::floor(delta * static_cast<double>(side))) + 1;
  return s;
}

std::vector<int> ids_from_mask(const std::vector<int>& side, std::uint64_t mask) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(side.size()); ++i)
    if ((mask >> i) & 1) out.push_back(side[static_cast<std::size_t>(i)]);
  return out;
}

std::vector<int> ids_from_indices(const std::vector<int>& side, const std::vector<int>& idx) {
  std::vector<int> out;
  out.reserve(idx.size());
  for (int i : idx) out.push_back(side[static_cast<std::size_t>(i)]);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

BigraphView::BigraphView(BipartitePair pair)
    : pair_(std::move(pair)),
      words_((pair_.right_size() + 63) / 64),
      rows_(static_cast<std::size_t>(pair_.left_size()),
            std::vector<std::uint64_t>(static_cast<std::size_t>(words_), 0)) {}

BigraphView BigraphView::from_tournament(const Tournament& t, BipartitePair pair) {
  BigraphView view(std::move(pair));
  for (int i = 0; i < view.left_size(); ++i)
    for (int j = 0; j < view.right_size(); ++j)
      if (t.arc(view.pair_.left[static_cast<std::size_t>(i)],
                view.pair_.right[static_cast<std::size_t>(j)]))
        view.rows_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j >> 6)] |= 1ULL << (j & 63);
  return view;
}

BigraphView BigraphView::from_arcs(const ArcSet& d, BipartitePair pair) {
  BigraphView view(std::move(pair));
  for (int i = 0; i < view.left_size(); ++i)
    for (int j = 0; j < view.right_size(); ++j)
      if (d.contains(view.pair_.left[static_cast<std::size_t>(i)],
                     view.pair_.right[static_cast<std::size_t>(j)]))
        view.rows_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j >> 6)] |= 1ULL << (j & 63);
  return view;
}

BigraphView::BigraphView(BipartitePair pair, const std::vector<std::pair<int, int>>& edges)
    : BigraphView(std::move(pair)) {
  for (const auto& [i, j] : edges) {
    if (i < 0 || i >= left_size() || j < 0 || j >= right_size())
      throw std::invalid_argument("BigraphView: edge index out of range");
    rows_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j >> 6)] |= 1ULL << (j & 63);
  }
}

bool BigraphView::edge(int i, int j) const {
  if (i < 0 || i >= left_size() || j < 0 || j >= right_size())
    throw std::invalid_argument("BigraphView::edge: index out of range");
  return (rows_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j >> 6)] >> (j & 63)) & 1;
}

std::uint64_t BigraphView::edge_count() const {
  std::uint64_t total = 0;
  for (const auto& row : rows_)
    for (std::uint64_t w : row) total += static_cast<std::uint64_t>(__builtin_popcountll(w));
  return total;
}

double BigraphView::density() const {
  return static_cast<double>(edge_count()) /
         (static_cast<double>(left_size()) * static_cast<double>(right_size()));
}

BigraphView BigraphView::complement() const {
  BigraphView out(pair_);
  const int b = right_size();
  for (int i = 0; i < left_size(); ++i) {
    for (int w = 0; w < words_; ++w) {
      std::uint64_t flipped = ~rows_[static_cast<std::size_t>(i)][static_cast<std::size_t>(w)];
      const int bits_here = std::min(64, b - w * 64);
      if (bits_here < 64) flipped &= (1ULL << bits_here) - 1;
      out.rows_[static_cast<std::size_t>(i)][static_cast<std::size_t>(w)] = flipped;
    }
  }
  return out;
}

std::uint64_t BigraphView::count(const std::vector<int>& left_idx,
                                 const std::vector<int>& right_idx) const {
  std::vector<std::uint64_t> mask(static_cast<std::size_t>(words_), 0);
  for (int j : right_idx) mask[static_cast<std::size_t>(j >> 6)] |= 1ULL << (j & 63);
  std::uint64_t total = 0;
  for (int i : left_idx) {
    const auto& row = rows_[static_cast<std::size_t>(i)];
    for (int w = 0; w < words_; ++w)
      total += static_cast<std::uint64_t>(
          __builtin_popcountll(row[static_cast<std::size_t>(w)] & mask[static_cast<std::size_t>(w)]));
  }
  return total;
}

std::uint64_t BigraphView::count_masks(std::uint32_t left_mask, std::uint64_t right_mask) const {
  std::uint64_t total = 0;
  while (left_mask) {
    const int i = __builtin_ctz(left_mask);
    left_mask &= left_mask - 1;
    total += static_cast<std::uint64_t>(__builtin_popcountll(rows_[static_cast<std::size_t>(i)][0] & right_mask));
  }
  return total;
}

std::uint64_t BigraphView::row_word(int i) const { return rows_[static_cast<std::size_t>(i)][0]; }

RegularityVerdict is_regular_exact(const BigraphView& view, double delta, int exhaustive_cap) {
  const int a = view.left_size(), b = view.right_size();
  if (delta <= 0 || delta >= 1) throw std::invalid_argument("is_regular_exact: need 0 < delta < 1");
  if (a + b > exhaustive_cap)
    throw std::invalid_argument("is_regular_exact: |X|+|Y| exceeds the exhaustive cap (" +
                             std::to_string(exhaustive_cap) + "); use refute_regular_sampled");

  RegularityVerdict verdict;
  verdict.delta = delta;
  verdict.mode = RegularityVerdict::Mode::exact;

  const std::int64_t cells = static_cast<std::int64_t>(a) * b;
  const std::int64_t edges = static_cast<std::int64_t>(view.edge_count());
  const int min_x = qualifying_min(delta, a);
  const int min_y = qualifying_min(delta, b);

  verdict.regular = true;
  if (min_x > a || min_y > b) return verdict;  // no qualifying subpair at all

  // Popcount-filtered double mask scan; right side fits one word (cap <= 20).
  std::vector<std::uint64_t> rows(static_cast<std::size_t>(a));
  for (int i = 0; i < a; ++i) rows[static_cast<std::size_t>(i)] = view.row_word(i);

  Deviation max_all{0, 1}, max_bad{0, 1};
  std::uint64_t bad_x = 0, bad_y = 0;
  bool any_bad = false;

  for (std::uint64_t xm = 1; xm < (1ULL << a); ++xm) {
    const int xc = __builtin_popcountll(xm);
    if (xc < min_x) continue;
    for (std::uint64_t ym = 1; ym < (1ULL << b); ++ym) {
      const int yc = __builtin_popcountll(ym);
      if (yc < min_y) continue;
      std::int64_t sub_edges = 0;
      std::uint64_t rest = xm;
      while (rest) {
        const int i = __builtin_ctzll(rest);
        rest &= rest - 1;
        sub_edges += __builtin_popcountll(rows[static_cast<std::size_t>(i)] & ym);
      }
      ++verdict.pairs_checked;
      const Deviation dev =
          deviation_of(sub_edges, static_cast<std::int64_t>(xc) * yc, edges, cells);
      if (dev.larger_than(max_all)) max_all = dev;
      if (dev.violates(delta) && dev.larger_than(max_bad)) {
        max_bad = dev;
        bad_x = xm;
        bad_y = ym;
        any_bad = true;
      }
    }
  }

  verdict.max_deviation = max_all.value();
  if (any_bad) {
    verdict.regular = false;
    verdict.witness = RegularityWitness{ids_from_mask(view.left(), bad_x),
                                        ids_from_mask(view.right(), bad_y), max_bad.value()};
  }
  return verdict;
}

RegularityVerdict refute_regular_sampled(const BigraphView& view, double delta, int trials,
                                         std::uint64_t seed) {
  const int a = view.left_size(), b = view.right_size();
  if (delta <= 0 || delta >= 1)
    throw std::invalid_argument("refute_regular_sampled: need 0 < delta < 1");
  if (trials < 0) throw std::invalid_argument("refute_regular_sampled: trials must be >= 0");

  RegularityVerdict verdict;
  verdict.delta = delta;
  verdict.mode = RegularityVerdict::Mode::sampled;
  verdict.regular = true;

  const int min_x = qualifying_min(delta, a);
  const int min_y = qualifying_min(delta, b);
  if (min_x > a || min_y > b) return verdict;

  const std::int64_t cells = static_cast<std::int64_t>(a) * b;
  const std::int64_t edges = static_cast<std::int64_t>(view.edge_count());

  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    const int sx = rng.range(min_x, a);
    const int sy = rng.range(min_y, b);
    std::vector<int> xi = rng.sample(a, sx);
    std::vector<int> yi = rng.sample(b, sy);
    const std::int64_t sub_edges = static_cast<std::int64_t>(view.count(xi, yi));
    ++verdict.pairs_checked;
    const Deviation dev =
        deviation_of(sub_edges, static_cast<std::int64_t>(sx) * sy, edges, cells);
    if (dev.larger_than(Deviation{0, 1}) && dev.value() > verdict.max_deviation)
      verdict.max_deviation = dev.value();
    if (dev.violates(delta)) {
      verdict.regular = false;
      verdict.witness = RegularityWitness{ids_from_indices(view.left(), xi),
                                          ids_from_indices(view.right(), yi), dev.value()};
      return verdict;
    }
  }
  return verdict;
}

RegularPairSearchError::RegularPairSearchError(std::string msg, std::vector<int> bl,
                                               std::vector<int> br, double dev, int iters)
    : std::runtime_error(std::move(msg)),
      best_left(std::move(bl)),
      best_right(std::move(br)),
      deviation(dev),
      iterations(iters) {}

namespace {

BigraphView subview_by_ids(const BigraphView& view, const std::vector<int>& left_ids,
                           const std::vector<int>& right_ids) {
  auto index_of = [](const std::vector<int>& side, int id) {
    return static_cast<int>(std::lower_bound(side.begin(), side.end(), id) - side.begin());
  };
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < static_cast<int>(left_ids.size()); ++i) {
    const int vi = index_of(view.left(), left_ids[static_cast<std::size_t>(i)]);
    for (int j = 0; j < static_cast<int>(right_ids.size()); ++j) {
      const int vj = index_of(view.right(), right_ids[static_cast<std::size_t>(j)]);
      if (view.edge(vi, vj)) edges.emplace_back(i, j);
    }
  }
  return BigraphView(BipartitePair(left_ids, right_ids), edges);
}

}  // namespace

std::pair<BipartitePair, RegularityVerdict> find_regular_pair(const BigraphView& view,
                                                              double delta, int floor_size,
                                                              const RegularSearchOptions& opts) {
  if (floor_size < 1) throw std::invalid_argument("find_regular_pair: floor_size must be >= 1");
  if (view.left_size() < floor_size || view.right_size() < floor_size)
    throw std::invalid_argument("find_regular_pair: full pair already below the floor");

  const int cap_iters =
      opts.max_iterations > 0
          ? opts.max_iterations
          : static_cast<int>(std::ceil(1.0 / (delta * delta)));

  Rng seeder(opts.seed);
  BigraphView current = view;
  for (int it = 0; it <= cap_iters; ++it) {
    RegularityVerdict verdict;
    if (current.left_size() + current.right_size() <= opts.exhaustive_cap)
      verdict = is_regular_exact(current, delta, opts.exhaustive_cap);
    else
      verdict = refute_regular_sampled(current, delta, opts.sample_trials,
                                       seeder.fork(static_cast<std::uint64_t>(it)).seed());
    if (verdict.regular) return {current.pair(), verdict};

    const RegularityWitness& w = *verdict.witness;
    if (static_cast<int>(w.sub_left.size()) < floor_size ||
        static_cast<int>(w.sub_right.size()) < floor_size)
      throw RegularPairSearchError(
          "find_regular_pair: witness descent fell below the size floor", current.pair().left,
          current.pair().right, verdict.max_deviation, it);
    current = subview_by_ids(current, w.sub_left, w.sub_right);
  }
  throw RegularPairSearchError("find_regular_pair: iteration cap hit without a verified pair",
                               current.pair().left, current.pair().right, 0.0, cap_iters);
}

TernaryPartition ternary_partition(const Tournament& t, const std::vector<int>& block,
                                   double delta, double floor_fraction, std::uint64_t seed,
                                   const RegularSearchOptions& opts) {
  std::vector<int> v = block;
  std::sort(v.begin(), v.end());
  if (v.size() < 2) throw std::invalid_argument("ternary_partition: block needs >= 2 vertices");
  if (std::adjacent_find(v.begin(), v.end()) != v.end())
    throw std::invalid_argument("ternary_partition: repeated vertex in block");
  if (v.front() < 1 || v.back() > t.size())
    throw std::invalid_argument("ternary_partition: vertex outside the tournament");
  if (floor_fraction <= 0 || floor_fraction >= 1)
    throw std::invalid_argument("ternary_partition: need 0 < floor_fraction < 1");

  const int half = static_cast<int>(v.size()) / 2;
  const int floor_size = std::max(
      1, static_cast<int>(std::ceil(floor_fraction * static_cast<double>(v.size()))));
  std::vector<int> x(v.begin(), v.begin() + half);
  std::vector<int> y(v.begin() + half, v.end());
  if (floor_size > half)
    throw std::invalid_argument("ternary_partition: floor exceeds half the block");

  RegularSearchOptions search = opts;
  search.seed = seed;
  BigraphView view = BigraphView::from_tournament(t, BipartitePair(x, y));
  auto [found, verdict] = find_regular_pair(view, delta, floor_size, search);

  // Orient so the cross arcs cover at least half the cells. Flipping the
  // direction complements the cells, which leaves every deviation unchanged,
  // so the verdict carries over exactly.
  const std::uint64_t forward = t.count_cross(found.left, found.right);
  const std::uint64_t cells =
      static_cast<std::uint64_t>(found.left_size()) * static_cast<std::uint64_t>(found.right_size());
  std::vector<int> l = found.left, r = found.right;
  if (2 * forward < cells) std::swap(l, r);

  TernaryPartition out;
  out.arcs = t.cross_arcs(BipartitePair(l, r));
  out.density = static_cast<double>(out.arcs.size()) / static_cast<double>(cells);
  std::vector<int> used;
  std::set_union(l.begin(), l.end(), r.begin(), r.end(), std::back_inserter(used));
  std::set_difference(v.begin(), v.end(), used.begin(), used.end(), std::back_inserter(out.rest));
  out.left = std::move(l);
  out.right = std::move(r);
  out.verdict = verdict;
  return out;
}

}  // namespace rankent
