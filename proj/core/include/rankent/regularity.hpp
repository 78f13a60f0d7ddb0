#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rankent/arc_set.hpp"
#include "rankent/tournament.hpp"

namespace rankent {

// Undirected bipartite view of the arcs crossing a pair in one direction:
// edge (i, j) iff the arc left[i] -> right[j] is present.
class BigraphView {
 public:
  static BigraphView from_tournament(const Tournament& t, BipartitePair pair);
  static BigraphView from_arcs(const ArcSet& d, BipartitePair pair);
  // Explicit edge list over (left index, right index), 0-based.
  BigraphView(BipartitePair pair, const std::vector<std::pair<int, int>>& edges);

  int left_size() const { return pair_.left_size(); }
  int right_size() const { return pair_.right_size(); }
  const std::vector<int>& left() const { return pair_.left; }
  const std::vector<int>& right() const { return pair_.right; }
  const BipartitePair& pair() const { return pair_; }

  bool edge(int i, int j) const;
  std::uint64_t edge_count() const;
  double density() const;

  BigraphView complement() const;  // flip every cell of left x right

  // Edges between index subsets.
  std::uint64_t count(const std::vector<int>& left_idx, const std::vector<int>& right_idx) const;
  // Single-word fast path, valid when right_size <= 64.
  std::uint64_t count_masks(std::uint32_t left_mask, std::uint64_t right_mask) const;
  std::uint64_t row_word(int i) const;  // first word of row i (right_size <= 64)

 private:
  explicit BigraphView(BipartitePair pair);

  BipartitePair pair_;
  int words_;
  std::vector<std::vector<std::uint64_t>> rows_;  // per left index, bits over right indices
};

// A pair is delta-regular when every subpair (X', Y') with |X'| > delta|X|
// and |Y'| > delta|Y| has |d(X',Y') - d(X,Y)| < delta. Witnesses are
// qualifying subpairs with deviation >= delta.
//
// All deviation comparisons are done on cross-multiplied integers
// (|e'*|X||Y| - e*|X'||Y'|| against delta * |X||Y| * |X'||Y'|), so the
// complement identity (deviations are invariant under flipping every cell)
// holds exactly, not merely up to rounding.
struct RegularityWitness {
  std::vector<int> sub_left;   // vertex ids, sorted
  std::vector<int> sub_right;  // vertex ids, sorted
  double deviation;            // >= delta by construction
};

struct RegularityVerdict {
  enum class Mode { exact, sampled };
  double delta = 0;
  bool regular = false;
  Mode mode = Mode::exact;
  double max_deviation = 0;  // largest deviation seen (exact: over all subpairs)
  std::uint64_t pairs_checked = 0;
  std::optional<RegularityWitness> witness;  // present iff !regular
};

struct RegularSearchOptions {
  int exhaustive_cap = 20;      // max |X|+|Y| for the exhaustive check
  int sample_trials = 2000;     // refuter draws per call
  std::uint64_t seed = 0;
  int max_iterations = 0;       // descent cap; 0 means ceil(1/delta^2)
};

// Exhaustive check over all qualifying subpairs. Errors when
// left+right exceeds the cap (use the sampled refuter there).
// Ties in the maximal witness go to the smallest (left mask, right mask)
// encoding, bit k of a mask being the k-th vertex of that side.
RegularityVerdict is_regular_exact(const BigraphView& view, double delta,
                                   int exhaustive_cap = 20);

// One-sided randomized refuter: draws qualifying subpairs and returns the
// first violation found; finding none is evidence, not proof, of regularity.
// Deterministic given the seed. Any returned witness satisfies the violation
// inequality exactly (densities are recomputed, not estimated).
RegularityVerdict refute_regular_sampled(const BigraphView& view, double delta,
                                         int trials, std::uint64_t seed);

class RegularPairSearchError : public std::runtime_error {
 public:
  RegularPairSearchError(std::string msg, std::vector<int> best_left,
                         std::vector<int> best_right, double deviation, int iterations);
  std::vector<int> best_left, best_right;
  double deviation;
  int iterations;
};

// Witness descent: starting from the full pair, repeatedly replace the
// current pair by a maximal violating subpair until a pair passes the check
// (exhaustive below the cap, sampled refuter above it; the refuter is
// advisory and its verdict mode is recorded). Sides never drop below
// floor_size; hitting the iteration cap or the floor raises
// RegularPairSearchError carrying the best pair seen.
std::pair<BipartitePair, RegularityVerdict> find_regular_pair(
    const BigraphView& view, double delta, int floor_size,
    const RegularSearchOptions& opts = {});

// Vertex block split L, R, W with the cross arcs S = arcs(L -> R):
// - (L, R) is delta-regular in the recorded mode,
// - density(S) >= 1/2 (orientation swapped when needed; deviations are
//   invariant under the swap because flipping direction complements the
//   cross cells),
// - min(|L|, |R|) >= max(1, ceil(floor_fraction * |block|)).
struct TernaryPartition {
  std::vector<int> left, right, rest;
  ArcSet arcs;
  double density = 0;
  RegularityVerdict verdict;
};

TernaryPartition ternary_partition(const Tournament& t, const std::vector<int>& block,
                                   double delta, double floor_fraction, std::uint64_t seed,
                                   const RegularSearchOptions& opts = {});

}  // namespace rankent
