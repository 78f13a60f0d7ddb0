#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rankent/arc_set.hpp"

namespace rankent {

// Parameters for the interval-occupancy test on a position split (x, y) of a
// cross pair (L, R). All derived values follow the fixed wiring
//   lambda = 2 * delta,   zeta = eps * delta * gamma * (1 - gamma) / 4,
// with gamma = |L| / l and l = |L| + |R|. Intervals have integer width
// max(1, floor(lambda * l)); the last interval absorbs the remainder, and the
// occupancy band (gamma*lambda +/- zeta) * l is applied to every interval
// verbatim.
struct SafetyParams {
  int l = 0;
  double gamma = 0;
  double delta = 0;
  double epsilon = 0;
  double lambda = 0;
  double zeta = 0;
  int width = 0;
  int intervals = 0;
};

SafetyParams derive_safety_params(int left_size, int right_size, double delta, double epsilon);

// Inclusive 1-based rank ranges of the intervals partitioning [l].
std::vector<std::pair<int, int>> interval_ranges(const SafetyParams& params);

// x_ranks: the ranks X occupies inside the merged order of X u Y (a
// gamma*l-subset of [l], sorted). True when every interval's occupancy count
// lies within the band.
bool interval_condition(const std::vector<int>& x_ranks, const SafetyParams& params);

// A position pair (x, y) is safe for the arc set d over (L, R) when every
// bijection tau from L u R onto x u y with tau(L) = x satisfies
// fit(tau, d) < eps |L||R| / 4 (strict). Exhaustive over |L|!|R|! bijections;
// sides above side_cap are an error (use the Monte Carlo estimator).
bool is_safe_exhaustive(const ArcSet& d, const BipartitePair& lr, const std::vector<int>& x,
                        const std::vector<int>& y, double epsilon, int side_cap = 5);

// Tail bound 2 r exp(-2 zeta^2 l / lambda) on the probability that a uniform
// position split violates the interval condition; >= 1 (vacuous) whenever
// zeta^2 l is small against lambda, which is the rule at small l.
double unsafe_prob_bound(const SafetyParams& params);

struct MonteCarloEstimate {
  double estimate = 0;
  double std_error = 0;
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
};

// Probability that uniformly random positions for L u R inside [ambient]
// form an unsafe pair for d. Samples position splits (only the interleaving
// pattern matters, so evaluations are memoized per pattern); deterministic
// given the seed.
MonteCarloEstimate unsafe_prob_monte_carlo(const ArcSet& d, const BipartitePair& lr,
                                           double epsilon, int ambient, std::uint64_t samples,
                                           std::uint64_t seed, int side_cap = 5);

}  // namespace rankent
