#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "rankent/arc_set.hpp"
#include "rankent/permutation.hpp"

namespace rankent {

// All entropies are reported in bits; accumulation happens in natural logs
// (long double) and converts once, so tiny atoms do not lose precision in
// repeated base changes.
double entropy_bits(const std::vector<double>& probs);
double binary_entropy(double p);
// Gain-form relative entropy sum_i p_i log2(q_i / p_i); always <= 0 for
// probability vectors, -inf when p puts mass where q has none.
double relative_entropy_bits(const std::vector<double>& p, const std::vector<double>& q);

// Full-support distribution over the n! rankings of [n], indexed by
// lexicographic rank of the image list. Exhaustive work caps at n <= 8.
class PermDistribution {
 public:
  explicit PermDistribution(int n);  // all atoms zero; fill, then validate
  static PermDistribution uniform(int n);
  static PermDistribution point_mass(const Permutation& sigma);

  int n() const { return n_; }
  std::uint64_t atom_count() const { return static_cast<std::uint64_t>(p_.size()); }
  double operator[](std::uint64_t rank) const { return p_[rank]; }
  double& operator[](std::uint64_t rank) { return p_[rank]; }
  double prob(const Permutation& sigma) const { return p_[sigma.rank()]; }
  const std::vector<double>& atoms() const { return p_; }

  void validate(double tol = 1e-9) const;  // nonnegative, sums to 1
  double entropy_bits() const;

  // Pr(sigma(u) < sigma(v)).
  double arc_probability(int u, int v) const;
  // All pairs at once: entry (u-1)*n + (v-1) holds Pr(sigma(u) < sigma(v)).
  std::vector<double> arc_probabilities() const;

  // Text format: one atom per line, "i1 i2 ... in : p" (image list, then
  // probability). Writer emits the support in rank order; reader rejects
  // duplicates and length mismatches and validates the total mass.
  static PermDistribution read_text(std::istream& in);
  void write_text(std::ostream& out) const;

 private:
  int n_;
  std::vector<double> p_;
};

// Distribution over m-element subsets of [2m], atoms keyed by bitmask
// (bit b-1 set iff position b belongs to the subset).
class SubsetDistribution {
 public:
  SubsetDistribution(int m, std::vector<std::pair<std::uint32_t, double>> atoms);
  static SubsetDistribution uniform(int m);
  static SubsetDistribution point_mass(int m, std::uint32_t mask);

  int m() const { return m_; }
  const std::vector<std::pair<std::uint32_t, double>>& atoms() const { return atoms_; }

  double entropy_bits() const;
  std::vector<double> position_marginals() const;  // Pr(b in Y), b = 1..2m
  double expected_crossings() const;

  // Text format: one atom per line, "b1 b2 ... bm : p".
  static SubsetDistribution read_text(std::istream& in);
  void write_text(std::ostream& out) const;

 private:
  int m_;
  std::vector<std::pair<std::uint32_t, double>> atoms_;  // sorted by mask, unique
};

// Crossing count of an m-subset y of [2m]: pairs (s, t) with s < t, s not in
// y, t in y. Computed directly and revalidated against the closed form
// sum(y) - m(m+1)/2.
long long crossing_count(const std::vector<int>& y, int m);
long long crossing_count_mask(std::uint32_t mask, int m);

// Relative positions of pair.right under sigma, as a SubsetDistribution atom
// mask (requires |left| = |right|).
std::uint32_t relative_position_mask(const Permutation& sigma, const BipartitePair& pair);

// Distribution of the relative-position subset of pair.right when sigma is
// drawn from dist (requires |left| = |right|).
SubsetDistribution block_distribution(const PermDistribution& dist, const BipartitePair& pair);

// Entropy bound chain for a biased random subset. Given the crossing
// hypothesis E f(Y) > (1/2 + eps) m^2, the position marginals must tilt
// enough that H(Y) <= (1 - eps^2/8) 2m. Each link is checked numerically:
//   E f = m^2/2 + sum_b delta_b * b          (identity)
//   sum of positive deltas > eps m / 2
//   sum delta_b^2 > eps^2 m / 8
//   H(Y) <= sum_b H(1/2 + delta_b) <= 2m - 2 sum delta_b^2
struct MpcReport {
  int m = 0;
  double epsilon = 0;
  double expected_crossings = 0;
  double hypothesis_threshold = 0;  // (1/2 + eps) m^2
  bool hypothesis_holds = false;    // strict >
  std::vector<double> deltas;       // Pr(b in Y) - 1/2
  double positive_delta_sum = 0;
  double positive_delta_floor = 0;  // eps m / 2
  double delta_sq_sum = 0;
  double delta_sq_floor = 0;  // eps^2 m / 8
  double entropy = 0;               // H(Y), bits
  double marginal_entropy_sum = 0;  // sum_b H(1/2 + delta_b), bits
  double marginal_entropy_cap = 0;  // 2m - 2 sum delta_b^2
  double entropy_cap = 0;           // (1 - eps^2/8) 2m
  bool chain_holds = false;         // conditional links, given the hypothesis
  std::vector<std::string> failures;
};

MpcReport mpc_check(const SubsetDistribution& y, double epsilon, double tol = 1e-9);

}  // namespace rankent
