#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rankent/decomposition.hpp"
#include "rankent/entropy.hpp"
#include "rankent/maxent.hpp"
#include "rankent/tournament.hpp"

namespace rankent {

struct HarnessConfig {
  double epsilon = 0.2;
  double delta = 0.4;          // regularity parameter for the tree
  int leaf_threshold = 0;      // 0 picks ceil(sqrt(n))
  double floor_fraction = 0.1;
  std::uint64_t seed = 0;
  double margin = 1e-6;        // added to the arc-probability target when solving
  double tolerance = 1e-9;     // slack for the recorded inequality checks
  MaxentOptions maxent;
  RegularSearchOptions search;
};

// One internal tree node of a replay run. Every probability below is exact
// (full enumeration over n! rankings), so samples = n! and std_error = 0
// throughout; the fields exist so estimated runs at larger n could fill them.
struct NodeRecord {
  int id = 0;
  std::vector<int> vertices;
  int left_size = 0, right_size = 0;
  long long cross_arcs = 0;       // |S_i|
  double density = 0;
  std::string verdict_mode;       // "exact" | "sampled"
  double max_deviation = 0;
  double expected_fit = 0;        // E fit(sigma, S_i) under the input distribution
  double expected_fit_floor = 0;  // 2 eps |S_i|
  bool expected_fit_ok = false;
  double pr_high_fit = 0;         // Pr(fit > eps |S_i|), recomputed from raw atoms
  double pr_high_fit_floor = 0;   // eps
  bool pr_high_fit_ok = false;
  double mu_high_fit = 0;         // uniform measure of the high-fit event
  double mu_unsafe = 0;           // uniform measure of the unsafe-position event
  double unsafe_bound_formula = 0;  // 2 r exp(-2 zeta^2 l / lambda)
  bool unsafe_bound_vacuous = false;
  double unsafe_decay_cap = 0;    // exp(-tail_rate |V_i|)
  bool unsafe_decay_ok = false;   // mu_unsafe <= the decay cap
  bool containment_ok = false;    // high-fit event inside unsafe event, pointwise
  std::uint64_t samples = 0;
  double std_error = 0;
};

// Exact pairwise independence of the unsafe events under the uniform
// measure: n! * |B_a ^ B_b| == |B_a| * |B_b| as integers.
struct IndependenceRecord {
  int id_a = 0, id_b = 0;
  bool exact_product = false;
};

// One dyadic block of a power-of-two pipeline run.
struct BlockRecord {
  int index = 0;  // dyadic order
  int m = 0;
  double expected_crossings = 0;
  double hypothesis_threshold = 0;
  bool hypothesis_holds = false;
  double entropy = 0;        // H(Y_i), bits
  double entropy_cap = 0;    // (1 - eps^2/8) 2m
  bool chain_holds = false;
};

struct BoundRecord {
  std::string name;
  double lhs = 0, rhs = 0;
  bool holds = false;
  bool vacuous = false;
  bool informational = false;  // not counted as a violation
  std::string note;
};

struct RunReport {
  std::string schema;  // "rankent/report/v1"
  std::string mode;    // "replay" | "transitive"

  // Config echo.
  int n = 0;
  double epsilon = 0, delta = 0, floor_fraction = 0;
  int leaf_threshold = 0;
  std::uint64_t seed = 0;
  double margin = 0, tolerance = 0;
  std::string tournament_label, dist_label;

  // Arc-probability hypothesis scan.
  bool hypothesis_ok = false;
  double min_arc_margin = 0;        // min over arcs of Pr - (1/2 + eps)
  long long hypothesis_violations = 0;

  std::vector<NodeRecord> nodes;
  std::vector<IndependenceRecord> independence;
  std::vector<BlockRecord> blocks;
  std::vector<BoundRecord> bounds;

  // Summary.
  double entropy_bits = 0;
  double log2_factorial = 0;
  long long lambda = 0;             // sum of internal block sizes (replay)
  int internal_count = 0;
  double realized_beta = 0;         // min split-side fraction of the tree
  double expected_hit_mass = 0;     // E of sum |V_i| over high-fit nodes
  double hit_mass_floor = 0;        // eps * lambda
  double pr_bulk = 0;               // Pr(hit mass >= eps lambda / 2)
  double pr_bulk_floor = 0;         // eps / 2
  std::uint64_t bulk_count = 0;     // rankings in the bulk event
  double hsigma_cap = 0;            // 1 + (1-P) log2 n! + P log2 |Q|
  bool any_violation = false;
  std::vector<std::string> violations;

  double wall_seconds = 0;  // in-memory only; never exported
};

// Exact event-chain replay on an explicit tournament and ranking distribution:
// builds the decomposition tree, computes every event probability exactly,
// and records each chain inequality with the raw numbers it was recomputed
// from. Hypothesis violations are flagged and the run proceeds.
RunReport run_replay(const Tournament& t, const PermDistribution& dist,
                     const HarnessConfig& cfg, const std::string& tournament_label,
                     const std::string& dist_label);

// Power-of-two pipeline on the aligned dyadic blocks: subset extraction per
// block, the biased-subset entropy chain on each, and the subadditivity roll-up
// H(P) <= sum H(Y_i) <= (1 - eps^2/8) n log2 n.
RunReport run_transitive(const PermDistribution& dist, const HarnessConfig& cfg,
                         const std::string& dist_label);

}  // namespace rankent
