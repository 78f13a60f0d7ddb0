#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rankent/entropy.hpp"
#include "rankent/permutation.hpp"
#include "rankent/tournament.hpp"

namespace rankent {

// Constraint system: for every arc u -> v of the tournament,
// Pr(sigma(u) < sigma(v)) >= 1/2 + epsilon + margin.
struct ArcConstraintSystem {
  Tournament t;
  double epsilon = 0;
  double margin = 0;
  double target() const { return 0.5 + epsilon + margin; }
};

struct AgreementResult {
  Permutation best;
  long long count;    // arcs agreeing with the best ranking
  double fraction;    // count / (n choose 2)
};

// Exhaustive best-agreement ranking (n <= 10); ties resolve to the
// lexicographically least image list.
AgreementResult max_agreement(const Tournament& t);

struct InfeasibilityCertificate {
  enum class Kind { cycle, counting };
  Kind kind = Kind::counting;
  std::vector<int> cycle;  // the three vertices, cycle kind only
  double required = 0;     // what the constraints force in total
  double available = 0;    // what any single ranking can deliver
  std::string detail;
};

enum class SolveStatus { feasible, infeasible, presumed_infeasible, iteration_limit };

struct MaxentSolution {
  SolveStatus status = SolveStatus::iteration_limit;
  bool feasible = false;
  int n = 0;
  PermDistribution distribution{1};         // final Gibbs iterate
  std::vector<std::pair<Arc, double>> weights;  // ascending (min,max) pair order
  std::vector<double> residuals;            // target - Pr(arc), same order
  double entropy_bits = 0;
  double dual_bits = 0;   // dual objective; upper-bounds every feasible entropy
  double max_violation = 0;
  long long sweeps = 0;
  std::optional<InfeasibilityCertificate> certificate;
};

struct MaxentOptions {
  double tolerance = 1e-8;        // residual tolerance for feasibility
  long long max_sweeps = 20000;
  double dual_negative = -1e-6;   // nats; below this the dual certifies no feasible point
};

// Maximum-entropy distribution under the arc constraints: minimizes the
// nonnegative-weight dual of the Gibbs family by exact per-arc
// multiplicative updates (coordinate descent) inside a step-halving
// safeguard; the dual never increases across a sweep. Infeasible systems are
// reported with a combinatorial certificate when one exists (counting
// against the best agreement, else a directed 3-cycle when 3 * target > 2),
// and as presumed_infeasible when only the diverging dual witnesses it.
MaxentSolution solve_maxent(const ArcConstraintSystem& sys, const MaxentOptions& opts = {});

// Constants of the entropy-deficit bound, wired from (epsilon, beta):
//   delta = .03 epsilon
//   tail_rate = epsilon^2 delta beta^3 / 33
//   gap_rate  = epsilon^3 delta beta^3 / 150
//   deficit   = epsilon * gap_rate / 2   (= epsilon^4 delta beta^3 / 300)
struct BoundConstants {
  double epsilon = 0;
  double delta = 0;
  double beta = 0;
  double tail_rate = 0;
  double gap_rate = 0;
  double deficit = 0;

  static BoundConstants from(double epsilon, double beta);
};

struct BoundLine {
  std::string name;
  double lhs = 0;
  double rhs = 0;
  bool holds = false;
  bool vacuous = false;   // the bound excludes (almost) nothing at this n
  bool informational = false;  // context line, not part of all_hold
};

struct BoundReport {
  double entropy_bits = 0;
  double log2_factorial = 0;
  std::vector<BoundLine> lines;
  bool all_hold = false;
};

// Solved entropy against: log2 n!, the deficit bound (1 - deficit) log2 n!
// (vacuous when within one bit of log2 n!), the subset-chain cap
// (1 - eps^2/8) n log2 n, and, for context, the (1 - 2 eps) log2 n! ceiling
// that limits how large a provable deficit can get.
BoundReport verify_bounds(const MaxentSolution& sol, const BoundConstants& constants);

}  // namespace rankent
