#include "rankent/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rankent/safety.hpp"

namespace rankent {

namespace {

constexpr double kLn2 = 0.6931471805599453;

double log2_factorial(int n) {
  long double nats = 0;
  for (int i = 2; i <= n; ++i) nats += std::log(static_cast<long double>(i));
  return static_cast<double>(nats / kLn2);
}

// Dense bitset over the n! ranking ranks.
class RankSet {
 public:
  explicit RankSet(std::uint64_t total) : total_(total), words_((total + 63) / 64, 0) {}
  void set(std::uint64_t r) { words_[r >> 6] |= 1ULL << (r & 63); }
  bool test(std::uint64_t r) const { return (words_[r >> 6] >> (r & 63)) & 1; }
  std::uint64_t count() const {
    std::uint64_t c = 0;
    for (std::uint64_t w : words_) c += static_cast<std::uint64_t>(__builtin_popcountll(w));
    return c;
  }
  RankSet intersect(const RankSet& other) const {
    RankSet out(total_);
    for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] = words_[i] & other.words_[i];
    return out;
  }
  bool subset_of(const RankSet& other) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~other.words_[i]) return false;
    return true;
  }

 private:
  std::uint64_t total_;
  std::vector<std::uint64_t> words_;
};

struct HypothesisScan {
  bool ok = true;
  double min_margin = 0;
  long long violations = 0;
};

HypothesisScan scan_hypothesis(const Tournament& t, const PermDistribution& dist,
                               double epsilon) {
  const std::vector<double> arcp = dist.arc_probabilities();
  const int n = t.size();
  HypothesisScan scan;
  bool first = true;
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v) {
      const int a = t.arc(u, v) ? u : v;
      const int b = t.arc(u, v) ? v : u;
      const double pr = arcp[static_cast<std::size_t>(a - 1) * static_cast<std::size_t>(n) +
                             static_cast<std::size_t>(b - 1)];
      const double margin = pr - (0.5 + epsilon);
      if (first || margin < scan.min_margin) scan.min_margin = margin;
      first = false;
      if (margin <= 0) ++scan.violations;
    }
  scan.ok = scan.violations == 0;
  if (first) scan.min_margin = 0;  // n == 1, nothing to scan
  return scan;
}

void echo_config(RunReport& rep, const HarnessConfig& cfg, int n) {
  rep.schema = "rankent/report/v1";
  rep.n = n;
  rep.epsilon = cfg.epsilon;
  rep.delta = cfg.delta;
  rep.floor_fraction = cfg.floor_fraction;
  rep.leaf_threshold = cfg.leaf_threshold;
  rep.seed = cfg.seed;
  rep.margin = cfg.margin;
  rep.tolerance = cfg.tolerance;
  rep.log2_factorial = log2_factorial(n);
}

void add_bound(RunReport& rep, std::string name, double lhs, double rhs, bool holds,
               bool vacuous, bool informational, std::string note = "") {
  rep.bounds.push_back(
      BoundRecord{std::move(name), lhs, rhs, holds, vacuous, informational, std::move(note)});
  if (!rep.bounds.back().informational && !rep.bounds.back().holds) {
    rep.any_violation = true;
    rep.violations.push_back("bound failed: " + rep.bounds.back().name);
  }
}

}  // namespace

RunReport run_replay(const Tournament& t, const PermDistribution& dist,
                     const HarnessConfig& cfg, const std::string& tournament_label,
                     const std::string& dist_label) {
  const int n = t.size();
  if (dist.n() != n)
    throw std::invalid_argument("run_replay: distribution and tournament sizes differ");
  dist.validate(1e-6);
  if (cfg.epsilon <= 0 || cfg.epsilon >= 0.5)
    throw std::invalid_argument("run_replay: need 0 < epsilon < 1/2");

  RunReport rep;
  rep.mode = "replay";
  echo_config(rep, cfg, n);
  rep.tournament_label = tournament_label;
  rep.dist_label = dist_label;
  rep.entropy_bits = dist.entropy_bits();

  const HypothesisScan scan = scan_hypothesis(t, dist, cfg.epsilon);
  rep.hypothesis_ok = scan.ok;
  rep.min_arc_margin = scan.min_margin;
  rep.hypothesis_violations = scan.violations;
  if (!scan.ok) {
    rep.any_violation = true;
    rep.violations.push_back("arc-probability hypothesis violated on " +
                             std::to_string(scan.violations) + " arcs");
  }
  const bool conditional = !scan.ok;  // chain steps that assume the hypothesis

  TreeBuildOptions topts;
  topts.delta = cfg.delta;
  topts.leaf_threshold = cfg.leaf_threshold;
  topts.floor_fraction = cfg.floor_fraction;
  topts.seed = cfg.seed;
  topts.search = cfg.search;
  const DecompositionTree tree = build_tree(t, topts);
  const TreeStats stats = tree_stats(tree);
  rep.leaf_threshold = tree.leaf_threshold;
  rep.lambda = stats.internal_size_sum;
  rep.internal_count = stats.internal_count;
  rep.realized_beta = stats.internal_count > 0 ? stats.min_side_fraction : 0.5;

  const BoundConstants constants =
      BoundConstants::from(cfg.epsilon, std::min(0.5, rep.realized_beta));

  const std::uint64_t total = factorial(n);
  const std::size_t m = tree.internal_ids.size();
  const double tol = cfg.tolerance;

  // Per-node flattened cross arcs and per-node interleaving machinery.
  struct NodeCtx {
    const TreeNode* node;
    std::vector<int> lr;           // left u right, sorted
    std::vector<char> is_left;     // aligned with lr
    std::vector<std::pair<int, int>> arcs;  // vertex pairs
    std::vector<char> unsafe_by_pattern;    // indexed by interleaving mask
    RankSet high_fit{1};
    RankSet unsafe{1};
    long long size = 0;
  };
  std::vector<NodeCtx> ctx;
  ctx.reserve(m);
  for (int id : tree.internal_ids) {
    const TreeNode& node = tree.node(id);
    NodeCtx c;
    c.node = &node;
    const auto& left = tree.node(node.child_left).vertices;
    const auto& right = tree.node(node.child_right).vertices;
    std::set_union(left.begin(), left.end(), right.begin(), right.end(),
                   std::back_inserter(c.lr));
    c.is_left.resize(c.lr.size());
    for (std::size_t i = 0; i < c.lr.size(); ++i)
      c.is_left[i] = std::binary_search(left.begin(), left.end(), c.lr[i]) ? 1 : 0;
    c.arcs.assign(node.cross.arcs().begin(), node.cross.arcs().end());
    c.size = static_cast<long long>(node.vertices.size());
    c.high_fit = RankSet(total);
    c.unsafe = RankSet(total);

    // Safety by interleaving pattern: bit k set means merged slot k+1 is X.
    const int l = static_cast<int>(c.lr.size());
    const int a = static_cast<int>(left.size());
    const BipartitePair lr_pair(left, right);
    c.unsafe_by_pattern.assign(1u << l, 0);
    for (std::uint32_t pattern = 0; pattern < (1u << l); ++pattern) {
      if (__builtin_popcount(pattern) != a) continue;
      std::vector<int> x, y;
      for (int k = 0; k < l; ++k) {
        if ((pattern >> k) & 1) x.push_back(k + 1);
        else y.push_back(k + 1);
      }
      c.unsafe_by_pattern[pattern] =
          is_safe_exhaustive(node.cross, lr_pair, x, y, cfg.epsilon) ? 0 : 1;
    }
    ctx.push_back(std::move(c));
  }

  // Single enumeration pass: fit, high-fit events, unsafe events, hit mass.
  std::vector<std::vector<int>> fits(m, std::vector<int>(total, 0));
  std::vector<long long> hit_mass(total, 0);
  {
    std::vector<int> images(static_cast<std::size_t>(n));
    std::iota(images.begin(), images.end(), 1);
    std::uint64_t r = 0;
    do {
      for (std::size_t i = 0; i < m; ++i) {
        NodeCtx& c = ctx[i];
        int score = 0;
        for (const auto& [u, v] : c.arcs)
          score += images[static_cast<std::size_t>(u - 1)] < images[static_cast<std::size_t>(v - 1)]
                       ? 1
                       : -1;
        fits[i][r] = score;
        if (static_cast<double>(score) >
            cfg.epsilon * static_cast<double>(c.arcs.size())) {
          c.high_fit.set(r);
          hit_mass[r] += c.size;
        }
        // Interleaving pattern of the left part among left u right.
        const int l = static_cast<int>(c.lr.size());
        std::uint32_t pattern = 0;
        for (int k = 0; k < l; ++k) {
          if (!c.is_left[static_cast<std::size_t>(k)]) continue;
          const int pk = images[static_cast<std::size_t>(c.lr[static_cast<std::size_t>(k)] - 1)];
          int below = 0;
          for (int k2 = 0; k2 < l; ++k2)
            below += images[static_cast<std::size_t>(c.lr[static_cast<std::size_t>(k2)] - 1)] < pk
                         ? 1
                         : 0;
          pattern |= 1u << below;
        }
        if (c.unsafe_by_pattern[pattern]) c.unsafe.set(r);
      }
      ++r;
    } while (std::next_permutation(images.begin(), images.end()));
  }

  // Node records.
  for (std::size_t i = 0; i < m; ++i) {
    const NodeCtx& c = ctx[i];
    NodeRecord rec;
    rec.id = c.node->id;
    rec.vertices = c.node->vertices;
    rec.left_size = static_cast<int>(tree.node(c.node->child_left).vertices.size());
    rec.right_size = static_cast<int>(tree.node(c.node->child_right).vertices.size());
    rec.cross_arcs = static_cast<long long>(c.arcs.size());
    rec.density = c.node->density;
    rec.verdict_mode =
        c.node->verdict.mode == RegularityVerdict::Mode::exact ? "exact" : "sampled";
    rec.max_deviation = c.node->verdict.max_deviation;
    rec.samples = total;
    rec.std_error = 0;

    long double efit = 0, pr_high = 0;
    for (std::uint64_t r = 0; r < total; ++r) {
      const double p = dist[r];
      if (p == 0) continue;
      efit += static_cast<long double>(p) * fits[i][r];
      if (c.high_fit.test(r)) pr_high += p;
    }
    rec.expected_fit = static_cast<double>(efit);
    rec.expected_fit_floor = 2 * cfg.epsilon * static_cast<double>(c.arcs.size());
    rec.expected_fit_ok = rec.expected_fit >= rec.expected_fit_floor - tol;
    rec.pr_high_fit = static_cast<double>(pr_high);
    rec.pr_high_fit_floor = cfg.epsilon;
    rec.pr_high_fit_ok = rec.pr_high_fit >= rec.pr_high_fit_floor - tol;
    rec.mu_high_fit =
        static_cast<double>(c.high_fit.count()) / static_cast<double>(total);
    rec.mu_unsafe = static_cast<double>(c.unsafe.count()) / static_cast<double>(total);

    const SafetyParams sp =
        derive_safety_params(rec.left_size, rec.right_size, cfg.delta, cfg.epsilon);
    rec.unsafe_bound_formula = unsafe_prob_bound(sp);
    rec.unsafe_bound_vacuous = rec.unsafe_bound_formula >= 1;
    rec.unsafe_decay_cap = std::exp(-constants.tail_rate * static_cast<double>(c.size));
    rec.unsafe_decay_ok = rec.mu_unsafe <= rec.unsafe_decay_cap + tol;
    rec.containment_ok = c.high_fit.subset_of(c.unsafe);

    if (!rec.containment_ok) {
      rep.any_violation = true;
      rep.violations.push_back("node " + std::to_string(rec.id) +
                               ": high-fit event not contained in unsafe event");
    }
    if (!rec.unsafe_decay_ok) {
      rep.any_violation = true;
      rep.violations.push_back("node " + std::to_string(rec.id) +
                               ": unsafe probability above the decay cap");
    }
    if (!conditional && !rec.expected_fit_ok) {
      rep.any_violation = true;
      rep.violations.push_back("node " + std::to_string(rec.id) + ": expected fit below 2 eps |S|");
    }
    if (!conditional && !rec.pr_high_fit_ok) {
      rep.any_violation = true;
      rep.violations.push_back("node " + std::to_string(rec.id) + ": Pr(high fit) below eps");
    }
    rep.nodes.push_back(std::move(rec));
  }

  // Pairwise independence of the unsafe events under the uniform measure,
  // as an exact integer identity.
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      const std::uint64_t ci = ctx[i].unsafe.count();
      const std::uint64_t cj = ctx[j].unsafe.count();
      const std::uint64_t cij = ctx[i].unsafe.intersect(ctx[j].unsafe).count();
      IndependenceRecord rec;
      rec.id_a = ctx[i].node->id;
      rec.id_b = ctx[j].node->id;
      rec.exact_product = total * cij == ci * cj;
      if (!rec.exact_product) {
        rep.any_violation = true;
        rep.violations.push_back("unsafe events of nodes " + std::to_string(rec.id_a) + " and " +
                                 std::to_string(rec.id_b) + " are not exactly independent");
      }
      rep.independence.push_back(rec);
    }
  if (m >= 2) {
    RankSet joint = ctx[0].unsafe;
    long double product = static_cast<long double>(ctx[0].unsafe.count()) /
                          static_cast<long double>(total);
    for (std::size_t i = 1; i < m; ++i) {
      joint = joint.intersect(ctx[i].unsafe);
      product *= static_cast<long double>(ctx[i].unsafe.count()) /
                 static_cast<long double>(total);
    }
    const double lhs = static_cast<double>(joint.count()) / static_cast<double>(total);
    const double rhs = static_cast<double>(product);
    add_bound(rep, "joint_unsafe_product", lhs, rhs,
              std::fabs(lhs - rhs) <= 1e-12 * std::max(1.0, rhs), false, false,
              "uniform measure of the joint unsafe event vs the product");
  }

  // Hit mass and the bulk event.
  long double e_mass = 0, pr_bulk = 0;
  long long max_mass = 0;
  std::uint64_t bulk_count = 0;
  const double bulk_threshold = cfg.epsilon * static_cast<double>(rep.lambda) / 2;
  for (std::uint64_t r = 0; r < total; ++r) {
    e_mass += static_cast<long double>(dist[r]) * hit_mass[r];
    max_mass = std::max(max_mass, hit_mass[r]);
    if (static_cast<double>(hit_mass[r]) >= bulk_threshold) {
      pr_bulk += dist[r];
      ++bulk_count;
    }
  }
  rep.expected_hit_mass = static_cast<double>(e_mass);
  rep.hit_mass_floor = cfg.epsilon * static_cast<double>(rep.lambda);
  rep.pr_bulk = static_cast<double>(pr_bulk);
  rep.pr_bulk_floor = cfg.epsilon / 2;
  rep.bulk_count = bulk_count;

  add_bound(rep, "hit_mass_within_lambda", static_cast<double>(max_mass),
            static_cast<double>(rep.lambda), max_mass <= rep.lambda, false, false);
  add_bound(rep, "expected_hit_mass", rep.expected_hit_mass, rep.hit_mass_floor,
            rep.expected_hit_mass >= rep.hit_mass_floor - tol, false, conditional,
            conditional ? "hypothesis violated; informational" : "");
  add_bound(rep, "bulk_probability", rep.pr_bulk, rep.pr_bulk_floor,
            rep.pr_bulk >= rep.pr_bulk_floor - tol, false, conditional,
            conditional ? "hypothesis violated; informational" : "");

  // Ranking entropy against the bulk split.
  const double p_q = rep.pr_bulk;
  const double log2_bulk =
      bulk_count > 0 ? std::log(static_cast<double>(bulk_count)) / kLn2 : 0;
  rep.hsigma_cap = 1 + (1 - p_q) * rep.log2_factorial + p_q * log2_bulk;
  add_bound(rep, "entropy_le_bulk_split_cap", rep.entropy_bits, rep.hsigma_cap,
            rep.entropy_bits <= rep.hsigma_cap + tol, rep.hsigma_cap >= rep.log2_factorial,
            false);

  // Heavy node subsets: every subset with size mass >= eps lambda / 2.
  if (m > 0 && m <= 20) {
    double max_joint = 0;
    long double union_sum = 0;
    std::uint64_t heavy_subsets = 0;
    for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
      long long mass = 0;
      for (std::size_t i = 0; i < m; ++i)
        if ((mask >> i) & 1) mass += ctx[i].size;
      if (static_cast<double>(mass) < bulk_threshold) continue;
      ++heavy_subsets;
      RankSet joint(total);
      bool started = false;
      for (std::size_t i = 0; i < m; ++i)
        if ((mask >> i) & 1) {
          joint = started ? joint.intersect(ctx[i].high_fit) : ctx[i].high_fit;
          started = true;
        }
      const double mu = static_cast<double>(joint.count()) / static_cast<double>(total);
      max_joint = std::max(max_joint, mu);
      union_sum += mu;
    }
    const double tail_cap =
        std::exp(-constants.tail_rate * cfg.epsilon * static_cast<double>(rep.lambda) / 2);
    add_bound(rep, "joint_high_fit_tail_cap", max_joint, tail_cap, max_joint <= tail_cap + tol,
              tail_cap >= 1, false,
              "heavy subsets: " + std::to_string(heavy_subsets));
    const double mu_bulk = static_cast<double>(bulk_count) / static_cast<double>(total);
    add_bound(rep, "bulk_union_bound", mu_bulk, static_cast<double>(union_sum),
              mu_bulk <= static_cast<double>(union_sum) + tol,
              static_cast<double>(union_sum) >= 1, false,
              "uniform bulk mass vs the heavy-subset union bound");
  }

  add_bound(rep, "entropy_le_log2_factorial", rep.entropy_bits, rep.log2_factorial,
            rep.entropy_bits <= rep.log2_factorial + tol, false, false);
  const double deficit_rhs = (1 - constants.deficit) * rep.log2_factorial;
  add_bound(rep, "entropy_le_deficit_bound", rep.entropy_bits, deficit_rhs,
            rep.entropy_bits <= deficit_rhs + tol, deficit_rhs > rep.log2_factorial - 1,
            conditional, conditional ? "hypothesis violated; informational" : "");

  return rep;
}

RunReport run_transitive(const PermDistribution& dist, const HarnessConfig& cfg,
                         const std::string& dist_label) {
  const int n = dist.n();
  if (n < 2 || (n & (n - 1)) != 0)
    throw std::invalid_argument("run_transitive: n must be a power of two, n >= 2");
  dist.validate(1e-6);
  if (cfg.epsilon <= 0 || cfg.epsilon >= 0.5)
    throw std::invalid_argument("run_transitive: need 0 < epsilon < 1/2");

  RunReport rep;
  rep.mode = "transitive";
  echo_config(rep, cfg, n);
  rep.tournament_label = "transitive";
  rep.dist_label = dist_label;
  rep.entropy_bits = dist.entropy_bits();

  const Tournament t = Tournament::transitive(n);
  const HypothesisScan scan = scan_hypothesis(t, dist, cfg.epsilon);
  rep.hypothesis_ok = scan.ok;
  rep.min_arc_margin = scan.min_margin;
  rep.hypothesis_violations = scan.violations;
  if (!scan.ok) {
    rep.any_violation = true;
    rep.violations.push_back("arc-probability hypothesis violated on " +
                             std::to_string(scan.violations) + " arcs");
  }
  const bool conditional = !scan.ok;
  const double tol = cfg.tolerance;

  const std::vector<double> arcp = dist.arc_probabilities();
  const std::vector<BipartitePair> pairs = dyadic_pairs(n);
  long double sum_entropy = 0, sum_cap = 0;
  long long twice_m_total = 0;
  bool all_block_hyp = true;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const SubsetDistribution bd = block_distribution(dist, pairs[i]);
    const MpcReport mpc = mpc_check(bd, cfg.epsilon, tol);

    // The expected crossing count must equal the sum of the block's
    // arc probabilities; this ties subset extraction to the raw atoms.
    long double arc_sum = 0;
    for (int a : pairs[i].left)
      for (int b : pairs[i].right)
        arc_sum += arcp[static_cast<std::size_t>(a - 1) * static_cast<std::size_t>(n) +
                        static_cast<std::size_t>(b - 1)];
    if (std::fabs(static_cast<double>(arc_sum) - mpc.expected_crossings) >
        1e-9 * std::max(1.0, mpc.expected_crossings)) {
      rep.any_violation = true;
      rep.violations.push_back("block " + std::to_string(i + 1) +
                               ": crossing expectation does not match arc probabilities");
    }

    BlockRecord rec;
    rec.index = static_cast<int>(i + 1);
    rec.m = mpc.m;
    rec.expected_crossings = mpc.expected_crossings;
    rec.hypothesis_threshold = mpc.hypothesis_threshold;
    rec.hypothesis_holds = mpc.hypothesis_holds;
    rec.entropy = mpc.entropy;
    rec.entropy_cap = mpc.entropy_cap;
    rec.chain_holds = mpc.chain_holds;
    if (!mpc.chain_holds) {
      rep.any_violation = true;
      for (const auto& f : mpc.failures)
        rep.violations.push_back("block " + std::to_string(i + 1) + ": " + f);
    }
    all_block_hyp = all_block_hyp && mpc.hypothesis_holds;
    sum_entropy += mpc.entropy;
    sum_cap += mpc.entropy_cap;
    twice_m_total += 2 * mpc.m;
    rep.blocks.push_back(rec);
  }

  // sum of 2 m_i over the dyadic pairs is exactly n log2 n.
  {
    int log2n = 0;
    while ((1 << (log2n + 1)) <= n) ++log2n;
    if (twice_m_total != static_cast<long long>(n) * log2n)
      throw std::logic_error("run_transitive: dyadic block sizes do not sum to n log2 n");
  }

  add_bound(rep, "entropy_le_log2_factorial", rep.entropy_bits, rep.log2_factorial,
            rep.entropy_bits <= rep.log2_factorial + tol, false, false);
  add_bound(rep, "subadditivity", rep.entropy_bits, static_cast<double>(sum_entropy),
            rep.entropy_bits <= static_cast<double>(sum_entropy) + tol, false, false,
            "H(P) vs the sum of block subset entropies");
  const bool block_conditional = conditional || !all_block_hyp;
  add_bound(rep, "block_entropy_cap_sum", static_cast<double>(sum_entropy),
            static_cast<double>(sum_cap),
            static_cast<double>(sum_entropy) <= static_cast<double>(sum_cap) + tol, false,
            block_conditional, block_conditional ? "a block hypothesis failed; informational" : "");
  const double chain_rhs = (1 - cfg.epsilon * cfg.epsilon / 8) * static_cast<double>(n) *
                           (std::log(static_cast<double>(n)) / kLn2);
  add_bound(rep, "entropy_le_subset_chain_cap", rep.entropy_bits, chain_rhs,
            rep.entropy_bits <= chain_rhs + tol, chain_rhs >= rep.log2_factorial,
            block_conditional, block_conditional ? "a block hypothesis failed; informational" : "");
  return rep;
}

}  // namespace rankent
