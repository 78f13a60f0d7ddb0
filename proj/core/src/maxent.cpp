#include "rankent/maxent.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rankent {

namespace {

constexpr double kLn2 = 0.6931471805599453;

std::vector<Arc> oriented_pairs(const Tournament& t) {
  std::vector<Arc> arcs;
  arcs.reserve(t.arc_count());
  for (int u = 1; u <= t.size(); ++u)
    for (int v = u + 1; v <= t.size(); ++v) {
      if (t.arc(u, v)) arcs.emplace_back(u, v);
      else arcs.emplace_back(v, u);
    }
  return arcs;
}

}  // namespace

AgreementResult max_agreement(const Tournament& t) {
  const int n = t.size();
  if (n > 10) throw std::invalid_argument("max_agreement: exhaustive search capped at n <= 10");
  const std::vector<Arc> arcs = oriented_pairs(t);
  std::vector<int> images(static_cast<std::size_t>(n));
  std::iota(images.begin(), images.end(), 1);
  long long best = -1;
  std::vector<int> best_images;
  do {
    long long agree = 0;
    for (const auto& [u, v] : arcs)
      agree += images[static_cast<std::size_t>(u - 1)] < images[static_cast<std::size_t>(v - 1)];
    if (agree > best) {  // lexicographic enumeration: first maximum is least
      best = agree;
      best_images = images;
    }
  } while (std::next_permutation(images.begin(), images.end()));
  AgreementResult out{Permutation(std::move(best_images)), best,
                      n < 2 ? 1.0
                            : static_cast<double>(best) / static_cast<double>(arcs.size())};
  return out;
}

BoundConstants BoundConstants::from(double epsilon, double beta) {
  if (epsilon <= 0 || epsilon >= 0.5)
    throw std::invalid_argument("BoundConstants: need 0 < epsilon < 1/2");
  if (beta <= 0 || beta > 0.5) throw std::invalid_argument("BoundConstants: need 0 < beta <= 1/2");
  BoundConstants c;
  c.epsilon = epsilon;
  c.beta = beta;
  c.delta = 0.03 * epsilon;
  const double b3 = beta * beta * beta;
  c.tail_rate = epsilon * epsilon * c.delta * b3 / 33;
  c.gap_rate = epsilon * epsilon * epsilon * c.delta * b3 / 150;
  c.deficit = epsilon * c.gap_rate / 2;
  return c;
}

MaxentSolution solve_maxent(const ArcConstraintSystem& sys, const MaxentOptions& opts) {
  const int n = sys.t.size();
  if (n > 8) throw std::invalid_argument("solve_maxent: exhaustive support capped at n <= 8");
  if (sys.epsilon <= 0 || sys.epsilon >= 0.5)
    throw std::invalid_argument("solve_maxent: need 0 < epsilon < 1/2");
  if (sys.margin < 0) throw std::invalid_argument("solve_maxent: margin must be >= 0");
  const double target = sys.target();
  if (target >= 1) throw std::invalid_argument("solve_maxent: target probability >= 1");

  MaxentSolution sol;
  sol.n = n;
  sol.distribution = PermDistribution::uniform(std::max(n, 1));

  if (n == 1) {  // empty constraint system
    sol.status = SolveStatus::feasible;
    sol.feasible = true;
    sol.entropy_bits = 0;
    sol.dual_bits = 0;
    return sol;
  }

  const std::vector<Arc> arcs = oriented_pairs(sys.t);
  const int m = static_cast<int>(arcs.size());
  for (const auto& arc : arcs) sol.weights.emplace_back(arc, 0.0);

  // Counting certificate: expected total agreement is at most the best
  // single-ranking agreement. Checked first because it subsumes local
  // obstructions whenever it applies.
  {
    const AgreementResult ag = max_agreement(sys.t);
    if (target * static_cast<double>(m) > static_cast<double>(ag.count)) {
      InfeasibilityCertificate cert;
      cert.kind = InfeasibilityCertificate::Kind::counting;
      cert.required = target * static_cast<double>(m);
      cert.available = static_cast<double>(ag.count);
      cert.detail = "constraints force expected agreement " + std::to_string(cert.required) +
                    " but the best ranking agrees with only " + std::to_string(ag.count) +
                    " arcs";
      sol.certificate = cert;
    }
  }

  // Directed-3-cycle certificate: the three cycle arcs can never agree with
  // one ranking simultaneously, so their probabilities sum to at most 2.
  if (!sol.certificate && 3 * target > 2) {
    for (int u = 1; u <= n && !sol.certificate; ++u)
      for (int v = u + 1; v <= n && !sol.certificate; ++v)
        for (int w = v + 1; w <= n && !sol.certificate; ++w) {
          const bool fwd = sys.t.arc(u, v) && sys.t.arc(v, w) && sys.t.arc(w, u);
          const bool bwd = sys.t.arc(v, u) && sys.t.arc(w, v) && sys.t.arc(u, w);
          if (fwd || bwd) {
            InfeasibilityCertificate cert;
            cert.kind = InfeasibilityCertificate::Kind::cycle;
            cert.cycle = {u, v, w};
            cert.required = 3 * target;
            cert.available = 2;
            cert.detail = "directed 3-cycle " + std::to_string(u) + "," + std::to_string(v) +
                          "," + std::to_string(w) +
                          ": constraint sum exceeds the 2 arcs any ranking can satisfy";
            sol.certificate = cert;
          }
        }
  }

  if (sol.certificate) {
    sol.status = SolveStatus::infeasible;
    sol.feasible = false;
    sol.entropy_bits = sol.distribution.entropy_bits();
    sol.dual_bits = static_cast<double>(std::log(static_cast<double>(factorial(n)))) / kLn2;
    sol.residuals.assign(static_cast<std::size_t>(m), target - 0.5);
    sol.max_violation = target - 0.5;
    return sol;
  }

  // Agreement bitmask per ranking, bit j = arc j agrees.
  const std::uint64_t total = factorial(n);
  std::vector<std::uint32_t> agree(total);
  {
    std::vector<int> images(static_cast<std::size_t>(n));
    std::iota(images.begin(), images.end(), 1);
    std::uint64_t r = 0;
    do {
      std::uint32_t bits = 0;
      for (int j = 0; j < m; ++j) {
        const auto& [u, v] = arcs[static_cast<std::size_t>(j)];
        if (images[static_cast<std::size_t>(u - 1)] < images[static_cast<std::size_t>(v - 1)])
          bits |= 1u << j;
      }
      agree[r++] = bits;
    } while (std::next_permutation(images.begin(), images.end()));
  }

  std::vector<double> w(static_cast<std::size_t>(m), 0.0);
  std::vector<double> dot(total, 0.0);   // sum of weights of agreeing arcs
  std::vector<double> gibbs(total, 1.0); // exp(dot - shift)
  double shift = 0;

  auto recenter = [&]() {
    shift = *std::max_element(dot.begin(), dot.end());
    for (std::uint64_t r = 0; r < total; ++r) gibbs[r] = std::exp(dot[r] - shift);
  };
  auto dual_nats = [&]() {
    long double z = 0;
    for (std::uint64_t r = 0; r < total; ++r) z += gibbs[r];
    long double wsum = 0;
    for (double wj : w) wsum += wj;
    return static_cast<double>(std::log(z) + shift - target * wsum);
  };
  auto residual_pass = [&](std::vector<double>& out) {
    std::vector<long double> s(static_cast<std::size_t>(m), 0.0L);
    long double z = 0;
    for (std::uint64_t r = 0; r < total; ++r) {
      const double g = gibbs[r];
      z += g;
      std::uint32_t bits = agree[r];
      while (bits) {
        const int j = __builtin_ctz(bits);
        bits &= bits - 1;
        s[static_cast<std::size_t>(j)] += g;
      }
    }
    out.resize(static_cast<std::size_t>(m));
    double worst = 0;
    for (int j = 0; j < m; ++j) {
      const double p = static_cast<double>(s[static_cast<std::size_t>(j)] / z);
      out[static_cast<std::size_t>(j)] = target - p;
      worst = std::max(worst, target - p);
    }
    return worst;
  };

  double step = 1.0;
  double g_prev = dual_nats();  // log n! at w = 0
  sol.status = SolveStatus::iteration_limit;

  for (long long sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
    const std::vector<double> w_save = w;
    const std::vector<double> dot_save = dot;
    const double g_before = g_prev;

    for (int j = 0; j < m; ++j) {
      long double z = 0, s = 0;
      for (std::uint64_t r = 0; r < total; ++r) {
        const double g = gibbs[r];
        z += g;
        if ((agree[r] >> j) & 1) s += g;
      }
      const double p = static_cast<double>(s / z);
      // Exact coordinate minimizer of the dual along arc j, clamped at 0.
      const double raw = std::log(target * (1 - p) / ((1 - target) * p));
      const double updated = std::max(0.0, w[static_cast<std::size_t>(j)] + step * raw);
      const double change = updated - w[static_cast<std::size_t>(j)];
      if (change == 0) continue;
      w[static_cast<std::size_t>(j)] = updated;
      const double mult = std::exp(change);
      for (std::uint64_t r = 0; r < total; ++r)
        if ((agree[r] >> j) & 1) {
          dot[r] += change;
          gibbs[r] *= mult;
        }
    }

    recenter();
    const double g_after = dual_nats();
    if (g_after > g_before + 1e-12 * std::max(1.0, std::fabs(g_before))) {
      // A full-step sweep must not increase the dual; halve and redo.
      w = w_save;
      dot = dot_save;
      recenter();
      step /= 2;
      if (step < 1e-6)
        throw std::logic_error("solve_maxent: dual increased at minimal step");
      continue;
    }
    step = std::min(1.0, step * 2);
    sol.sweeps = sweep;

    const double worst = residual_pass(sol.residuals);
    sol.max_violation = worst;

    if (g_after < opts.dual_negative) {
      // Weak duality: every feasible distribution would force the dual to
      // stay above its entropy, hence above 0. A negative dual leaves no
      // room, but the arithmetic is floating point, so: presumed.
      sol.status = SolveStatus::presumed_infeasible;
      g_prev = g_after;
      break;
    }
    if (worst <= opts.tolerance) {
      // Every residual is within tolerance, so the iterate itself witnesses
      // feasibility; the dual at this w still caps every feasible entropy.
      sol.status = SolveStatus::feasible;
      g_prev = g_after;
      break;
    }
    g_prev = g_after;
  }

  long double z = 0;
  for (std::uint64_t r = 0; r < total; ++r) z += gibbs[r];
  long double avg_dot = 0;
  for (std::uint64_t r = 0; r < total; ++r)
    avg_dot += static_cast<long double>(gibbs[r]) * (dot[r] - shift);
  avg_dot /= z;
  const double entropy_nats = static_cast<double>(std::log(z) - avg_dot);

  for (std::uint64_t r = 0; r < total; ++r)
    sol.distribution[r] = static_cast<double>(gibbs[r] / static_cast<double>(z));
  sol.entropy_bits = entropy_nats / kLn2;
  sol.dual_bits = g_prev / kLn2;
  for (int j = 0; j < m; ++j) sol.weights[static_cast<std::size_t>(j)].second = w[static_cast<std::size_t>(j)];
  sol.feasible = sol.status == SolveStatus::feasible;
  return sol;
}

BoundReport verify_bounds(const MaxentSolution& sol, const BoundConstants& constants) {
  BoundReport rep;
  rep.entropy_bits = sol.entropy_bits;
  rep.log2_factorial =
      static_cast<double>(std::log(static_cast<double>(factorial(sol.n)))) / kLn2;

  auto push = [&](std::string name, double lhs, double rhs, bool holds, bool vacuous,
                  bool informational) {
    rep.lines.push_back(BoundLine{std::move(name), lhs, rhs, holds, vacuous, informational});
  };

  const double h = sol.entropy_bits;
  const double logf = rep.log2_factorial;
  const double tol = 1e-9;

  push("entropy_le_log2_factorial", h, logf, h <= logf + tol, false, false);

  const double deficit_rhs = (1 - constants.deficit) * logf;
  push("entropy_le_deficit_bound", h, deficit_rhs, h <= deficit_rhs + tol,
       deficit_rhs > logf - 1, false);

  const double chain_rhs = (1 - constants.epsilon * constants.epsilon / 8) *
                           static_cast<double>(sol.n) *
                           (std::log(static_cast<double>(sol.n)) / kLn2);
  push("entropy_le_subset_chain_cap", h, chain_rhs, h <= chain_rhs + tol, chain_rhs >= logf,
       false);

  const double ceiling = (1 - 2 * constants.epsilon) * logf;
  push("entropy_vs_two_eps_ceiling", h, ceiling, h >= ceiling - tol, false, true);

  rep.all_hold = true;
  for (const auto& line : rep.lines)
    if (!line.informational && !line.holds) rep.all_hold = false;
  return rep;
}

}  // namespace rankent
