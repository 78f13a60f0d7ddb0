#include "rankent/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rankent {

namespace {

constexpr long double kLn2 = 0.6931471805599453094172321214581766L;

long double nats_term(double p) {
  if (p < 0) throw std::invalid_argument("entropy: negative probability");
  if (p == 0) return 0.0L;
  return -static_cast<long double>(p) * std::log(static_cast<long double>(p));
}

}  // namespace

double entropy_bits(const std::vector<double>& probs) {
  long double nats = 0;
  for (double p : probs) nats += nats_term(p);
  return static_cast<double>(nats / kLn2);
}

double binary_entropy(double p) {
  if (p < 0 || p > 1) throw std::invalid_argument("binary_entropy: need p in [0,1]");
  return static_cast<double>((nats_term(p) + nats_term(1 - p)) / kLn2);
}

double relative_entropy_bits(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size())
    throw std::invalid_argument("relative_entropy_bits: length mismatch");
  long double nats = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0 || q[i] < 0)
      throw std::invalid_argument("relative_entropy_bits: negative probability");
    if (p[i] == 0) continue;
    if (q[i] == 0) return -std::numeric_limits<double>::infinity();
    nats += static_cast<long double>(p[i]) *
            std::log(static_cast<long double>(q[i]) / static_cast<long double>(p[i]));
  }
  return static_cast<double>(nats / kLn2);
}

PermDistribution::PermDistribution(int n) : n_(n) {
  if (n < 1 || n > 8)
    throw std::invalid_argument("PermDistribution: exhaustive support needs 1 <= n <= 8");
  p_.assign(factorial(n), 0.0);
}

PermDistribution PermDistribution::uniform(int n) {
  PermDistribution d(n);
  const double p = 1.0 / static_cast<double>(d.p_.size());
  std::fill(d.p_.begin(), d.p_.end(), p);
  return d;
}

PermDistribution PermDistribution::point_mass(const Permutation& sigma) {
  PermDistribution d(sigma.size());
  d.p_[sigma.rank()] = 1.0;
  return d;
}

void PermDistribution::validate(double tol) const {
  long double total = 0;
  for (double p : p_) {
    if (p < 0) throw std::invalid_argument("PermDistribution: negative probability");
    total += p;
  }
  if (std::fabs(static_cast<double>(total) - 1.0) > tol)
    throw std::invalid_argument("PermDistribution: mass sums to " +
                                std::to_string(static_cast<double>(total)) + ", not 1");
}

double PermDistribution::entropy_bits() const {
  long double nats = 0;
  for (double p : p_) nats += nats_term(p);
  return static_cast<double>(nats / kLn2);
}

double PermDistribution::arc_probability(int u, int v) const {
  if (u < 1 || u > n_ || v < 1 || v > n_ || u == v)
    throw std::invalid_argument("arc_probability: bad vertex pair");
  int images[24];
  long double total = 0;
  for (std::uint64_t r = 0; r < p_.size(); ++r) {
    if (p_[r] == 0) continue;
    unrank_into(n_, r, images);
    if (images[u - 1] < images[v - 1]) total += p_[r];
  }
  return static_cast<double>(total);
}

std::vector<double> PermDistribution::arc_probabilities() const {
  std::vector<long double> acc(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_), 0.0L);
  int images[24];
  for (std::uint64_t r = 0; r < p_.size(); ++r) {
    if (p_[r] == 0) continue;
    unrank_into(n_, r, images);
    for (int u = 1; u <= n_; ++u)
      for (int v = 1; v <= n_; ++v)
        if (u != v && images[u - 1] < images[v - 1])
          acc[static_cast<std::size_t>(u - 1) * static_cast<std::size_t>(n_) +
              static_cast<std::size_t>(v - 1)] += p_[r];
  }
  std::vector<double> out(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) out[i] = static_cast<double>(acc[i]);
  return out;
}

PermDistribution PermDistribution::read_text(std::istream& in) {
  std::string line;
  int n = 0;
  std::vector<std::pair<std::uint64_t, double>> atoms;
  while (std::getline(in, line)) {
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos)
      throw std::runtime_error("distribution file: missing ':' in line: " + line);
    std::istringstream images_in(line.substr(0, colon));
    std::vector<int> images;
    int x;
    while (images_in >> x) images.push_back(x);
    if (images.empty()) throw std::runtime_error("distribution file: empty image list");
    if (n == 0) n = static_cast<int>(images.size());
    if (static_cast<int>(images.size()) != n)
      throw std::runtime_error("distribution file: inconsistent permutation length");
    std::istringstream prob_in(line.substr(colon + 1));
    double p;
    if (!(prob_in >> p)) throw std::runtime_error("distribution file: missing probability");
    std::string trailing;
    if (prob_in >> trailing) throw std::runtime_error("distribution file: junk after probability");
    if (p < 0) throw std::runtime_error("distribution file: negative probability");
    atoms.emplace_back(Permutation(images).rank(), p);
  }
  if (n == 0) throw std::runtime_error("distribution file: no atoms");
  PermDistribution d(n);
  for (const auto& [rank, p] : atoms) {
    if (d.p_[rank] != 0) throw std::runtime_error("distribution file: duplicate permutation");
    d.p_[rank] = p;
  }
  d.validate(1e-6);
  return d;
}

void PermDistribution::write_text(std::ostream& out) const {
  const auto prec = out.precision(std::numeric_limits<double>::max_digits10);
  int images[24];
  for (std::uint64_t r = 0; r < p_.size(); ++r) {
    if (p_[r] == 0) continue;
    unrank_into(n_, r, images);
    for (int i = 0; i < n_; ++i) out << images[i] << (i + 1 < n_ ? " " : "");
    out << " : " << p_[r] << "\n";
  }
  out.precision(prec);
}

SubsetDistribution::SubsetDistribution(int m, std::vector<std::pair<std::uint32_t, double>> atoms)
    : m_(m), atoms_(std::move(atoms)) {
  if (m < 1 || m > 12) throw std::invalid_argument("SubsetDistribution: need 1 <= m <= 12");
  std::sort(atoms_.begin(), atoms_.end());
  long double total = 0;
  std::uint32_t prev = 0;
  bool first = true;
  for (const auto& [mask, p] : atoms_) {
    if (!first && mask == prev) throw std::invalid_argument("SubsetDistribution: duplicate atom");
    prev = mask;
    first = false;
    if (mask >= (1u << (2 * m)))
      throw std::invalid_argument("SubsetDistribution: mask outside [2m]");
    if (__builtin_popcount(mask) != m)
      throw std::invalid_argument("SubsetDistribution: atom is not an m-subset");
    if (p < 0) throw std::invalid_argument("SubsetDistribution: negative probability");
    total += p;
  }
  if (std::fabs(static_cast<double>(total) - 1.0) > 1e-9)
    throw std::invalid_argument("SubsetDistribution: mass sums to " +
                                std::to_string(static_cast<double>(total)) + ", not 1");
}

SubsetDistribution SubsetDistribution::uniform(int m) {
  std::vector<std::pair<std::uint32_t, double>> atoms;
  const std::uint32_t limit = 1u << (2 * m);
  for (std::uint32_t mask = 0; mask < limit; ++mask)
    if (__builtin_popcount(mask) == m) atoms.emplace_back(mask, 0.0);
  const double p = 1.0 / static_cast<double>(atoms.size());
  for (auto& [mask, prob] : atoms) prob = p;
  return SubsetDistribution(m, std::move(atoms));
}

SubsetDistribution SubsetDistribution::point_mass(int m, std::uint32_t mask) {
  return SubsetDistribution(m, {{mask, 1.0}});
}

double SubsetDistribution::entropy_bits() const {
  long double nats = 0;
  for (const auto& [mask, p] : atoms_) nats += nats_term(p);
  return static_cast<double>(nats / kLn2);
}

std::vector<double> SubsetDistribution::position_marginals() const {
  std::vector<long double> acc(static_cast<std::size_t>(2 * m_), 0.0L);
  for (const auto& [mask, p] : atoms_)
    for (int b = 0; b < 2 * m_; ++b)
      if ((mask >> b) & 1) acc[static_cast<std::size_t>(b)] += p;
  std::vector<double> out(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) out[i] = static_cast<double>(acc[i]);
  return out;
}

double SubsetDistribution::expected_crossings() const {
  long double acc = 0;
  for (const auto& [mask, p] : atoms_)
    acc += static_cast<long double>(p) * static_cast<long double>(crossing_count_mask(mask, m_));
  return static_cast<double>(acc);
}

SubsetDistribution SubsetDistribution::read_text(std::istream& in) {
  std::string line;
  int m = 0;
  std::vector<std::pair<std::uint32_t, double>> atoms;
  while (std::getline(in, line)) {
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos)
      throw std::runtime_error("subset file: missing ':' in line: " + line);
    std::istringstream members_in(line.substr(0, colon));
    std::vector<int> members;
    int x;
    while (members_in >> x) members.push_back(x);
    if (members.empty()) throw std::runtime_error("subset file: empty subset");
    if (m == 0) m = static_cast<int>(members.size());
    if (static_cast<int>(members.size()) != m)
      throw std::runtime_error("subset file: inconsistent subset size");
    std::uint32_t mask = 0;
    for (int b : members) {
      if (b < 1 || b > 2 * m) throw std::runtime_error("subset file: member outside [2m]");
      if ((mask >> (b - 1)) & 1) throw std::runtime_error("subset file: repeated member");
      mask |= 1u << (b - 1);
    }
    std::istringstream prob_in(line.substr(colon + 1));
    double p;
    if (!(prob_in >> p)) throw std::runtime_error("subset file: missing probability");
    std::string trailing;
    if (prob_in >> trailing) throw std::runtime_error("subset file: junk after probability");
    atoms.emplace_back(mask, p);
  }
  if (m == 0) throw std::runtime_error("subset file: no atoms");
  return SubsetDistribution(m, std::move(atoms));
}

void SubsetDistribution::write_text(std::ostream& out) const {
  const auto prec = out.precision(std::numeric_limits<double>::max_digits10);
  for (const auto& [mask, p] : atoms_) {
    bool first = true;
    for (int b = 0; b < 2 * m_; ++b)
      if ((mask >> b) & 1) {
        out << (first ? "" : " ") << (b + 1);
        first = false;
      }
    out << " : " << p << "\n";
  }
  out.precision(prec);
}

long long crossing_count_mask(std::uint32_t mask, int m) {
  if (m < 1 || m > 12) throw std::invalid_argument("crossing_count: need 1 <= m <= 12");
  if (mask >= (1u << (2 * m)) || __builtin_popcount(mask) != m)
    throw std::invalid_argument("crossing_count: mask is not an m-subset of [2m]");
  long long direct = 0, member_sum = 0;
  int outside_below = 0;
  for (int b = 1; b <= 2 * m; ++b) {
    if ((mask >> (b - 1)) & 1) {
      direct += outside_below;
      member_sum += b;
    } else {
      ++outside_below;
    }
  }
  const long long closed = member_sum - static_cast<long long>(m) * (m + 1) / 2;
  if (direct != closed)
    throw std::logic_error("crossing_count: direct count disagrees with closed form");
  return direct;
}

long long crossing_count(const std::vector<int>& y, int m) {
  if (m < 1 || m > 12) throw std::invalid_argument("crossing_count: need 1 <= m <= 12");
  std::uint32_t mask = 0;
  for (int b : y) {
    if (b < 1 || b > 2 * m) throw std::invalid_argument("crossing_count: member outside [2m]");
    if ((mask >> (b - 1)) & 1) throw std::invalid_argument("crossing_count: repeated member");
    mask |= 1u << (b - 1);
  }
  return crossing_count_mask(mask, m);
}

std::uint32_t relative_position_mask(const Permutation& sigma, const BipartitePair& pair) {
  if (pair.left_size() != pair.right_size())
    throw std::invalid_argument("relative_position_mask: sides must have equal size");
  std::uint32_t mask = 0;
  for (int b : relative_positions(sigma, pair)) mask |= 1u << (b - 1);
  return mask;
}

SubsetDistribution block_distribution(const PermDistribution& dist, const BipartitePair& pair) {
  if (pair.left_size() != pair.right_size())
    throw std::invalid_argument("block_distribution: sides must have equal size");
  const int m = pair.left_size();
  if (m > 12) throw std::invalid_argument("block_distribution: side too large");
  std::vector<long double> acc(1u << (2 * m), 0.0L);
  const int n = dist.n();
  int images[24];
  for (std::uint64_t r = 0; r < dist.atom_count(); ++r) {
    if (dist[r] == 0) continue;
    unrank_into(n, r, images);
    // Rank the right images among the images of left u right.
    std::uint32_t mask = 0;
    for (int v : pair.right) {
      int below = 0;
      const int pv = images[v - 1];
      for (int u : pair.left) below += images[u - 1] < pv ? 1 : 0;
      for (int w : pair.right) below += images[w - 1] < pv ? 1 : 0;
      mask |= 1u << below;  // 'below' is the 0-based merged position
    }
    acc[mask] += dist[r];
  }
  std::vector<std::pair<std::uint32_t, double>> atoms;
  for (std::uint32_t mask = 0; mask < acc.size(); ++mask)
    if (acc[mask] > 0) atoms.emplace_back(mask, static_cast<double>(acc[mask]));
  return SubsetDistribution(m, std::move(atoms));
}

MpcReport mpc_check(const SubsetDistribution& y, double epsilon, double tol) {
  if (epsilon <= 0 || epsilon >= 0.5)
    throw std::invalid_argument("mpc_check: need 0 < epsilon < 1/2");
  MpcReport rep;
  rep.m = y.m();
  rep.epsilon = epsilon;
  const double m = static_cast<double>(y.m());

  rep.expected_crossings = y.expected_crossings();
  rep.hypothesis_threshold = (0.5 + epsilon) * m * m;
  rep.hypothesis_holds = rep.expected_crossings > rep.hypothesis_threshold;

  const std::vector<double> marg = y.position_marginals();
  rep.deltas.resize(marg.size());
  long double shift = 0, pos_sum = 0, sq_sum = 0, marg_entropy = 0;
  for (std::size_t b = 0; b < marg.size(); ++b) {
    const double d = marg[b] - 0.5;
    rep.deltas[b] = d;
    shift += static_cast<long double>(d) * static_cast<long double>(b + 1);
    if (d > 0) pos_sum += d;
    sq_sum += static_cast<long double>(d) * d;
    marg_entropy += binary_entropy(marg[b]);
  }

  // Identity link: E f = m^2/2 + sum_b delta_b b.
  const double identity_rhs = m * m / 2 + static_cast<double>(shift);
  if (std::fabs(identity_rhs - rep.expected_crossings) > tol * std::max(1.0, m * m))
    rep.failures.push_back("mean-shift identity violated");

  rep.positive_delta_sum = static_cast<double>(pos_sum);
  rep.positive_delta_floor = epsilon * m / 2;
  rep.delta_sq_sum = static_cast<double>(sq_sum);
  rep.delta_sq_floor = epsilon * epsilon * m / 8;
  rep.entropy = y.entropy_bits();
  rep.marginal_entropy_sum = static_cast<double>(marg_entropy);
  rep.marginal_entropy_cap = 2 * m - 2 * rep.delta_sq_sum;
  rep.entropy_cap = (1 - epsilon * epsilon / 8) * 2 * m;

  // Unconditional links.
  if (rep.entropy > rep.marginal_entropy_sum + tol)
    rep.failures.push_back("subadditivity violated");
  if (rep.marginal_entropy_sum > rep.marginal_entropy_cap + tol)
    rep.failures.push_back("quadratic marginal cap violated");

  // Links that assume the crossing hypothesis.
  if (rep.hypothesis_holds) {
    if (rep.positive_delta_sum <= rep.positive_delta_floor - tol)
      rep.failures.push_back("positive-delta mass below eps m / 2");
    if (rep.delta_sq_sum <= rep.delta_sq_floor - tol)
      rep.failures.push_back("delta square mass below eps^2 m / 8");
    if (rep.entropy > rep.entropy_cap + tol)
      rep.failures.push_back("entropy exceeds (1 - eps^2/8) 2m");
  }
  rep.chain_holds = rep.failures.empty();
  return rep;
}

}  // namespace rankent
