#include "rankent/tournament.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "rankent/rng.hpp"

namespace rankent {

Tournament::Tournament(int n) : n_(n), words_((n + 63) / 64) {
  if (n < 1) throw std::invalid_argument("Tournament: need n >= 1");
  rows_.assign(static_cast<std::size_t>(n) + 1,
               std::vector<std::uint64_t>(static_cast<std::size_t>(words_), 0));
}

bool Tournament::arc(int u, int v) const {
  if (u < 1 || u > n_ || v < 1 || v > n_ || u == v)
    throw std::invalid_argument("Tournament::arc: bad vertex pair");
  const int b = v - 1;
  return (rows_[static_cast<std::size_t>(u)][static_cast<std::size_t>(b >> 6)] >> (b & 63)) & 1;
}

void Tournament::orient(int u, int v) {
  if (u < 1 || u > n_ || v < 1 || v > n_ || u == v)
    throw std::invalid_argument("Tournament::orient: bad vertex pair");
  const int bu = u - 1, bv = v - 1;
  rows_[static_cast<std::size_t>(u)][static_cast<std::size_t>(bv >> 6)] |= 1ULL << (bv & 63);
  rows_[static_cast<std::size_t>(v)][static_cast<std::size_t>(bu >> 6)] &= ~(1ULL << (bu & 63));
}

std::uint64_t Tournament::arc_count() const {
  return static_cast<std::uint64_t>(n_) * static_cast<std::uint64_t>(n_ - 1) / 2;
}

const std::vector<std::uint64_t>& Tournament::row(int u) const {
  if (u < 1 || u > n_) throw std::invalid_argument("Tournament::row: bad vertex");
  return rows_[static_cast<std::size_t>(u)];
}

Tournament Tournament::transitive(int n) {
  Tournament t(n);
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v) t.orient(u, v);
  return t;
}

Tournament Tournament::random(int n, std::uint64_t seed) {
  Tournament t(n);
  Rng rng(seed);
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v) {
      if (rng.coin()) t.orient(u, v);
      else t.orient(v, u);
    }
  return t;
}

Tournament Tournament::cyclic(int n) {
  Tournament t(n);
  const int half = (n + 1) / 2;  // forward window is {1, ..., half-1}
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v) {
      const int d = (v - u) % n;
      bool forward;
      if (n % 2 == 0 && d == n / 2) forward = true;  // antipodal tie: low -> high
      else forward = d < half;
      if (forward) t.orient(u, v);
      else t.orient(v, u);
    }
  return t;
}

ArcSet Tournament::arc_set() const {
  std::vector<int> ground(static_cast<std::size_t>(n_));
  for (int v = 1; v <= n_; ++v) ground[static_cast<std::size_t>(v - 1)] = v;
  std::vector<Arc> arcs;
  arcs.reserve(arc_count());
  for (int u = 1; u <= n_; ++u)
    for (int v = u + 1; v <= n_; ++v) {
      if (arc(u, v)) arcs.emplace_back(u, v);
      else arcs.emplace_back(v, u);
    }
  return ArcSet(std::move(ground), std::move(arcs));
}

ArcSet Tournament::cross_arcs(const BipartitePair& pair) const {
  std::vector<Arc> arcs;
  for (int u : pair.left)
    for (int v : pair.right)
      if (arc(u, v)) arcs.emplace_back(u, v);
  std::vector<int> ground;
  ground.reserve(pair.left.size() + pair.right.size());
  for (int v : pair.left) ground.push_back(v);
  for (int v : pair.right) ground.push_back(v);
  return ArcSet(std::move(ground), std::move(arcs));
}

std::uint64_t Tournament::count_cross(const std::vector<int>& left,
                                      const std::vector<int>& right) const {
  std::vector<std::uint64_t> right_mask(static_cast<std::size_t>(words_), 0);
  for (int v : right) {
    const int b = v - 1;
    right_mask[static_cast<std::size_t>(b >> 6)] |= 1ULL << (b & 63);
  }
  std::uint64_t total = 0;
  for (int u : left) {
    const auto& r = row(u);
    for (int w = 0; w < words_; ++w)
      total += static_cast<std::uint64_t>(
          __builtin_popcountll(r[static_cast<std::size_t>(w)] & right_mask[static_cast<std::size_t>(w)]));
  }
  return total;
}

Tournament Tournament::read_text(std::istream& in) {
  std::string line;
  int n = 0;
  // First non-empty, non-comment line is n.
  while (std::getline(in, line)) {
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    std::istringstream head(line);
    if (!(head >> n)) throw std::runtime_error("tournament file: expected vertex count");
    std::string trailing;
    if (head >> trailing) throw std::runtime_error("tournament file: junk after vertex count");
    break;
  }
  if (n < 1) throw std::runtime_error("tournament file: vertex count must be >= 1");

  Tournament t(n);
  std::vector<char> seen(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
  std::uint64_t read = 0;
  while (std::getline(in, line)) {
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    std::istringstream row(line);
    int u = 0, v = 0;
    if (!(row >> u >> v)) throw std::runtime_error("tournament file: malformed arc line: " + line);
    std::string trailing;
    if (row >> trailing) throw std::runtime_error("tournament file: junk after arc: " + line);
    if (u < 1 || u > n || v < 1 || v > n) throw std::runtime_error("tournament file: vertex out of range");
    if (u == v) throw std::runtime_error("tournament file: loop arc");
    const std::size_t a = static_cast<std::size_t>(u - 1) * static_cast<std::size_t>(n) +
                          static_cast<std::size_t>(v - 1);
    const std::size_t b = static_cast<std::size_t>(v - 1) * static_cast<std::size_t>(n) +
                          static_cast<std::size_t>(u - 1);
    if (seen[a] || seen[b]) throw std::runtime_error("tournament file: duplicate pair");
    seen[a] = seen[b] = 1;
    t.orient(u, v);
    ++read;
  }
  if (read != t.arc_count())
    throw std::runtime_error("tournament file: missing pairs (read " + std::to_string(read) +
                             ", expected " + std::to_string(t.arc_count()) + ")");
  return t;
}

void Tournament::write_text(std::ostream& out) const {
  out << n_ << "\n";
  for (int u = 1; u <= n_; ++u)
    for (int v = u + 1; v <= n_; ++v) {
      if (arc(u, v)) out << u << " " << v << "\n";
      else out << v << " " << u << "\n";
    }
}

}  // namespace rankent
