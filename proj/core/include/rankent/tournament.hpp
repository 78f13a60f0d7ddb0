#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "rankent/arc_set.hpp"

namespace rankent {

// Complete oriented graph on [n]: every unordered pair carries exactly one
// arc. Stored as per-vertex out-neighbor bitsets (vertex v lives at bit v-1).
class Tournament {
 public:
  static Tournament transitive(int n);                       // u -> v iff u < v
  static Tournament random(int n, std::uint64_t seed);       // each pair a fair coin
  // u -> v iff (v - u) mod n lies in {1, ..., ceil(n/2) - 1}, with the
  // antipodal pair (even n) oriented low -> high. For odd n this is the
  // classic rotation tournament.
  static Tournament cyclic(int n);

  int size() const { return n_; }
  bool arc(int u, int v) const;        // true iff u -> v
  void orient(int u, int v);           // make the (u,v) pair point u -> v
  std::uint64_t arc_count() const;     // n(n-1)/2

  // Out-neighbor bit row of u (bit v-1 set iff u -> v), words little-endian.
  const std::vector<std::uint64_t>& row(int u) const;
  int words_per_row() const { return words_; }

  ArcSet arc_set() const;  // the whole tournament over ground [n]
  // Arcs of the tournament going left -> right (a cross pair block).
  ArcSet cross_arcs(const BipartitePair& pair) const;
  // Number of arcs going left -> right (bitset popcount path).
  std::uint64_t count_cross(const std::vector<int>& left, const std::vector<int>& right) const;

  // Text format: first line n, then one "u v" line per arc, every unordered
  // pair exactly once. Reader rejects loops, out-of-range vertices, duplicate
  // and missing pairs. Writer emits pairs in ascending (min,max) order.
  static Tournament read_text(std::istream& in);
  void write_text(std::ostream& out) const;

 private:
  explicit Tournament(int n);

  int n_ = 0;
  int words_ = 0;
  std::vector<std::vector<std::uint64_t>> rows_;  // index 0 unused
};

}  // namespace rankent
