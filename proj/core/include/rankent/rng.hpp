#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rankent {

// Deterministic generator with explicitly specified sampling algorithms.
// <random>'s distributions are implementation-defined, which would make
// "same seed, same bytes" depend on the standard library; everything here
// is pinned down so runs replay bit-for-bit anywhere.
//
// Engine: xoshiro256++ seeded from splitmix64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) word = splitmix64(x);
  }

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Unbiased integer in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  // Inclusive integer range.
  int range(int lo, int hi) {
    if (lo > hi) throw std::invalid_argument("Rng::range: empty range");
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  // Uniform in [0,1) with 53 random bits.
  double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool coin() { return (next_u64() >> 63) != 0; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // k distinct values from {0,...,n-1} by partial Fisher-Yates, in the
  // order drawn (not sorted).
  std::vector<int> sample(int n, int k) {
    if (k < 0 || k > n) throw std::invalid_argument("Rng::sample: need 0 <= k <= n");
    std::vector<int> pool(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
    std::vector<int> out(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      const std::size_t j =
          static_cast<std::size_t>(i) + static_cast<std::size_t>(below(static_cast<std::uint64_t>(n - i)));
      std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
      out[static_cast<std::size_t>(i)] = pool[static_cast<std::size_t>(i)];
    }
    return out;
  }

  // Independent stream derived from the original seed; used to give each
  // tree node / trial its own generator without sequencing artifacts.
  Rng fork(std::uint64_t stream) const {
    std::uint64_t x = seed_ ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
    return Rng(splitmix64(x));
  }

  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t seed_;
  std::uint64_t state_[4];
};

}  // namespace rankent
