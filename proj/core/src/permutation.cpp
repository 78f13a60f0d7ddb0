#include "rankent/permutation.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rankent {

std::uint64_t factorial(int n) {
  if (n < 0 || n > 20) throw std::invalid_argument("factorial: need 0 <= n <= 20");
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  const int n = static_cast<int>(images_.size());
  if (n == 0) throw std::invalid_argument("Permutation: empty image list");
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int x : images_) {
    if (x < 1 || x > n) throw std::invalid_argument("Permutation: image out of range");
    if (seen[static_cast<std::size_t>(x - 1)]) throw std::invalid_argument("Permutation: repeated image");
    seen[static_cast<std::size_t>(x - 1)] = 1;
  }
}

Permutation Permutation::identity(int n) {
  if (n < 1) throw std::invalid_argument("Permutation::identity: need n >= 1");
  std::vector<int> images(static_cast<std::size_t>(n));
  std::iota(images.begin(), images.end(), 1);
  return Permutation(std::move(images));
}

Permutation Permutation::reversal(int n) {
  if (n < 1) throw std::invalid_argument("Permutation::reversal: need n >= 1");
  std::vector<int> images(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) images[static_cast<std::size_t>(i)] = n - i;
  return Permutation(std::move(images));
}

Permutation Permutation::from_rank(int n, std::uint64_t rank) {
  if (n < 1) throw std::invalid_argument("Permutation::from_rank: need n >= 1");
  if (rank >= factorial(n)) throw std::invalid_argument("Permutation::from_rank: rank out of range");
  std::vector<int> images(static_cast<std::size_t>(n));
  unrank_into(n, rank, images.data());
  return Permutation(std::move(images));
}

void unrank_into(int n, std::uint64_t rank, int* out) {
  int pool[24];
  for (int i = 0; i < n; ++i) pool[i] = i + 1;
  std::uint64_t f = factorial(n);
  int remaining = n;
  for (int i = 0; i < n; ++i) {
    f /= static_cast<std::uint64_t>(remaining);
    const int idx = static_cast<int>(rank / f);
    rank %= f;
    out[i] = pool[idx];
    for (int j = idx; j + 1 < remaining; ++j) pool[j] = pool[j + 1];
    --remaining;
  }
}

std::uint64_t Permutation::rank() const {
  const int n = size();
  std::uint64_t r = 0;
  std::uint64_t f = factorial(n);
  for (int i = 0; i < n; ++i) {
    f /= static_cast<std::uint64_t>(n - i);
    int smaller = 0;
    for (int j = i + 1; j < n; ++j)
      if (images_[static_cast<std::size_t>(j)] < images_[static_cast<std::size_t>(i)]) ++smaller;
    r += static_cast<std::uint64_t>(smaller) * f;
  }
  return r;
}

Permutation Permutation::inverse() const {
  const int n = size();
  std::vector<int> inv(static_cast<std::size_t>(n));
  for (int v = 1; v <= n; ++v) inv[static_cast<std::size_t>(images_[static_cast<std::size_t>(v - 1)] - 1)] = v;
  return Permutation(std::move(inv));
}

}  // namespace rankent
