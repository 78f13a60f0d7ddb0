#pragma once

#include <cstdint>
#include <vector>

namespace rankent {

std::uint64_t factorial(int n);  // n <= 20

// Permutation of [n] = {1,...,n}, stored as the image list sigma(1..n).
// Throughout the library sigma(v) is the *position* of vertex v in the
// ranking, so sigma(u) < sigma(v) means u is ranked ahead of v.
class Permutation {
 public:
  explicit Permutation(std::vector<int> images);

  static Permutation identity(int n);
  static Permutation reversal(int n);
  // Lexicographic unrank over image lists, rank in [0, n!).
  static Permutation from_rank(int n, std::uint64_t rank);

  int size() const { return static_cast<int>(images_.size()); }
  int operator()(int v) const { return images_[static_cast<std::size_t>(v - 1)]; }
  const std::vector<int>& images() const { return images_; }

  std::uint64_t rank() const;
  Permutation inverse() const;

  bool operator==(const Permutation& other) const { return images_ == other.images_; }

 private:
  std::vector<int> images_;
};

// Lexicographic image-list unrank written into a caller buffer (hot loops).
void unrank_into(int n, std::uint64_t rank, int* out);

}  // namespace rankent
