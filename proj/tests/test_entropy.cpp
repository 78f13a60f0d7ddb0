#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rankent/decomposition.hpp"
#include "rankent/entropy.hpp"
#include "rankent/rng.hpp"

using namespace rankent;

TEST_CASE("entropy basics") {
  CHECK(entropy_bits({0.5, 0.5}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(entropy_bits({1.0, 0.0}) == doctest::Approx(0.0).epsilon(1e-12));
  const double u6 = entropy_bits(std::vector<double>(6, 1.0 / 6));
  CHECK(u6 == doctest::Approx(std::log2(6.0)).epsilon(1e-12));
  CHECK(binary_entropy(0.6) == doctest::Approx(0.9709505944546686).epsilon(1e-12));
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
}

TEST_CASE("relative entropy is nonpositive in the gain form") {
  CHECK(relative_entropy_bits({1.0, 0.0}, {0.5, 0.5}) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(relative_entropy_bits({0.3, 0.7}, {0.3, 0.7}) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(relative_entropy_bits({0.5, 0.5}, {1.0, 0.0}) ==
        -std::numeric_limits<double>::infinity());
  Rng rng(15);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> p(4), q(4);
    double sp = 0, sq = 0;
    for (int i = 0; i < 4; ++i) {
      p[static_cast<std::size_t>(i)] = rng.unit() + 1e-3;
      q[static_cast<std::size_t>(i)] = rng.unit() + 1e-3;
      sp += p[static_cast<std::size_t>(i)];
      sq += q[static_cast<std::size_t>(i)];
    }
    for (int i = 0; i < 4; ++i) {
      p[static_cast<std::size_t>(i)] /= sp;
      q[static_cast<std::size_t>(i)] /= sq;
    }
    CHECK(relative_entropy_bits(p, q) <= 1e-12);
  }
}

TEST_CASE("ranking distribution constructors and entropy") {
  const PermDistribution u = PermDistribution::uniform(3);
  CHECK(u.entropy_bits() == doctest::Approx(std::log2(6.0)).epsilon(1e-12));
  u.validate();
  const PermDistribution pt = PermDistribution::point_mass(Permutation::identity(3));
  CHECK(pt.entropy_bits() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(pt.prob(Permutation::identity(3)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(PermDistribution(9), std::invalid_argument);
}

TEST_CASE("arc probabilities") {
  const PermDistribution u = PermDistribution::uniform(4);
  for (int a = 1; a <= 4; ++a)
    for (int b = 1; b <= 4; ++b)
      if (a != b) CHECK(u.arc_probability(a, b) == doctest::Approx(0.5).epsilon(1e-12));
  const PermDistribution pt = PermDistribution::point_mass(Permutation::identity(4));
  CHECK(pt.arc_probability(1, 2) == doctest::Approx(1.0));
  CHECK(pt.arc_probability(2, 1) == doctest::Approx(0.0));
  const std::vector<double> bulk = u.arc_probabilities();
  CHECK(bulk[0 * 4 + 1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("ranking distribution text round trip") {
  PermDistribution d(3);
  d[Permutation::identity(3).rank()] = 0.25;
  d[Permutation::reversal(3).rank()] = 0.75;
  d.validate();
  std::ostringstream out;
  d.write_text(out);
  std::istringstream in(out.str());
  const PermDistribution back = PermDistribution::read_text(in);
  CHECK(back.n() == 3);
  for (std::uint64_t r = 0; r < 6; ++r) CHECK(back[r] == doctest::Approx(d[r]).epsilon(1e-12));

  std::istringstream dup("1 2 3 : 0.5\n1 2 3 : 0.5\n");
  CHECK_THROWS(PermDistribution::read_text(dup));
  std::istringstream short_mass("1 2 3 : 0.5\n");
  CHECK_THROWS(PermDistribution::read_text(short_mass));
}

TEST_CASE("crossing counts at m=2") {
  CHECK(crossing_count({1, 2}, 2) == 0);
  CHECK(crossing_count({3, 4}, 2) == 4);
  CHECK(crossing_count({1, 4}, 2) == 2);
  CHECK(crossing_count_mask(0b0011, 2) == 0);
  CHECK(crossing_count_mask(0b1100, 2) == 4);
  CHECK(crossing_count_mask(0b1001, 2) == 2);
}

TEST_CASE("subset distribution basics") {
  const SubsetDistribution u2 = SubsetDistribution::uniform(2);
  CHECK(u2.atoms().size() == 6);
  CHECK(u2.entropy_bits() == doctest::Approx(std::log2(6.0)).epsilon(1e-12));
  CHECK(u2.expected_crossings() == doctest::Approx(2.0).epsilon(1e-12));
  for (double p : u2.position_marginals()) CHECK(p == doctest::Approx(0.5).epsilon(1e-12));

  const SubsetDistribution u3 = SubsetDistribution::uniform(3);
  CHECK(u3.expected_crossings() == doctest::Approx(4.5).epsilon(1e-12));

  const SubsetDistribution top = SubsetDistribution::point_mass(2, 0b1100);
  CHECK(top.entropy_bits() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(top.expected_crossings() == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("subset distribution text round trip") {
  const SubsetDistribution u = SubsetDistribution::uniform(2);
  std::ostringstream out;
  u.write_text(out);
  std::istringstream in(out.str());
  const SubsetDistribution back = SubsetDistribution::read_text(in);
  CHECK(back.m() == 2);
  CHECK(back.atoms().size() == 6);
  CHECK(back.entropy_bits() == doctest::Approx(u.entropy_bits()).epsilon(1e-12));
}

TEST_CASE("relative position mask for equal sides") {
  const BipartitePair pair({1, 2}, {3, 4});
  CHECK(relative_position_mask(Permutation::identity(4), pair) == 0b1100);
  CHECK(relative_position_mask(Permutation::reversal(4), pair) == 0b0011);
}

TEST_CASE("block distribution of the uniform ranking is uniform") {
  const PermDistribution u = PermDistribution::uniform(4);
  const SubsetDistribution block = block_distribution(u, BipartitePair({1, 2}, {3, 4}));
  REQUIRE(block.atoms().size() == 6);
  for (const auto& [mask, p] : block.atoms()) CHECK(p == doctest::Approx(1.0 / 6).epsilon(1e-12));
}

TEST_CASE("crossing chain on the top point mass") {
  const SubsetDistribution top = SubsetDistribution::point_mass(2, 0b1100);
  const MpcReport rep = mpc_check(top, 0.2);
  CHECK(rep.hypothesis_holds);  // 4 > 2.8
  CHECK(rep.expected_crossings == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(rep.positive_delta_sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.delta_sq_sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.entropy == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rep.marginal_entropy_cap == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(rep.entropy_cap == doctest::Approx((1 - 0.04 / 8) * 4).epsilon(1e-12));
  CHECK(rep.chain_holds);
  CHECK(rep.failures.empty());
}

TEST_CASE("crossing chain flags the uniform subset distribution") {
  const MpcReport rep = mpc_check(SubsetDistribution::uniform(2), 0.2);
  CHECK_FALSE(rep.hypothesis_holds);  // E f = m^2/2 exactly, not above threshold
  // conditional links are not failures when the hypothesis is off
  CHECK(rep.chain_holds);
}

TEST_CASE("mean shift identity holds for random subset distributions") {
  Rng rng(100);
  for (int trial = 0; trial < 25; ++trial) {
    const int m = rng.range(2, 5);
    std::vector<std::pair<std::uint32_t, double>> atoms;
    double total = 0;
    for (std::uint32_t mask = 0; mask < (1u << (2 * m)); ++mask) {
      if (__builtin_popcount(mask) != m) continue;
      const double w = rng.unit() + 1e-6;
      atoms.emplace_back(mask, w);
      total += w;
    }
    for (auto& [mask, p] : atoms) p /= total;
    const SubsetDistribution d(m, atoms);
    const MpcReport rep = mpc_check(d, 0.2);  // identity inside is revalidated
    double shift = 0;
    const std::vector<double> marg = d.position_marginals();
    for (int b = 1; b <= 2 * m; ++b)
      shift += (marg[static_cast<std::size_t>(b - 1)] - 0.5) * b;
    CHECK(rep.expected_crossings ==
          doctest::Approx(m * m / 2.0 + shift).epsilon(1e-9));
  }
}
