#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "tssort/noise.hpp"
#include "tssort/random.hpp"

namespace tssort {
namespace {

TEST(NoisyComparator, ZeroNoiseIsGroundTruth) {
  NoisyComparator cmp({0.0, 5.0, 2.5}, 0.0, 1);
  EXPECT_EQ(cmp.compare(1, 0), Outcome::first_wins);
  EXPECT_EQ(cmp.compare(0, 1), Outcome::second_wins);
  EXPECT_EQ(cmp.compare(2, 0), Outcome::first_wins);
  EXPECT_TRUE(cmp.less(2, 1));
  EXPECT_EQ(cmp.draws_made(), 4u);
}

TEST(NoisyComparator, FullNoiseAlwaysInverts) {
  NoisyComparator cmp = identity_comparator(10, 1.0, 2);
  for (std::size_t a = 0; a < 10; ++a)
    for (std::size_t b = 0; b < 10; ++b)
      if (a != b) EXPECT_EQ(cmp.compare(a, b), a > b ? Outcome::second_wins : Outcome::first_wins);
}

TEST(NoisyComparator, FlipRateMatchesNoiseLevel) {
  NoisyComparator cmp = identity_comparator(2, 0.1, 3);
  int flips = 0;
  for (int k = 0; k < 10000; ++k) flips += cmp.compare(1, 0) == Outcome::second_wins;
  EXPECT_GE(flips, 910);
  EXPECT_LE(flips, 1090);
}

TEST(NoisyComparator, RepeatedQueriesAreIndependent) {
  NoisyComparator cmp = identity_comparator(2, 0.5, 4);
  int disagreements = 0;
  Outcome previous = cmp.compare(0, 1);
  for (int k = 0; k < 10000; ++k) {
    const Outcome now = cmp.compare(0, 1);
    disagreements += now != previous;
    previous = now;
  }
  EXPECT_NEAR(disagreements / 10000.0, 0.5, 0.03);
}

TEST(NoisyComparator, NeverDrawsAndIsSeedReproducible) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + gen() % 20;
    const double p = std::uniform_real_distribution<double>(0.0, 1.0)(gen);
    const std::uint64_t seed = gen();
    NoisyComparator a = identity_comparator(n, p, seed);
    NoisyComparator b = identity_comparator(n, p, seed);
    for (int k = 0; k < 20; ++k) {
      const std::size_t x = gen() % n;
      const std::size_t y = (x + 1 + gen() % (n - 1)) % n;
      const Outcome oa = a.compare(x, y);
      ASSERT_NE(oa, Outcome::draw);
      ASSERT_EQ(oa, b.compare(x, y));
    }
  }
}

TEST(NoisyComparator, ArgumentOrderOnlyMirrorsTheOutcome) {
  // With identical streams, swapping the arguments yields the inverted outcome.
  NoisyComparator a = identity_comparator(6, 0.4, 9);
  NoisyComparator b = identity_comparator(6, 0.4, 9);
  for (int k = 0; k < 500; ++k) {
    const std::size_t x = k % 6;
    const std::size_t y = (k + 1 + k / 6) % 6 == x ? (x + 1) % 6 : (k + 1 + k / 6) % 6;
    EXPECT_EQ(a.compare(x, y), invert(b.compare(y, x)));
  }
}

TEST(NoisyComparator, RejectsInvalidInput) {
  EXPECT_THROW(NoisyComparator({1.0, 2.0}, -0.1, 0), std::invalid_argument);
  EXPECT_THROW(NoisyComparator({1.0, 2.0}, 1.5, 0), std::invalid_argument);
  EXPECT_THROW(NoisyComparator({1.0, 1.0}, 0.1, 0), std::invalid_argument);
  NoisyComparator cmp = identity_comparator(3, 0.1, 0);
  EXPECT_THROW(cmp.compare(0, 3), std::out_of_range);
  EXPECT_THROW(cmp.compare(1, 1), std::invalid_argument);
  EXPECT_EQ(cmp.draws_made(), 0u);
}

TEST(Rng, MatchesStandardGenerator) {
  std::mt19937_64 reference(5489);
  Rng rng(5489);
  for (int k = 1; k < 10000; ++k) ASSERT_EQ(rng.next(), reference());
  EXPECT_EQ(rng.next(), 9981545732273789042ull);
}

TEST(Rng, DeviateRanges) {
  Rng rng(6);
  std::set<std::uint64_t> seen;
  for (int k = 0; k < 10000; ++k) {
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const std::uint64_t r = rng.below(7);
    ASSERT_LT(r, 7u);
    seen.insert(r);
  }
  EXPECT_EQ(seen.size(), 7u);
  EXPECT_EQ(Rng(1).below(1), 0u);
}

TEST(Rng, ShuffleIsAPermutation) {
  Rng rng(7);
  for (std::size_t n = 0; n < 200; ++n) {
    auto v = shuffled_identity(n, rng);
    std::sort(v.begin(), v.end());
    for (std::size_t k = 0; k < n; ++k) ASSERT_EQ(v[k], k);
  }
  Rng a(8), b(8);
  EXPECT_EQ(shuffled_identity(50, a), shuffled_identity(50, b));
}

TEST(DeriveSeed, SensitiveToEveryPart) {
  const std::uint64_t base = derive_seed({1, 64, 100, 3, 0});
  EXPECT_EQ(base, derive_seed({1, 64, 100, 3, 0}));
  EXPECT_NE(base, derive_seed({2, 64, 100, 3, 0}));
  EXPECT_NE(base, derive_seed({1, 32, 100, 3, 0}));
  EXPECT_NE(base, derive_seed({1, 64, 0, 3, 0}));
  EXPECT_NE(base, derive_seed({1, 64, 100, 4, 0}));
  EXPECT_NE(base, derive_seed({1, 64, 100, 3, 1}));
}

}  // namespace
}  // namespace tssort
