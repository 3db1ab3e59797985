#include <gtest/gtest.h>

#include <random>

#include "dyad/adversary.hpp"
#include "dyad/criteria.hpp"
#include "naive.hpp"

using namespace dyad;

TEST(BuildCounterexample, StageSizes) {
  const auto fam = build_counterexample(ChainSpec::leftmost(1, 2, 4));
  EXPECT_EQ(fam.C(0).size(), 2u);
  EXPECT_EQ(fam.C(1).size(), 3u);
  EXPECT_EQ(fam.C(2).size(), 4u);
  EXPECT_EQ(fam.spec.d(), 2);
  EXPECT_EQ(fam.spec.eta(), Rational(1, 2));
}

TEST(BuildCounterexample, InitialColourConvention) {
  const auto fam = build_counterexample(ChainSpec::leftmost(2, 3, 6));
  EXPECT_EQ(fam.C(0).size(), 4u);
  EXPECT_EQ(fam.initial.colour_of(fam.J(4)), 1);
  EXPECT_EQ(fam.initial.colour_of(fam.I(1)), 2);
  EXPECT_EQ(fam.initial.colour_of(fam.I(2)), 3);
  EXPECT_EQ(fam.initial.colour_of(fam.I(3)), 4);
}

TEST(BuildCounterexample, RejectsShallowBoard) {
  EXPECT_THROW((void)build_counterexample(ChainSpec::leftmost(1, 2, 3)), Error);
  EXPECT_THROW((void)build_counterexample(ChainSpec::leftmost(0, 2, 4)), Error);
  EXPECT_THROW((void)build_counterexample(ChainSpec::leftmost(1, 1, 4)), Error);
  auto spec = ChainSpec::leftmost(1, 2, 4);
  spec.anchor = 8;
  EXPECT_THROW((void)build_counterexample(spec), Error);
}

TEST(BuildCounterexample, GeometryOnRandomPlacements) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const int a = 1 + static_cast<int>(rng() % 2);
    const int n = 2 + static_cast<int>(rng() % 3);
    const int j = n + a + 1 + static_cast<int>(rng() % 2);
    const auto fam = build_counterexample(ChainSpec::random(a, n, j, rng));
    for (int i = 1; i <= n + 1; ++i) {
      EXPECT_EQ(parent(fam.L(i)), fam.L(i + 1));
      EXPECT_EQ(fam.P(i), brother(fam.L(i)));
      EXPECT_TRUE(contains(fam.P(i), fam.J(i)));
    }
    for (int i = 1; i < fam.spec.d(); ++i) EXPECT_TRUE(contains(fam.L(1), fam.I(i)));
  }
}

TEST(VerifyCounterexample, GridWithOracle) {
  for (auto [a, n] : {std::pair{1, 2}, {1, 3}, {2, 2}}) {
    const auto fam = build_counterexample(ChainSpec::leftmost(a, n, n + a + 1));
    auto rep = verify_counterexample(fam, true, kDefaultSearchBudget);
    EXPECT_EQ(rep.stage0_classes, 1u);
    EXPECT_EQ(rep.unique_counts, std::vector<std::uint64_t>(static_cast<std::size_t>(n - 1), 1));
    EXPECT_EQ(rep.final_count, 0u);
    EXPECT_TRUE(rep.boundary_holds_relaxed);
    EXPECT_FALSE(rep.boundary_holds_strict);
    EXPECT_TRUE(rep.chain_profile_ok);
    EXPECT_TRUE(rep.ok());
  }
}

TEST(VerifyCounterexample, FastPathAgreesWithOracle) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    const auto fam = build_counterexample(ChainSpec::random(1, 3, 5, rng));
    auto fast = verify_counterexample(fam, false, kDefaultSearchBudget);
    auto slow = verify_counterexample(fam, true, kDefaultSearchBudget);
    EXPECT_EQ(fast.unique_counts, slow.unique_counts);
    EXPECT_EQ(fast.final_count, slow.final_count);
    EXPECT_EQ(fast.stage0_classes, slow.stage0_classes);
    EXPECT_TRUE(fast.ok());
  }
}

TEST(VerifyCounterexample, StagesMatchNaiveEnumeration) {
  // Independent check of every stage claim for the smallest family.
  const auto fam = build_counterexample(ChainSpec::leftmost(1, 2, 4));
  const Rational eta(1, 2);
  EXPECT_EQ(naive::classes(naive::extensions(Colouring(fam.C(0), 2), eta)), 1u);
  auto stage1 = naive::extensions(fam.initial.extended_by(fam.C(1).minus(fam.C(0))), eta);
  ASSERT_EQ(stage1.size(), 1u);
  EXPECT_EQ(Colouring(fam.C(1), 2, stage1.front()), fam.forced_colouring(1));
  EXPECT_TRUE(naive::extensions(fam.forced_colouring(1).extended_by(fam.C(2).minus(fam.C(1))), eta).empty());
}

TEST(PrevisibilityProfile, AllFalse) {
  for (auto [a, n] : {std::pair{1, 2}, {1, 3}, {2, 2}}) {
    const auto fam = build_counterexample(ChainSpec::leftmost(a, n, n + a + 1));
    EXPECT_EQ(previsibility_profile(fam), std::vector<bool>(static_cast<std::size_t>(n), false));
  }
}
