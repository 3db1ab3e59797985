#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "dyad/adversary.hpp"
#include "dyad/oracle.hpp"
#include "naive.hpp"

using namespace dyad;

TEST(Oracle, FinalStageHasNoExtension) {
  const auto fam = build_counterexample(ChainSpec::leftmost(1, 2, 4));
  Colouring base = fam.forced_colouring(1).extended_by(IntervalSet::from_intervals(4, std::vector{fam.J(1)}));
  auto rep = oracle_extensions(base, fam.spec.params());
  EXPECT_EQ(rep.count, 0u);
  EXPECT_TRUE(rep.witnesses.empty());
  EXPECT_TRUE(naive::extensions(base, Rational(1, 2)).empty());
}

TEST(Oracle, FirstStageIsForced) {
  const auto fam = build_counterexample(ChainSpec::leftmost(1, 2, 4));
  Colouring base = fam.initial.extended_by(IntervalSet::from_intervals(4, std::vector{fam.J(2)}));
  auto rep = oracle_extensions(base, fam.spec.params());
  ASSERT_EQ(rep.count, 1u);
  EXPECT_EQ(rep.witnesses.front().colour_of(fam.J(2)), 1);
}

TEST(Oracle, TotalHomogeneousBaseIsItsOwnWitness) {
  Colouring c(IntervalSet(3, {0, 3, 6}), 2, {1, 2, 1});
  auto rep = oracle_extensions(c, HomogeneityParams(Rational(1, 2), 2));
  ASSERT_EQ(rep.count, 1u);
  EXPECT_EQ(rep.witnesses.front(), c);
}

TEST(Oracle, LimitAndBudget) {
  Colouring blank(IntervalSet::full(3), 2);
  OracleOptions opts;
  opts.limit = 1;
  auto rep = oracle_extensions(blank, HomogeneityParams(Rational(1, 2), 2), opts);
  EXPECT_EQ(rep.count, 1u);
  EXPECT_TRUE(rep.at_least);

  opts.limit = std::uint64_t{1} << 62;
  opts.budget = 3;
  try {
    (void)oracle_extensions(Colouring(IntervalSet::full(4), 2), HomogeneityParams(Rational(1, 2), 2), opts);
    FAIL() << "expected budget_exceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::budget_exceeded);
  }
  opts = {};
  opts.limit = 0;
  EXPECT_THROW((void)oracle_extensions(blank, HomogeneityParams(Rational(1, 2), 2), opts), Error);
}

TEST(Oracle, CanonicalCountOfStageZero) {
  for (auto [a, n] : {std::pair{1, 2}, {1, 3}, {2, 2}}) {
    const auto fam = build_counterexample(ChainSpec::leftmost(a, n, n + a + 1));
    OracleOptions opts;
    opts.canonical = true;
    auto rep = oracle_extensions(Colouring(fam.C(0), fam.spec.d()), fam.spec.params(), opts);
    ASSERT_TRUE(rep.canonical_count);
    EXPECT_EQ(*rep.canonical_count, 1u);
  }
  OracleOptions opts;
  opts.canonical = true;
  EXPECT_THROW((void)oracle_extensions(Colouring(IntervalSet(2, {0}), 2, {1}),
                                       HomogeneityParams(Rational(1, 2), 2), opts),
               Error);
}

TEST(Oracle, AgreesWithNaiveEnumerator) {
  std::mt19937_64 rng(31);
  int nonzero = 0, zero = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int j = 2 + static_cast<int>(rng() % 4);
    const int d = 2;
    const Rational eta = rng() % 2 ? Rational(1, 2) : Rational(1, 3);
    auto s = naive::random_subset(j, 0.5, rng);
    while (s.size() > 12) s = naive::random_subset(j, 0.3, rng);
    // Keep some colours, blank the rest.
    std::vector<int> colours(s.size());
    for (auto& c : colours) c = rng() % 3 == 0 ? 1 + static_cast<int>(rng() % d) : kUncoloured;
    Colouring base(s, d, colours);
    OracleOptions opts;
    opts.max_witnesses = 1u << 20;
    opts.canonical = base.coloured_count() == 0;
    auto rep = oracle_extensions(base, HomogeneityParams(eta, d), opts);
    auto expect = naive::extensions(base, eta);
    ASSERT_EQ(rep.count, expect.size());
    std::vector<std::vector<int>> got;
    for (const auto& w : rep.witnesses) got.emplace_back(w.colours().begin(), w.colours().end());
    std::sort(got.begin(), got.end());
    std::sort(expect.begin(), expect.end());
    EXPECT_EQ(got, expect);
    if (opts.canonical) EXPECT_EQ(*rep.canonical_count, naive::classes(expect));
    (expect.empty() ? zero : nonzero)++;
  }
  EXPECT_GT(zero, 0);
  EXPECT_GT(nonzero, 0);
}

TEST(Oracle, AgreesWithNaiveEnumeratorLargerD) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 60; ++trial) {
    const int j = 3 + static_cast<int>(rng() % 2);
    const int d = 3 + static_cast<int>(rng() % 2);
    auto s = naive::random_subset(j, 0.5, rng);
    while (s.size() > 8) s = naive::random_subset(j, 0.3, rng);
    Colouring base(s, d);
    OracleOptions opts;
    opts.canonical = true;
    opts.max_witnesses = 0;
    auto rep = oracle_extensions(base, HomogeneityParams(Rational(1, 2), d), opts);
    auto expect = naive::extensions(base, Rational(1, 2));
    EXPECT_EQ(rep.count, expect.size());
    EXPECT_EQ(*rep.canonical_count, naive::classes(expect));
  }
}

TEST(Canonicalize, Examples) {
  Colouring c(IntervalSet(2, {0, 1}), 3, {3, 1});
  auto k = canonicalize(c);
  EXPECT_EQ(k, Colouring(IntervalSet(2, {0, 1}), 3, {1, 2}));
  EXPECT_EQ(canonicalize(k), k);
  Colouring a(IntervalSet(2, {0, 3}), 2, {1, 2});
  Colouring b(IntervalSet(2, {0, 3}), 2, {2, 1});
  EXPECT_EQ(canonicalize(a), canonicalize(b));
  EXPECT_THROW((void)canonicalize(Colouring(IntervalSet(2, {0}), 2)), Error);
}
