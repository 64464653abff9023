#include "fflab/geoexp.hpp"

#include <gtest/gtest.h>

#include "fflab/oracles.hpp"
#include "test_support.hpp"

namespace fflab {
namespace {

const FieldSpec F7 = FieldSpec::prime(7);

TEST(Distances, Examples) {
  const auto a = ESet::from_ints(F7, {0, 1, 2});
  EXPECT_EQ(to_string(distance_set(a, 1)), "0,1,4");
  EXPECT_EQ(to_string(distance_set(a, 2)), "0,1,2,4,5");
  EXPECT_EQ(oracle::distance_set_bruteforce(a, 2), distance_set(a, 2));
  for (int d : {1, 2, 5}) EXPECT_EQ(to_string(distance_set(ESet::from_ints(F7, {4}), d)), "0");
  EXPECT_TRUE(oracle::distance_set_bruteforce(ESet(F7), 2).empty());
  EXPECT_THROW(distance_set(a, 0), Error);
  EXPECT_THROW(oracle::distance_set_bruteforce(a, 4), Error);
}

TEST(Dots, Examples) {
  EXPECT_EQ(to_string(dot_set(ESet::from_ints(F7, {1, 2}), 2)), "1,2,3,4,5,6");
  EXPECT_EQ(to_string(dot_set(ESet::from_ints(F7, {0}), 4)), "0");
  EXPECT_EQ(to_string(dot_set(ESet::from_ints(F7, {1}), 3)), "3");
}

TEST(IteratedGSum, Examples) {
  const auto a = ESet::from_ints(F7, {1, 2});
  const auto diff = Quad2::difference_square(F7);
  const auto prod = Quad2::product(F7);
  EXPECT_EQ(to_string(iterated_g_sum(std::vector{diff, prod}, a)), "1,2,3,4,5");
  const auto b = ESet::from_ints(F7, {0, 1, 2});
  EXPECT_EQ(iterated_g_sum(std::vector{diff, diff}, b), distance_set(b, 2));
  EXPECT_EQ(iterated_g_sum(std::vector{prod}, b), product_set(b, b));
  try {
    iterated_g_sum(std::vector{diff, parse_quad2(F7, "x^2 + y")}, a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ineligible);
  }
}

TEST(GPlusC, Examples) {
  EXPECT_EQ(to_string(g_plus_c(Quad2::product(F7), ESet::from_ints(F7, {1, 2}), ESet::from_ints(F7, {0}))), "1,2,4");
  EXPECT_EQ(to_string(g_plus_c(Quad2::difference_square(F7), ESet::from_ints(F7, {0, 1}), ESet::from_ints(F7, {0, 1}))),
            "0,1,2");
  EXPECT_TRUE(g_plus_c(Quad2::product(F7), ESet(F7), ESet::from_ints(F7, {1})).empty());
  EXPECT_THROW(g_plus_c(parse_quad2(F7, "x^2"), ESet(F7), ESet(F7)), Error);
}

TEST(SumProduct, Examples) {
  const auto sp = sum_product_pair(ESet::from_ints(F7, {1, 2}));
  EXPECT_EQ(sp.difference, 3u);
  EXPECT_EQ(sp.product, 3u);
  EXPECT_EQ(sp.max, 3u);
  const auto one = sum_product_pair(ESet::from_ints(F7, {5}));
  EXPECT_EQ(one.max, 1u);
  for (std::uint64_t p : {3ULL, 5ULL, 7ULL}) {
    const auto E = FieldSpec::extension(p);
    std::vector<Elem> sub;
    for (std::uint64_t u = 0; u < p; ++u) sub.push_back(Elem{static_cast<std::int64_t>(u)});
    const auto s = sum_product_pair(ESet::from(E, sub));
    EXPECT_EQ(s.difference, p);
    EXPECT_EQ(s.product, p);
  }
}

TEST(Exponents, ClosedForms) {
  EXPECT_EQ(tower_exponent(1), Rational(1));
  EXPECT_EQ(tower_exponent(2), Rational(3, 2));
  EXPECT_EQ(tower_exponent(3), Rational(7, 4));
  EXPECT_EQ(max_proxy_exponent(1), Rational(6, 5));
  EXPECT_EQ(max_proxy_exponent(2), Rational(8, 5));
  EXPECT_EQ(max_proxy_exponent(3), Rational(9, 5));
  EXPECT_EQ(max_proxy_exponent(4), Rational(19, 10));
}

TEST(GrowthTable, Examples) {
  const auto rows = growth_table(ESet::from_ints(F7, {0, 1, 2}), 2, GrowthStatistic::distance);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].cardinality, 3u);
  EXPECT_EQ(rows[1].cardinality, 5u);
  EXPECT_DOUBLE_EQ(rows[0].ratio, 1.0);
  EXPECT_DOUBLE_EQ(rows[1].ratio, 5 / std::pow(3.0, 1.5));

  const auto sat = growth_table(ESet::from_ints(F7, {0, 1, 2}), 4, GrowthStatistic::distance);
  EXPECT_TRUE(sat[2].saturated);
  EXPECT_EQ(sat[2].cardinality, 7u);
  EXPECT_DOUBLE_EQ(sat[2].ratio, 1.0);

  const auto both = growth_table(ESet::from_ints(F7, {1, 2}), 2, GrowthStatistic::max_of_both);
  EXPECT_EQ(*both[1].dot_cardinality, 6u);
  EXPECT_EQ(both[1].cardinality, std::max(*both[1].dot_cardinality, *both[1].distance_cardinality));
  EXPECT_EQ(both[0].predicted_exponent, Rational(6, 5));
}

TEST(GrowthTable, IntegerIntervalMatchesBruteForce) {
  const auto Z = FieldSpec::integers();
  std::vector<Elem> v;
  for (std::int64_t i = 1; i <= 9; ++i) v.push_back(Elem{i});
  const auto a = ESet::from(Z, v);
  const auto rows = growth_table(a, 2, GrowthStatistic::distance);
  EXPECT_EQ(rows[1].cardinality, oracle::distance_set_bruteforce(a, 2).size());
  EXPECT_FALSE(rows[1].saturated);
}

// Every subset of F_p of size at most 6, via bitmask enumeration, against the oracle.
TEST(Properties, DistanceSetMatchesOracleOnAllSmallSubsets) {
  for (std::uint64_t p : {7ULL, 11ULL}) {
    const auto F = FieldSpec::prime(p);
    for (std::uint32_t mask = 1; mask < (1u << p); ++mask) {
      if (std::popcount(mask) > 6) continue;
      std::vector<Elem> elems;
      for (std::uint64_t i = 0; i < p; ++i) {
        if (mask >> i & 1u) elems.push_back(Elem{static_cast<std::int64_t>(i)});
      }
      const auto a = ESet::from(F, elems);
      // |A|^{2d} <= 10^7 limits d = 3 to |A| <= 14; all sizes here qualify.
      for (int d = 1; d <= 3; ++d) ASSERT_EQ(distance_set(a, d), oracle::distance_set_bruteforce(a, d)) << to_string(a);
    }
  }
}

TEST(Properties, MonotoneAndSaturationAbsorbing) {
  SplitMix64 rng(71);
  for (std::uint64_t p : {31ULL, 101ULL, 1009ULL}) {
    const auto F = FieldSpec::prime(p);
    for (int trial = 0; trial < 10; ++trial) {
      const auto a = testing::random_subset(F, 2 + rng.below(8), rng);
      for (auto stat : {GrowthStatistic::distance, GrowthStatistic::max_of_both}) {
        const auto rows = growth_table(a, 6, stat);
        for (std::size_t i = 1; i < rows.size(); ++i) {
          EXPECT_GE(rows[i].cardinality, rows[i - 1].cardinality);
          EXPECT_TRUE(!rows[i - 1].saturated || rows[i].saturated);
        }
      }
    }
  }
}

TEST(Properties, IteratedGSumCrossChecks) {
  SplitMix64 rng(72);
  const auto F = FieldSpec::prime(101);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = testing::random_subset(F, 1 + rng.below(8), rng);
    for (int d = 1; d <= 4; ++d) {
      EXPECT_EQ(iterated_g_sum(std::vector(d, Quad2::difference_square(F)), a), distance_set(a, d));
      EXPECT_EQ(iterated_g_sum(std::vector(d, Quad2::product(F)), a), dot_set(a, d));
    }
  }
}

}  // namespace
}  // namespace fflab
