#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "loops/error.hpp"
#include "loops/rng.hpp"
#include "loops/stats.hpp"

using namespace loops;

TEST(WeightedMean, ConstantValues) {
  const std::vector<double> x(100, 3.5);
  std::vector<double> w(100);
  auto eng = make_engine(1);
  for (auto& v : w) v = uniform01(eng);
  const auto e = weighted_mean_ci(x, w);
  EXPECT_DOUBLE_EQ(e.mean, 3.5);
  EXPECT_EQ(e.half_width_95, 0.0);
}

TEST(WeightedMean, EqualWeightsMatchUnweighted) {
  auto eng = make_engine(2);
  std::vector<double> x(1000);
  for (auto& v : x) v = uniform01(eng);
  const std::vector<double> w(x.size(), 0.25);
  const auto a = weighted_mean_ci(x, w);
  const auto b = mean_ci(x);
  EXPECT_NEAR(a.mean, b.mean, 1e-14);
  EXPECT_NEAR(a.half_width_95, b.half_width_95, 1e-14);
  EXPECT_NEAR(a.n_effective, 1000.0, 1e-9);
}

TEST(WeightedMean, Alternating) {
  std::vector<double> x(1024);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = (i % 2) ? 1.0 : -1.0;
  const auto e = mean_ci(x);
  EXPECT_LE(std::abs(e.mean), e.half_width_95 + 1e-15);
}

TEST(WeightedMean, ScaleInvariantProperty) {
  auto eng = make_engine(3);
  std::vector<double> x(500), w(500), w2(500);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = uniform01(eng);
    w[i] = uniform01(eng);
    w2[i] = 17.0 * w[i];
  }
  const auto a = weighted_mean_ci(x, w), b = weighted_mean_ci(x, w2);
  EXPECT_NEAR(a.mean, b.mean, 1e-13);
  EXPECT_NEAR(a.half_width_95, b.half_width_95, 1e-13);
  EXPECT_NEAR(a.n_effective, b.n_effective, 1e-9);
  EXPECT_LE(a.n_effective, 500.0);
}

TEST(WeightedMean, CoverageMatchesNominal) {
  // 95% intervals should cover the true mean of U(0,1) about 95% of the time
  int covered = 0;
  const int reps = 400;
  for (int r = 0; r < reps; ++r) {
    auto eng = make_engine(100, static_cast<std::uint64_t>(r));
    std::vector<double> x(640);
    for (auto& v : x) v = uniform01(eng);
    const auto e = mean_ci(x);
    covered += std::abs(e.mean - 0.5) <= e.half_width_95;
  }
  EXPECT_GT(covered, 0.9 * reps);
  EXPECT_LT(covered, 0.99 * reps);
}

TEST(WeightedMean, Errors) {
  const std::vector<double> none;
  try {
    weighted_mean_ci(none, none);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyBatch);
  }
  const std::vector<double> x{1, 2}, z{0, 0};
  try {
    weighted_mean_ci(x, z);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AllZeroWeights);
  }
}

TEST(Ks, IdenticalSamples) {
  const std::vector<double> a{0.3, 0.1, 0.7, 0.7, 0.2};
  EXPECT_EQ(ks_statistic(a, a).d, 0.0);
}

TEST(Ks, DisjointConstants) {
  const std::vector<double> a(50, 0.0), b(60, 1.0);
  EXPECT_DOUBLE_EQ(ks_statistic(a, b).d, 1.0);
}

TEST(Ks, SameLawTwoSeeds) {
  std::vector<double> a(10000), b(10000);
  auto e1 = make_engine(1), e2 = make_engine(2);
  for (auto& v : a) v = uniform01(e1);
  for (auto& v : b) v = uniform01(e2);
  EXPECT_GT(ks_statistic(a, b).p_value, 0.001);
}

TEST(Ks, SymmetricAndMonotoneInvariantProperty) {
  auto eng = make_engine(9);
  std::vector<double> a(300), b(200);
  for (auto& v : a) v = uniform01(eng);
  for (auto& v : b) v = std::pow(uniform01(eng), 1.3);
  const auto ab = ks_statistic(a, b), ba = ks_statistic(b, a);
  EXPECT_DOUBLE_EQ(ab.d, ba.d);
  std::vector<double> ta(a), tb(b);
  for (auto& v : ta) v = std::exp(3 * v) - 2;
  for (auto& v : tb) v = std::exp(3 * v) - 2;
  EXPECT_DOUBLE_EQ(ks_statistic(ta, tb).d, ab.d);
}

TEST(Ks, WeightedMatchesUnweightedForEqualWeights) {
  auto eng = make_engine(10);
  std::vector<double> a(100), b(80);
  for (auto& v : a) v = uniform01(eng);
  for (auto& v : b) v = uniform01(eng);
  const std::vector<double> wa(100, 2.0), wb(80, 0.5);
  const auto u = ks_statistic(a, b), w = ks_statistic_weighted(a, wa, b, wb);
  EXPECT_NEAR(u.d, w.d, 1e-15);
  EXPECT_NEAR(u.p_value, w.p_value, 1e-12);
}

TEST(Ks, EmptyThrows) {
  const std::vector<double> a, b{1.0};
  EXPECT_THROW(ks_statistic(a, b), Error);
}

TEST(LinearFit, ExactLine) {
  const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
  const auto f = linear_fit(x, y);
  EXPECT_NEAR(f.slope, 2, 1e-14);
  EXPECT_NEAR(f.intercept, 1, 1e-14);
  EXPECT_NEAR(f.r2, 1, 1e-14);
}

TEST(LinearFit, ConstantYs) {
  const std::vector<double> x{0, 1, 2}, y{4, 4, 4};
  const auto f = linear_fit(x, y);
  EXPECT_EQ(f.slope, 0.0);
  EXPECT_EQ(f.r2, 0.0);
}

TEST(LinearFit, NegativeSlope) {
  const std::vector<double> x{-1, 0.5, 2, 7}, y{1, -0.5, -2, -7};
  EXPECT_NEAR(linear_fit(x, y).slope, -1, 1e-14);
}

TEST(LinearFit, ResidualsOrthogonalProperty) {
  auto eng = make_engine(4);
  std::vector<double> x(50), y(50);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = 10 * uniform01(eng);
    y[i] = 3 - 0.7 * x[i] + uniform01(eng);
  }
  const auto f = linear_fit(x, y);
  double dot = 0, one = 0, scale = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    dot += r * x[i];
    one += r;
    scale += std::abs(y[i] * x[i]);
  }
  EXPECT_LT(std::abs(dot), 1e-9 * scale);
  EXPECT_LT(std::abs(one), 1e-9 * scale);
}

TEST(LinearFit, Degenerate) {
  const std::vector<double> x{1, 1, 1}, y{1, 2, 3};
  EXPECT_THROW(linear_fit(x, y), Error);
  const std::vector<double> x2{1, 2}, y2{1, 2};
  EXPECT_THROW(linear_fit(x2, y2), Error);
}
