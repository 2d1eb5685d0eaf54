#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "onebit/stochastics.hpp"

using namespace onebit;

TEST(RngStream, SameSeedAndStreamReproduce) {
  RngStream a(42, 7), b(42, 7);
  EXPECT_EQ(gaussian_vector(a, 64), gaussian_vector(b, 64));
}

TEST(RngStream, DistinctStreamsDiffer) {
  RngStream a(42, 0), b(42, 1), c(43, 0);
  const auto va = gaussian_vector(a, 16);
  EXPECT_NE(va, gaussian_vector(b, 16));
  EXPECT_NE(va, gaussian_vector(c, 16));
}

TEST(RngStream, ForkIsPureAndDistinct) {
  const RngStream base(5, 9);
  auto f1 = base.fork(3), f2 = base.fork(3), f3 = base.fork(4);
  EXPECT_EQ(f1.stream_id(), f2.stream_id());
  EXPECT_NE(f1.stream_id(), f3.stream_id());
  EXPECT_EQ(f1(), f2());
}

TEST(GaussianVector, RejectsZeroDimension) {
  RngStream s(1, 0);
  EXPECT_THROW(gaussian_vector(s, 0), std::invalid_argument);
}

TEST(GaussianVector, MeanOfMillionDrawsWithinCltBand) {
  // sigma of the mean is 1e-3; +-0.004 is a 4-sigma band.
  RngStream s(2024, 0);
  const auto v = gaussian_vector(s, 1'000'000);
  double mean = 0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  EXPECT_LE(std::abs(mean), 0.004);
}

TEST(GaussianVector, VarianceOfMillionScalarDraws) {
  RngStream s(77, 3);
  double sum = 0, sq = 0;
  const int N = 1'000'000;
  for (int i = 0; i < N; ++i) {
    const double x = gaussian_vector(s, 1)[0];
    sum += x;
    sq += x * x;
  }
  const double mean = sum / N;
  const double var = sq / N - mean * mean;
  EXPECT_GE(var, 0.994);
  EXPECT_LE(var, 1.006);
}

TEST(GaussianVector, MomentsConvergeAcrossSeeds) {
  const std::size_t N = 100'000;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    RngStream s(seed, 11);
    const auto v = gaussian_vector(s, N);
    double sum = 0, sq = 0;
    for (double x : v) {
      sum += x;
      sq += x * x;
    }
    const double mean = sum / N;
    EXPECT_LE(std::abs(mean), 4.0 / std::sqrt(double(N)));
    EXPECT_LE(std::abs(sq / N - mean * mean - 1.0), 8.0 / std::sqrt(double(N)));
  }
}

TEST(BinomialCi, HalfSuccesses) {
  const auto ci = binomial_ci(50, 100, 1.96);
  EXPECT_NEAR(ci.lo, 0.402, 1e-12);
  EXPECT_NEAR(ci.hi, 0.598, 1e-12);
}

TEST(BinomialCi, DegenerateEnds) {
  const auto zero = binomial_ci(0, 100, 1.96);
  EXPECT_EQ(zero.lo, 0.0);
  EXPECT_EQ(zero.hi, 0.0);
  const auto all = binomial_ci(100, 100, 1.96);
  EXPECT_EQ(all.lo, 1.0);
  EXPECT_EQ(all.hi, 1.0);
}

TEST(BinomialCi, Errors) {
  EXPECT_THROW(binomial_ci(0, 0, 1.96), std::invalid_argument);
  EXPECT_THROW(binomial_ci(5, 4, 1.96), std::invalid_argument);
  EXPECT_THROW(binomial_ci(1, 4, 0.0), std::invalid_argument);
}

TEST(BinomialCi, WidthHalvesWhenTrialsQuadruple) {
  for (std::uint64_t t : {10u, 100u, 1000u}) {
    for (std::uint64_t k : {1u, 3u, 7u}) {
      if (k > t) continue;
      const double w1 = binomial_ci(k, t, 2.0).width();
      const double w4 = binomial_ci(4 * k, 4 * t, 2.0).width();
      if (binomial_ci(k, t, 2.0).lo == 0.0) continue;  // clamped
      EXPECT_NEAR(w4, w1 / 2, 1e-12);
    }
  }
}

TEST(FitLogLog, ExactPowerLaws) {
  const std::vector<Point2> a{{1, 1}, {4, 0.5}, {16, 0.25}};
  const auto fa = fit_loglog_slope(a);
  EXPECT_NEAR(fa.slope, -0.5, 1e-12);
  EXPECT_NEAR(fa.r_squared, 1.0, 1e-12);

  const std::vector<Point2> b{{1, 3}, {2, 3}, {8, 3}};
  EXPECT_NEAR(fit_loglog_slope(b).slope, 0.0, 1e-12);

  const std::vector<Point2> c{{1, 1}, {10, 10}};
  EXPECT_NEAR(fit_loglog_slope(c).slope, 1.0, 1e-12);
}

TEST(FitLogLog, RecoversArbitraryExponents) {
  RngStream s(9, 9);
  for (int rep = 0; rep < 50; ++rep) {
    const double k = 4.0 * s.uniform() - 2.0;
    const double c = 0.1 + s.uniform();
    std::vector<Point2> pts;
    for (double x = 1; x < 1e4; x *= 3.7) pts.push_back({x, c * std::pow(x, k)});
    const auto f = fit_loglog_slope(pts);
    EXPECT_NEAR(f.slope, k, 1e-9);
    EXPECT_NEAR(f.r_squared, 1.0, 1e-9);
  }
}

TEST(FitLogLog, Errors) {
  const std::vector<Point2> one{{1, 1}};
  EXPECT_THROW(fit_loglog_slope(one), std::invalid_argument);
  const std::vector<Point2> same_x{{2, 1}, {2, 3}};
  EXPECT_THROW(fit_loglog_slope(same_x), std::invalid_argument);
  const std::vector<Point2> nonpositive{{1, 1}, {2, 0}};
  EXPECT_THROW(fit_loglog_slope(nonpositive), std::invalid_argument);
}
