#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "onebit/geometry.hpp"

using namespace onebit;

namespace {

UnitVector e(std::size_t n, std::size_t i) { return UnitVector::basis(n, i); }

UnitVector random_unit(RngStream& s, std::size_t n) { return UnitVector::normalized(gaussian_vector(s, n)); }

} // namespace

TEST(UnitVector, RejectsNonUnitCoordinates) {
  EXPECT_THROW(UnitVector::from_coords({1.0, 1.0}), std::invalid_argument);
  EXPECT_NO_THROW(UnitVector::from_coords({0.6, 0.8}));
  EXPECT_THROW(UnitVector::normalized({0.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(UnitVector::normalized({}), std::invalid_argument);
}

TEST(UnitVector, DeclaredSparsityIsEnforced) {
  EXPECT_THROW(UnitVector::normalized({1.0, 1.0, 1.0}, 2), std::invalid_argument);
  const auto v = UnitVector::normalized({0.0, 3.0, 0.0, 4.0}, 2);
  ASSERT_EQ(v.support().size(), 2u);
  EXPECT_EQ(v.support()[0], 1u);
  EXPECT_EQ(v.support()[1], 3u);
}

TEST(SampleSparseUnit, FullSupportIsUnit) {
  RngStream s(1, 0);
  const auto x = sample_sparse_unit(s, 5, 5);
  double sq = 0;
  for (double c : x.coords()) sq += c * c;
  EXPECT_NEAR(std::sqrt(sq), 1.0, 1e-9);
}

TEST(SampleSparseUnit, RespectsSparsity) {
  RngStream s(2, 0);
  for (int rep = 0; rep < 100; ++rep) {
    const auto x = sample_sparse_unit(s, 100, 3);
    EXPECT_LE(x.support().size(), 3u);
    EXPECT_EQ(x.declared_sparsity(), 3u);
  }
}

TEST(SampleSparseUnit, SupportIsUniform) {
  // Each index is in the support with probability s/n = 0.2; the binomial
  // 4-sigma half-width over 1e4 draws is 0.016 < 0.02.
  RngStream s(3, 0);
  std::vector<int> hits(10, 0);
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    const auto x = sample_sparse_unit(s, 10, 2);
    for (auto j : x.support()) ++hits[j];
  }
  for (int h : hits) EXPECT_NEAR(h / double(draws), 0.2, 0.02);
}

TEST(SampleSparseUnit, Errors) {
  RngStream s(4, 0);
  EXPECT_THROW(sample_sparse_unit(s, 5, 0), std::invalid_argument);
  EXPECT_THROW(sample_sparse_unit(s, 5, 6), std::invalid_argument);
}

TEST(GeodesicDistance, BasicValues) {
  EXPECT_EQ(geodesic_distance(e(3, 0), e(3, 0)), 0.0);
  EXPECT_DOUBLE_EQ(geodesic_distance(e(3, 0), -e(3, 0)), 1.0);
  EXPECT_DOUBLE_EQ(geodesic_distance(e(3, 0), e(3, 1)), 0.5);
  EXPECT_THROW(geodesic_distance(e(3, 0), e(2, 0)), std::invalid_argument);
}

TEST(DistortedDistance, BasicValues) {
  RngStream s(5, 0);
  for (int i = 0; i < 20; ++i) {
    const auto x = random_unit(s, 6), y = random_unit(s, 6);
    EXPECT_EQ(distorted_distance(x, y, NoiseModel{0.0}), geodesic_distance(x, y));
  }
  EXPECT_NEAR(distorted_distance(e(3, 0), e(3, 1), NoiseModel{1.0}), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(distorted_distance(e(3, 0), -e(3, 0), NoiseModel{1.0}), 0.5, 1e-15);
  EXPECT_THROW(distorted_distance(e(3, 0), e(4, 0), NoiseModel{1.0}), std::invalid_argument);
  EXPECT_THROW(NoiseModel{-0.1}, std::invalid_argument);
}

TEST(Lift, BasisVector) {
  const auto l = lift(e(2, 0), NoiseModel{1.0});
  ASSERT_EQ(l.dim(), 3u);
  EXPECT_NEAR(l[0], 1 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(l[1], 0.0);
  EXPECT_NEAR(l[2], 1 / std::sqrt(2.0), 1e-15);
}

TEST(Lift, ZeroNoiseIsIsometricInclusion) {
  RngStream s(6, 0);
  const auto x = random_unit(s, 5), y = random_unit(s, 5);
  const auto lx = lift(x, NoiseModel{0.0}), ly = lift(y, NoiseModel{0.0});
  for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(lx[j], x[j]);
  EXPECT_EQ(lx[5], 0.0);
  EXPECT_NEAR(geodesic_distance(lx, ly), geodesic_distance(x, y), 1e-15);
}

TEST(Lift, SparsityGrowsByOne) {
  RngStream s(7, 0);
  const auto x = sample_sparse_unit(s, 20, 3);
  EXPECT_EQ(lift(x, NoiseModel{0.5}).declared_sparsity(), 4u);
  EXPECT_LE(lift(x, NoiseModel{0.5}).support().size(), 4u);
}

TEST(Lift, DistortedDistanceIsLiftedGeodesic) {
  RngStream s(8, 0);
  for (double sigma : {0.1, 0.5, 1.0, 2.0}) {
    const NoiseModel noise{sigma};
    for (int i = 0; i < 100; ++i) {
      const auto x = sample_sparse_unit(s, 12, 4), y = sample_sparse_unit(s, 12, 4);
      EXPECT_NEAR(distorted_distance(x, y, noise), geodesic_distance(lift(x, noise), lift(y, noise)), 1e-12);
    }
  }
}

TEST(DisagreementProbability, ClosedFormValues) {
  EXPECT_EQ(disagreement_probability(1.0), 0.0);
  EXPECT_DOUBLE_EQ(disagreement_probability(-1.0), 1.0);
  EXPECT_DOUBLE_EQ(disagreement_probability(0.0), 0.5);
  EXPECT_NEAR(disagreement_probability(0.5), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(disagreement_probability(1.0 + 1e-13), 0.0);
  EXPECT_THROW(disagreement_probability(1.0 + 1e-9), std::invalid_argument);
  EXPECT_THROW(disagreement_probability(-1.0 - 1e-9), std::invalid_argument);
}

TEST(DisagreementProbability, MatchesSimulatedCorrelatedSigns) {
  // Oracle: simulate (u, rho u + sqrt(1-rho^2) w) and count sign flips.
  const double rho = 0.3;
  RngStream s(9, 0);
  const int N = 1'000'000;
  int flips = 0;
  const double perp = std::sqrt(1 - rho * rho);
  for (int i = 0; i < N; ++i) {
    const double u = s.gaussian(), w = s.gaussian();
    flips += (u > 0) != (rho * u + perp * w > 0);
  }
  EXPECT_NEAR(flips / double(N), disagreement_probability(rho), 0.002);
}

TEST(AntipodalGap, ClosedFormValues) {
  EXPECT_EQ(antipodal_gap(NoiseModel{0.0}), 0.0);
  EXPECT_NEAR(antipodal_gap(NoiseModel{1.0}), 0.5, 1e-15);
  EXPECT_NEAR(antipodal_gap(NoiseModel{0.1}), 0.06345103486110715, 1e-12);
}

TEST(AntipodalGap, DirectSearchOverRandomPairs) {
  const NoiseModel noise{1.0};
  const double gap = antipodal_gap(noise);
  RngStream s(10, 0);
  double best = 0;
  for (int i = 0; i < 100000; ++i) {
    const auto x = random_unit(s, 4);
    // Half the draws are perturbed antipodes.
    UnitVector y = random_unit(s, 4);
    if (i % 2) {
      std::vector<double> c(4);
      for (std::size_t j = 0; j < 4; ++j) c[j] = -x[j] + 0.02 * y[j];
      y = UnitVector::normalized(std::move(c));
    }
    const double diff = geodesic_distance(x, y) - distorted_distance(x, y, noise);
    EXPECT_LE(diff, gap + 1e-12);
    best = std::max(best, diff);
  }
  EXPECT_GE(best, gap - 0.01);
}

TEST(MetricProperties, RandomTriples) {
  RngStream s(11, 0);
  for (double sigma : {0.0, 0.3, 1.0, 3.0}) {
    const NoiseModel noise{sigma};
    for (int i = 0; i < 2500; ++i) {
      const auto x = random_unit(s, 5), y = random_unit(s, 5), z = random_unit(s, 5);
      const double xy = distorted_distance(x, y, noise), yz = distorted_distance(y, z, noise),
                   xz = distorted_distance(x, z, noise);
      EXPECT_LE(xz, xy + yz + 1e-12);
      EXPECT_EQ(xy, distorted_distance(y, x, noise));
      EXPECT_GE(xy, 0.0);
      EXPECT_LE(xy, 1.0);
      EXPECT_EQ(distorted_distance(x, x, noise), 0.0);
      const double d = geodesic_distance(x, y);
      EXPECT_LE(xy, d + 1e-15);
      if (sigma > 0) {
        EXPECT_LT(xy, d);
      }
      EXPECT_LE(d - xy, antipodal_gap(noise) + 1e-12);
      EXPECT_NEAR(geodesic_distance(-x, y), 1.0 - d, 1e-12);
    }
  }
}

TEST(MetricProperties, GapAttainedAtAntipodes) {
  RngStream s(12, 0);
  for (double sigma : {0.2, 1.0, 2.5}) {
    const NoiseModel noise{sigma};
    const auto x = random_unit(s, 7);
    EXPECT_NEAR(geodesic_distance(x, -x) - distorted_distance(x, -x, noise), antipodal_gap(noise), 1e-12);
  }
}
