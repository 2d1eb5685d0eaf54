#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "onebit/embedding.hpp"

using namespace onebit;

TEST(SignQuantize, ZeroMapsToMinusOne) {
  EXPECT_FALSE(sign_quantize(0.0));
  EXPECT_FALSE(sign_quantize(-0.0));
  EXPECT_TRUE(sign_quantize(1e-300));
  EXPECT_FALSE(sign_quantize(-1e-300));
  EXPECT_THROW(sign_quantize(std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
  EXPECT_THROW(sign_quantize(std::numeric_limits<double>::infinity()), std::invalid_argument);
}

TEST(SensingMatrix, ShapeValidation) {
  EXPECT_THROW(SensingMatrix(2, 2, {1.0, 2.0, 3.0}), std::invalid_argument);
  EXPECT_THROW(SensingMatrix(0, 2, {}), std::invalid_argument);
  EXPECT_THROW(SensingMatrix(1, 1, {std::nan("")}), std::invalid_argument);
  RngStream s(1, 0);
  const auto A = SensingMatrix::gaussian(s, 3, 4);
  EXPECT_EQ(A.rows(), 3u);
  EXPECT_EQ(A.cols(), 4u);
  EXPECT_EQ(A.row(2).size(), 4u);
}

TEST(SensingMatrix, GaussianIsDeterministicPerStream) {
  RngStream a(7, 3), b(7, 3), c(7, 4);
  const auto A = SensingMatrix::gaussian(a, 5, 5);
  const auto B = SensingMatrix::gaussian(b, 5, 5);
  const auto C = SensingMatrix::gaussian(c, 5, 5);
  EXPECT_TRUE(std::equal(A.entries().begin(), A.entries().end(), B.entries().begin()));
  EXPECT_FALSE(std::equal(A.entries().begin(), A.entries().end(), C.entries().begin()));
}

TEST(Embed, IdentityMatrixReadsSigns) {
  const auto x = UnitVector::normalized({1.0, -2.0, 0.0, 3.0});
  const auto code = embed(SensingMatrix::identity(4), x);
  EXPECT_EQ(code.sign(0), 1);
  EXPECT_EQ(code.sign(1), -1);
  EXPECT_EQ(code.sign(2), -1);
  EXPECT_EQ(code.sign(3), 1);
}

TEST(Embed, DimensionMismatchThrows) {
  RngStream s(2, 0);
  const auto A = SensingMatrix::gaussian(s, 3, 4);
  EXPECT_THROW(embed(A, UnitVector::basis(5, 0)), std::invalid_argument);
  EXPECT_THROW(embed_noisy(A, NoiseVector({0.0, 0.0}, 1.0), UnitVector::basis(4, 0)), std::invalid_argument);
}

TEST(Embed, AntipodesGiveComplementaryCodes) {
  RngStream s(3, 0);
  const auto A = SensingMatrix::gaussian(s, 200, 10);
  for (int i = 0; i < 20; ++i) {
    const auto x = sample_sparse_unit(s, 10, 3);
    const auto a = embed(A, x), b = embed(A, -x);
    EXPECT_EQ(b, a.complement());
    EXPECT_EQ(hamming(a, b), 1.0);
  }
}

TEST(Embed, NoiseFreeEmbeddingIsScaleInvariant) {
  RngStream s(4, 0);
  const auto A = SensingMatrix::gaussian(s, 100, 6);
  const auto x = UnitVector::normalized(gaussian_vector(s, 6));
  std::vector<double> scaled(A.entries().begin(), A.entries().end());
  for (auto& v : scaled) v *= 3.5;
  EXPECT_EQ(embed(A, x), embed(SensingMatrix(100, 6, scaled), x));
}

TEST(Embed, ZeroNoiseMatchesNoiseless) {
  RngStream s(5, 0);
  const auto A = SensingMatrix::gaussian(s, 150, 8);
  const auto eta = NoiseVector::sample(s, 150, NoiseModel{0.0});
  const auto x = sample_sparse_unit(s, 8, 2);
  EXPECT_EQ(embed_noisy(A, eta, x), embed(A, x));
}

TEST(Embed, NoisyEqualsAugmentedOnLift) {
  RngStream s(6, 0);
  for (double sigma : {0.1, 0.5, 1.0, 2.0}) {
    const NoiseModel noise{sigma};
    for (int i = 0; i < 25; ++i) {
      const auto A = SensingMatrix::gaussian(s, 97, 12);
      const auto eta = NoiseVector::sample(s, 97, noise);
      const auto H = augment_matrix(A, eta, sigma);
      ASSERT_EQ(H.cols(), 13u);
      const auto x = sample_sparse_unit(s, 12, 4);
      EXPECT_EQ(embed_noisy(A, eta, x), embed(H, lift(x, noise)));
    }
  }
}

TEST(Embed, AugmentRejectsZeroSigma) {
  const auto A = SensingMatrix::identity(2);
  EXPECT_THROW(augment_matrix(A, NoiseVector({0.0, 0.0}, 0.0), 0.0), std::invalid_argument);
  EXPECT_THROW(augment_matrix(A, NoiseVector({0.0}, 1.0), 1.0), std::invalid_argument);
}

TEST(Embed, ExpectedHammingMatchesAngle) {
  // E[d_H] = d(x, y); at m = 20000 the 4-sigma band is about 0.014.
  RngStream s(7, 0);
  const auto A = SensingMatrix::gaussian(s, 20000, 5);
  const auto x = UnitVector::normalized({1.0, 0.0, 0.0, 0.0, 0.0});
  const auto y = UnitVector::normalized({0.5, std::sqrt(0.75), 0.0, 0.0, 0.0});
  EXPECT_NEAR(hamming(embed(A, x), embed(A, y)), 1.0 / 3.0, 0.014);
}

TEST(BitCode, SetTestAndPadding) {
  BitCode c(70);
  EXPECT_EQ(c.words().size(), 2u);
  c.set(0, true);
  c.set(69, true);
  EXPECT_TRUE(c.test(0));
  EXPECT_TRUE(c.test(69));
  EXPECT_FALSE(c.test(68));
  EXPECT_EQ(c.popcount(), 2u);
  const auto k = c.complement();
  EXPECT_EQ(k.popcount(), 68u);
  EXPECT_EQ(k.words()[1] >> 6, 0u);
  c.set(0, false);
  EXPECT_EQ(c.popcount(), 1u);
}

TEST(BitCode, FromWordsRejectsDirtyTail) {
  EXPECT_THROW(BitCode::from_words(3, {0b1000}), std::invalid_argument);
  EXPECT_THROW(BitCode::from_words(65, {0}), std::invalid_argument);
  EXPECT_NO_THROW(BitCode::from_words(64, {~std::uint64_t{0}}));
}

TEST(Hamming, CountsAndNormalizes) {
  auto a = BitCode::from_words(10, {0b1010101010});
  auto b = BitCode::from_words(10, {0b0000001111});
  EXPECT_EQ(hamming_count(a, b), 5u);
  EXPECT_DOUBLE_EQ(hamming(a, b), 0.5);
  EXPECT_EQ((a ^ b).popcount(), 5u);
  EXPECT_THROW(hamming(a, BitCode(11)), std::invalid_argument);
  EXPECT_THROW(hamming(BitCode(0), BitCode(0)), std::invalid_argument);
}

TEST(Hamming, IsAMetricOnRandomCodes) {
  RngStream s(8, 0);
  auto random_code = [&] {
    BitCode c(130);
    for (std::size_t k = 0; k < 130; ++k) c.set(k, s.uniform() < 0.5);
    return c;
  };
  for (int i = 0; i < 200; ++i) {
    const auto a = random_code(), b = random_code(), c = random_code();
    EXPECT_EQ(hamming_count(a, a), 0u);
    EXPECT_EQ(hamming_count(a, b), hamming_count(b, a));
    EXPECT_LE(hamming_count(a, c), hamming_count(a, b) + hamming_count(b, c));
    EXPECT_EQ(hamming_count(a, b.complement()), 130 - hamming_count(a, b));
  }
}

TEST(BinaryDump, RoundTripAndLayout) {
  auto c = BitCode::from_words(65, {0x0102030405060708ULL, 1});
  std::stringstream ss;
  write_code(ss, c);
  const std::string bytes = ss.str();
  ASSERT_EQ(bytes.size(), 24u);
  EXPECT_EQ(static_cast<unsigned char>(bytes[0]), 65);
  EXPECT_EQ(static_cast<unsigned char>(bytes[8]), 0x08);
  EXPECT_EQ(static_cast<unsigned char>(bytes[15]), 0x01);
  EXPECT_EQ(static_cast<unsigned char>(bytes[16]), 0x01);
  EXPECT_EQ(read_code(ss), c);
}

TEST(BinaryDump, TruncatedInputThrows) {
  std::stringstream ss;
  write_code(ss, BitCode(128));
  std::string bytes = ss.str();
  bytes.pop_back();
  std::stringstream cut(bytes);
  EXPECT_THROW(read_code(cut), std::runtime_error);
}
