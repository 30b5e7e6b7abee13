#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "cotenqu/encoding.hpp"
#include "cotenqu/error.hpp"
#include "oracles.hpp"

namespace cotenqu {
namespace {

using std::numbers::pi;

TEST(AngleFromValue, Examples) {
  EXPECT_EQ(angle_from_value(0.0), 0.0);
  EXPECT_NEAR(angle_from_value(1.0), pi, 1e-15);
  EXPECT_NEAR(angle_from_value(0.5), pi / 2, 1e-15);
  EXPECT_THROW(angle_from_value(-1e-9), DomainError);
  EXPECT_THROW(angle_from_value(1.0 + 1e-9), DomainError);
  EXPECT_THROW(angle_from_value(std::nan("")), DomainError);
}

TEST(EncodingPlan, Layout) {
  EXPECT_EQ(EncodingPlan(EncodingMode::kUnitInterval, 4).qubits_used(), 2u);
  EXPECT_EQ(EncodingPlan(EncodingMode::kArctan, 6).qubits_used(), 3u);
  EXPECT_THROW(EncodingPlan(EncodingMode::kUnitInterval, 3), LayoutError);
  EXPECT_THROW(EncodingPlan(EncodingMode::kUnitInterval, 0), LayoutError);
}

TEST(EncodeFeatures, ExcitedProbabilityIsValue) {
  StateVector s = init_state(1);
  const std::vector<double> f{0.3, 0.8};
  encode_features(s, f, 0, EncodingPlan(EncodingMode::kUnitInterval, 2));
  EXPECT_NEAR(zero_probability(s, 0), 0.7, 1e-14);
}

TEST(EncodeFeatures, ArctanMode) {
  StateVector s = init_state(1);
  const std::vector<double> zero{0.0, 0.0};
  encode_features(s, zero, 0, EncodingPlan(EncodingMode::kArctan, 2));
  EXPECT_NEAR(std::abs(s[0] - Amplitude{1.0}), 0.0, 1e-15);

  const std::vector<double> huge{1e300, -1e300};
  const auto angles = encoding_angles(huge, EncodingMode::kArctan);
  EXPECT_NEAR(angles[0], pi / 2, 1e-12);
  EXPECT_NEAR(angles[1], -pi / 2, 1e-12);
  EXPECT_LT(angles[0], pi / 2 + 1e-15);
}

TEST(EncodeFeatures, ArctanAnglesInsideOpenInterval) {
  std::mt19937_64 rng(8);
  std::cauchy_distribution<double> wide(0.0, 10.0);
  std::vector<double> v(1000);
  for (double& x : v) x = wide(rng);
  for (double a : encoding_angles(v, EncodingMode::kArctan)) {
    EXPECT_GT(a, -pi / 2);
    EXPECT_LT(a, pi / 2);
  }
}

TEST(EncodeFeatures, LayoutErrors) {
  StateVector s = init_state(2);
  const std::vector<double> f{0.1, 0.2, 0.3, 0.4};
  EXPECT_THROW(encode_features(s, f, 1, EncodingPlan(EncodingMode::kUnitInterval, 4)), LayoutError);
  EXPECT_THROW(encode_features(s, f, 0, EncodingPlan(EncodingMode::kUnitInterval, 2)), LayoutError);
  const std::vector<double> bad{0.1, 1.5};
  EXPECT_THROW(encode_features(s, bad, 0, EncodingPlan(EncodingMode::kUnitInterval, 2)), DomainError);
}

TEST(EncodeFeatures, MatchesDenseOracle) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = oracle::random_features(6, rng);
    StateVector s = init_state(3);
    encode_features(s, f, 0, EncodingPlan(EncodingMode::kUnitInterval, 6));
    const auto want = oracle::dense_encoded_state(encoding_angles(f, EncodingMode::kUnitInterval));
    for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(std::abs(s[i] - want[i]), 0.0, 1e-12);
  }
}

TEST(EncodeFeatures, SecondDimensionKeepsZStatistics) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto f = oracle::random_features(4, rng);
    StateVector a = init_state(2);
    encode_features(a, f, 0, EncodingPlan(EncodingMode::kUnitInterval, 4));
    f[1] = oracle::uniform(rng);
    f[3] = oracle::uniform(rng);
    StateVector b = init_state(2);
    encode_features(b, f, 0, EncodingPlan(EncodingMode::kUnitInterval, 4));
    for (std::size_t q = 0; q < 2; ++q) EXPECT_NEAR(zero_probability(a, q), zero_probability(b, q), 1e-14);
    EXPECT_NEAR(zero_probability(a, 0), 1.0 - f[0], 1e-12);
    EXPECT_NEAR(zero_probability(a, 1), 1.0 - f[2], 1e-12);
  }
}

TEST(Normalize, Examples) {
  const std::vector<std::vector<double>> raw{{0.0, 7.0, 0.0}, {127.5, 7.0, 100.0}, {255.0, 7.0, 255.0}};
  const auto out = normalize_dataset(raw);
  EXPECT_DOUBLE_EQ(out[0][0], 0.0);
  EXPECT_DOUBLE_EQ(out[1][0], 0.5);
  EXPECT_DOUBLE_EQ(out[2][0], 1.0);
  for (const auto& row : out) EXPECT_EQ(row[1], 0.0);
  EXPECT_NEAR(out[1][2], 100.0 / 255.0, 1e-15);
  EXPECT_THROW(normalize_dataset(std::vector<std::vector<double>>{}), ArgumentError);
}

TEST(Normalize, ClampsOutsideFittedRange) {
  const std::vector<std::vector<double>> raw{{10.0, 5.0}, {20.0, 5.0}};
  const Normalizer n = Normalizer::fit(raw);
  const std::vector<double> probe{25.0, 9.0};
  const auto out = n.apply(probe);
  EXPECT_EQ(out[0], 1.0);
  EXPECT_EQ(out[1], 0.0);
  const std::vector<double> low{0.0, 1.0};
  EXPECT_EQ(n.apply(low)[0], 0.0);
  const std::vector<double> wrong{1.0};
  EXPECT_THROW(n.apply(wrong), LayoutError);
  const std::vector<std::vector<double>> ragged{{1.0, 2.0}, {1.0}};
  EXPECT_THROW(Normalizer::fit(ragged), ArgumentError);
}

}  // namespace
}  // namespace cotenqu
