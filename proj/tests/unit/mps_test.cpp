#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cotenqu/error.hpp"
#include "cotenqu/mps.hpp"
#include "oracles.hpp"

namespace cotenqu {
namespace {

double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-5});
}

TEST(FeatureMap, Examples) {
  const std::vector<double> x{0.0, 1.0, 0.5};
  const MappedInput m = feature_map(x);
  EXPECT_EQ(m[0][0], 1.0);
  EXPECT_EQ(m[0][1], 0.0);
  EXPECT_NEAR(m[1][0], 0.0, 1e-16);
  EXPECT_EQ(m[1][1], 1.0);
  EXPECT_NEAR(m[2][0], std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(m[2][1], std::sqrt(0.5), 1e-15);
  const std::vector<double> bad{0.2, -0.1};
  EXPECT_THROW(feature_map(bad), DomainError);
}

TEST(FeatureMap, UnitNorm) {
  std::mt19937_64 rng(1);
  for (const auto& v : feature_map(oracle::random_features(500, rng))) {
    EXPECT_NEAR(v[0] * v[0] + v[1] * v[1], 1.0, 1e-12);
  }
}

TEST(MpsModel, Shapes) {
  const MpsModel m(6, 3, 4);
  EXPECT_EQ(m.output_site(), 3u);
  EXPECT_EQ(m.site_shape(0), (std::vector<std::size_t>{1, 2, 3}));
  EXPECT_EQ(m.site_shape(3), (std::vector<std::size_t>{3, 2, 4, 3}));
  EXPECT_EQ(m.site_shape(5), (std::vector<std::size_t>{3, 2, 1}));
  EXPECT_EQ(m.parameter_count(), 6u + 18 + 18 + 72 + 18 + 6);
  EXPECT_THROW(MpsModel(0, 2, 2), ShapeError);
  EXPECT_THROW(MpsModel(3, 0, 2), ShapeError);
  MpsModel copy = m;
  auto t = copy.tensors();
  t[2].pop_back();
  EXPECT_THROW(copy.set_tensors(t), ShapeError);
}

TEST(MpsModel, NearIdentityIsSeeded) {
  EXPECT_EQ(MpsModel::near_identity(20, 4, 4, 5), MpsModel::near_identity(20, 4, 4, 5));
  EXPECT_NE(MpsModel::near_identity(20, 4, 4, 5), MpsModel::near_identity(20, 4, 4, 6));
  const MpsModel m = MpsModel::near_identity(20, 4, 4, 5, 0.0);
  EXPECT_EQ(m.at(5, 2, 0, 2), 1.0);
  EXPECT_EQ(m.at(5, 2, 1, 2), 1.0);
  EXPECT_EQ(m.at(5, 2, 1, 3), 0.0);
}

TEST(MpsForward, BondOneHandContraction) {
  const std::size_t n = 5;
  MpsModel m(n, 1, 3);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == m.output_site()) continue;
    m.at(i, 0, 0, 0) = 1.0;
    m.at(i, 0, 1, 0) = 1.0;
  }
  // output leg e_1
  m.out_at(0, 0, 1, 0) = 1.0;
  m.out_at(0, 1, 1, 0) = 1.0;
  const std::vector<double> x{0.1, 0.4, 0.7, 0.2, 0.9};
  const auto out = mps_forward(m, feature_map(x));
  double want = 1.0;
  for (double v : x) want *= std::cos(std::numbers::pi / 2 * v) + std::sin(std::numbers::pi / 2 * v);
  EXPECT_NEAR(out[0], 0.0, 1e-15);
  EXPECT_NEAR(out[1], want, 1e-13);
  EXPECT_NEAR(out[2], 0.0, 1e-15);
}

TEST(MpsForward, ZeroOutputSiteGivesZero) {
  std::mt19937_64 rng(2);
  MpsModel m = oracle::random_mps(7, 3, 4, rng);
  auto t = m.tensors();
  std::fill(t[m.output_site()].begin(), t[m.output_site()].end(), 0.0);
  m.set_tensors(t);
  for (double v : mps_forward(m, feature_map(oracle::random_features(7, rng)))) EXPECT_EQ(v, 0.0);
}

TEST(MpsForward, MatchesDenseContraction) {
  std::mt19937_64 rng(3);
  for (std::size_t n = 1; n <= 8; ++n) {
    for (std::size_t chi = 1; chi <= 3; ++chi) {
      const MpsModel m = oracle::random_mps(n, chi, 4, rng);
      const MappedInput in = feature_map(oracle::random_features(n, rng));
      const auto got = mps_forward(m, in);
      const auto want = oracle::dense_contract(m, in);
      for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(got[j], want[j], 1e-10) << n << " " << chi;
    }
  }
}

TEST(MpsForward, LinearInEachSite) {
  std::mt19937_64 rng(4);
  const MpsModel a = oracle::random_mps(6, 3, 2, rng);
  const MpsModel b = oracle::random_mps(6, 3, 2, rng);
  const MappedInput in = feature_map(oracle::random_features(6, rng));
  for (std::size_t site = 0; site < 6; ++site) {
    MpsModel mb = a, mix = a;
    auto tb = a.tensors(), tm = a.tensors();
    tb[site] = b.tensors()[site];
    for (std::size_t k = 0; k < tm[site].size(); ++k) tm[site][k] = 2.0 * a.site(site)[k] - 3.0 * tb[site][k];
    mb.set_tensors(tb);
    mix.set_tensors(tm);
    const auto fa = mps_forward(a, in), fb = mps_forward(mb, in), fm = mps_forward(mix, in);
    for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(fm[j], 2.0 * fa[j] - 3.0 * fb[j], 1e-10);
  }
}

TEST(MpsForward, LongChainsStayInRange) {
  MpsModel m = MpsModel::near_identity(784, 4, 4, 1);
  auto t = m.tensors();
  for (auto& site : t)
    for (double& v : site) v *= 8.0;
  m.set_tensors(t);
  std::vector<double> x(784, 0.5);
  const ScaledVector out = mps_forward_scaled(m, feature_map(x));
  EXPECT_TRUE(std::isfinite(out.log_scale));
  EXPECT_GT(out.log_scale, 784 * std::log(8.0));
  double norm = 0.0;
  for (double v : out.mantissa) norm += v * v;
  EXPECT_NEAR(norm, 1.0, 1e-12);
  // scaling every site by 8 again only moves the log scale
  for (auto& site : t)
    for (double& v : site) v *= 8.0;
  MpsModel bigger = m;
  bigger.set_tensors(t);
  const ScaledVector out2 = mps_forward_scaled(bigger, feature_map(x));
  EXPECT_NEAR(out2.log_scale - out.log_scale, 784 * std::log(8.0), 1e-6);
  for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(out2.mantissa[j], out.mantissa[j], 1e-10);
}

TEST(MpsForward, ShapeMismatch) {
  const MpsModel m(4, 2, 2);
  const std::vector<double> x{0.1, 0.2, 0.3};
  EXPECT_THROW(mps_forward(m, feature_map(x)), ShapeError);
  EXPECT_THROW(mps_backward(m, feature_map(x), std::vector<double>{1.0, 1.0}), ShapeError);
  const std::vector<double> x4{0.1, 0.2, 0.3, 0.4};
  EXPECT_THROW(mps_backward(m, feature_map(x4), std::vector<double>{1.0}), ShapeError);
}

TEST(MpsBackward, ZeroUpstream) {
  std::mt19937_64 rng(5);
  const MpsModel m = oracle::random_mps(6, 3, 4, rng);
  const auto g = mps_backward(m, feature_map(oracle::random_features(6, rng)), std::vector<double>(4, 0.0));
  for (const auto& t : g.tensors)
    for (double v : t) EXPECT_EQ(v, 0.0);
}

TEST(MpsBackward, SingleSiteOuterProduct) {
  std::mt19937_64 rng(6);
  const MpsModel m = oracle::random_mps(1, 3, 3, rng);
  const std::vector<double> x{0.3};
  const MappedInput in = feature_map(x);
  const std::vector<double> up{0.5, -2.0, 1.5};
  const auto g = mps_backward(m, in, up);
  ASSERT_EQ(g.tensors[0].size(), 6u);
  for (std::size_t s = 0; s < 2; ++s)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(g.tensors[0][s * 3 + j], in[0][s] * up[j], 1e-15);
}

TEST(MpsBackward, MatchesFiniteDifferences) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 3; ++trial) {
    const MpsModel m = oracle::random_mps(8, 3, 4, rng);
    const MappedInput in = feature_map(oracle::random_features(8, rng));
    std::vector<double> up(4);
    for (double& u : up) u = oracle::uniform(rng, -1, 1);
    const auto g = mps_backward(m, in, up);
    const double h = 1e-5;
    for (std::size_t i = 0; i < 8; ++i) {
      for (std::size_t k = 0; k < m.site(i).size(); ++k) {
        MpsModel p = m, q = m;
        p.site(i)[k] += h;
        q.site(i)[k] -= h;
        const auto fp = mps_forward(p, in), fq = mps_forward(q, in);
        double fd = 0.0;
        for (std::size_t j = 0; j < 4; ++j) fd += up[j] * (fp[j] - fq[j]) / (2 * h);
        EXPECT_LE(rel_err(g.tensors[i][k], fd), 1e-4) << "site " << i << " entry " << k;
      }
    }
  }
}

TEST(MpsBackward, CachedEqualsRecomputed) {
  // Output is linear in each site, so the gradient entry equals the forward
  // pass with that site replaced by a unit tensor.
  std::mt19937_64 rng(8);
  const MpsModel m = oracle::random_mps(7, 3, 2, rng);
  const MappedInput in = feature_map(oracle::random_features(7, rng));
  const std::vector<double> up{0.7, -1.1};
  const auto g = mps_backward(m, in, up);
  for (std::size_t i = 0; i < 7; ++i) {
    for (std::size_t k = 0; k < m.site(i).size(); ++k) {
      MpsModel unit = m;
      std::fill(unit.site(i).begin(), unit.site(i).end(), 0.0);
      unit.site(i)[k] = 1.0;
      const auto f = oracle::dense_contract(unit, in);
      const double want = up[0] * f[0] + up[1] * f[1];
      EXPECT_NEAR(g.tensors[i][k], want, 1e-12 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST(MpsBackward, UpstreamLogScale) {
  std::mt19937_64 rng(9);
  const MpsModel m = oracle::random_mps(5, 2, 2, rng);
  const MappedInput in = feature_map(oracle::random_features(5, rng));
  const std::vector<double> up{1.0, 2.0};
  const auto a = mps_backward(m, in, up, std::log(4.0));
  const auto b = mps_backward(m, in, std::vector<double>{4.0, 8.0});
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t k = 0; k < a.tensors[i].size(); ++k)
      EXPECT_NEAR(a.tensors[i][k], b.tensors[i][k], 1e-12 * std::max(1.0, std::abs(b.tensors[i][k])));
}

TEST(ApplyGradient, SgdStep) {
  std::mt19937_64 rng(10);
  MpsModel m = oracle::random_mps(3, 2, 2, rng);
  const MpsModel before = m;
  MpsGradient g;
  for (const auto& t : m.tensors()) g.tensors.emplace_back(t.size(), 1.0);
  apply_gradient(m, g, 0.25);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t k = 0; k < m.site(i).size(); ++k) EXPECT_DOUBLE_EQ(m.site(i)[k], before.site(i)[k] - 0.25);
  g.tensors.pop_back();
  EXPECT_THROW(apply_gradient(m, g, 0.1), ShapeError);
}

}  // namespace
}  // namespace cotenqu
