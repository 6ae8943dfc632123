// Copyright 2026 The rsbeam Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rsbeam/model.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace rsbeam {
namespace {

using testing::Cplx;

TEST(SystemConfigTest, SymmetricFillsEqualWeights) {
  const SystemConfig cfg = SystemConfig::Symmetric(4, 2, 100.0, 1.0, 0.5);
  EXPECT_DOUBLE_EQ(cfg.weights[0], 0.5);
  EXPECT_DOUBLE_EQ(cfg.weights[1], 0.5);
  EXPECT_DOUBLE_EQ(cfg.secrecy_thresholds[1], 0.5);
  EXPECT_NO_THROW(cfg.Validate());
}

TEST(SystemConfigTest, RejectsBadFields) {
  SystemConfig cfg = SystemConfig::Symmetric(2, 2, 100.0, 1.0, 0.0);
  cfg.noise_var = 0.0;
  EXPECT_THROW(cfg.Validate(), std::invalid_argument);
  cfg = SystemConfig::Symmetric(2, 2, 100.0, 1.0, 0.0);
  cfg.power_budget = -1.0;
  EXPECT_THROW(cfg.Validate(), std::invalid_argument);
  cfg = SystemConfig::Symmetric(2, 2, 100.0, 1.0, 0.0);
  cfg.weights.setZero();
  EXPECT_THROW(cfg.Validate(), std::invalid_argument);
  cfg = SystemConfig::Symmetric(2, 2, 100.0, 1.0, 0.0);
  cfg.secrecy_thresholds[0] = -0.1;
  EXPECT_THROW(cfg.Validate(), std::invalid_argument);
  cfg = SystemConfig::Symmetric(2, 2, 100.0, 1.0, 0.0);
  cfg.weights.resize(3);
  EXPECT_THROW(cfg.Validate(), std::invalid_argument);
}

TEST(ChannelMatrixTest, RejectsZeroColumnAndNonFinite) {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Ones(2, 2);
  h.col(1).setZero();
  EXPECT_THROW(ChannelMatrix{h}, std::invalid_argument);
  h = Eigen::MatrixXcd::Ones(2, 2);
  h(0, 0) = Cplx(std::nan(""), 0.0);
  EXPECT_THROW(ChannelMatrix{h}, std::invalid_argument);
}

TEST(SpecificChannelsTest, FourAntennaInstance) {
  const double theta = std::numbers::pi / 9;
  const ChannelMatrix h = SpecificChannels(4, theta, 0.3);
  ASSERT_EQ(h.n_tx(), 4);
  ASSERT_EQ(h.n_users(), 2);
  for (int m = 0; m < 4; ++m) {
    EXPECT_EQ(h.entries()(m, 0), Cplx(1.0, 0.0));
    const Cplx want = 0.3 * Cplx(std::cos(m * theta), std::sin(m * theta));
    EXPECT_NEAR(std::abs(h.entries()(m, 1) - want), 0.0, 1e-15);
  }
}

TEST(SpecificChannelsTest, ZeroAngleAlignsColumns) {
  const ChannelMatrix h = SpecificChannels(2, 0.0, 1.0);
  EXPECT_EQ(h.entries().col(0), h.entries().col(1));
  EXPECT_EQ(h.entries()(1, 0), Cplx(1.0, 0.0));
}

TEST(SpecificChannelsTest, QuarterTurnIsOrthogonal) {
  const ChannelMatrix h = SpecificChannels(4, std::numbers::pi / 2, 1.0);
  EXPECT_NEAR(std::abs(testing::Inner(h.user(0), h.user(1))), 0.0, 1e-15);
}

TEST(SpecificChannelsTest, RejectsNonPositiveGamma) {
  EXPECT_THROW(SpecificChannels(2, 0.1, 0.0), std::invalid_argument);
  EXPECT_THROW(SpecificChannels(2, 0.1, -1.0), std::invalid_argument);
}

TEST(RandomChannelsTest, DeterministicAndShaped) {
  const ChannelMatrix a = RandomChannels(2, 2, 17);
  const ChannelMatrix b = RandomChannels(2, 2, 17);
  const ChannelMatrix c = RandomChannels(2, 2, 18);
  EXPECT_EQ(a.n_tx(), 2);
  EXPECT_EQ(a.n_users(), 2);
  EXPECT_EQ(a.entries(), b.entries());
  EXPECT_NE(a.entries(), c.entries());
}

TEST(RandomChannelsTest, UnitVarianceEntries) {
  const ChannelMatrix h = RandomChannels(1000, 100, 3);
  const double mean_power = h.entries().cwiseAbs2().mean();
  EXPECT_NEAR(mean_power, 1.0, 0.02);
  EXPECT_NEAR(h.entries().mean().real(), 0.0, 0.02);
  EXPECT_NEAR(h.entries().mean().imag(), 0.0, 0.02);
}

TEST(ComputeSinrsTest, ZeroPrecoderGivesZero) {
  const ChannelMatrix h = RandomChannels(3, 2, 1);
  const SinrTable s = ComputeSinrs(h, Precoder::Zero(2, 3), 1.0);
  EXPECT_EQ(s.common.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(s.priv.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(s.wiretap.cwiseAbs().maxCoeff(), 0.0);
}

TEST(ComputeSinrsTest, OrthogonalUnitChannels) {
  // P_t = 2 split evenly along orthogonal unit channels.
  const ChannelMatrix h(Eigen::MatrixXcd::Identity(2, 2));
  Precoder p = Precoder::Zero(2, 2);
  p.priv[0] = h.user(0);
  p.priv[1] = h.user(1);
  const SinrTable s = ComputeSinrs(h, p, 1.0);
  EXPECT_DOUBLE_EQ(s.priv[0], 1.0);
  EXPECT_DOUBLE_EQ(s.priv[1], 1.0);
  EXPECT_DOUBLE_EQ(s.wiretap(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(s.wiretap(1, 0), 0.0);
}

TEST(ComputeSinrsTest, CommonDenominatorCountsEveryPrivateStream) {
  const ChannelMatrix h(Eigen::MatrixXcd::Ones(2, 2));
  Precoder p = Precoder::Zero(2, 2);
  p.common << 1.0, 0.0;
  p.priv[0] << 0.0, 1.0;
  p.priv[1] << 0.0, 1.0;
  const SinrTable s = ComputeSinrs(h, p, 1.0);
  EXPECT_DOUBLE_EQ(s.common[0], 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(s.common[1], 1.0 / 3.0);
}

TEST(ComputeSinrsTest, RejectsBadNoiseAndShape) {
  const ChannelMatrix h = RandomChannels(2, 2, 1);
  EXPECT_THROW(ComputeSinrs(h, Precoder::Zero(2, 2), 0.0),
               std::invalid_argument);
  EXPECT_THROW(ComputeSinrs(h, Precoder::Zero(3, 2), 1.0),
               std::invalid_argument);
}

TEST(ComputeSinrsProperty, MatchesOracleOnRandomInstances) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int nt = 1 + static_cast<int>(rng() % 4);
    const int k = 1 + static_cast<int>(rng() % 4);
    const double noise = 0.1 + (rng() % 100) / 25.0;
    const ChannelMatrix h(testing::RandomMatrix(rng, nt, k));
    const Precoder p = testing::RandomPrecoder(rng, nt, k, 10.0);
    const SinrTable s = ComputeSinrs(h, p, noise);
    const testing::OracleSinr o = testing::ComputeOracleSinr(h.entries(), p, noise);
    for (int u = 0; u < k; ++u) {
      EXPECT_NEAR(s.common[u], o.common[u], 1e-12 * (1.0 + o.common[u]));
      EXPECT_NEAR(s.priv[u], o.priv[u], 1e-12 * (1.0 + o.priv[u]));
      for (int j = 0; j < k; ++j) {
        if (j == u) continue;
        EXPECT_NEAR(s.wiretap(j, u), o.wiretap[j][u],
                    1e-12 * (1.0 + o.wiretap[j][u]));
      }
    }
  }
}

TEST(ComputeSinrsProperty, PhaseInvariance) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (int trial = 0; trial < 100; ++trial) {
    const ChannelMatrix h(testing::RandomMatrix(rng, 3, 3));
    Precoder p = testing::RandomPrecoder(rng, 3, 3, 5.0);
    const SinrTable before = ComputeSinrs(h, p, 1.0);
    p.common *= std::polar(1.0, angle(rng));
    for (auto& v : p.priv) v *= std::polar(1.0, angle(rng));
    const SinrTable after = ComputeSinrs(h, p, 1.0);
    EXPECT_TRUE(before.common.isApprox(after.common, 1e-12));
    EXPECT_TRUE(before.priv.isApprox(after.priv, 1e-12));
    EXPECT_TRUE(before.wiretap.isApprox(after.wiretap, 1e-12));
  }
}

TEST(ComputeSinrsProperty, PrivateBeatsCommonWhenOwnGainDominates) {
  std::mt19937_64 rng(13);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const ChannelMatrix h(testing::RandomMatrix(rng, 2, 2));
    const Precoder p = testing::RandomPrecoder(rng, 2, 2, 4.0);
    const SinrTable s = ComputeSinrs(h, p, 1.0);
    for (int k = 0; k < 2; ++k) {
      if (testing::Gain(h.user(k), p.priv[k]) >=
          testing::Gain(h.user(k), p.common)) {
        EXPECT_GE(s.priv[k], s.common[k]);
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 50);
}

TEST(ComputeSinrsProperty, JointScalingOfPowerAndNoise) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    const ChannelMatrix h(testing::RandomMatrix(rng, 2, 3));
    Precoder p = testing::RandomPrecoder(rng, 2, 3, 3.0);
    const double t = 1.0 + (rng() % 1000) / 100.0;
    const SinrTable before = ComputeSinrs(h, p, 0.7);
    p.common *= t;
    for (auto& v : p.priv) v *= t;
    const SinrTable after = ComputeSinrs(h, p, 0.7 * t * t);
    EXPECT_TRUE(before.common.isApprox(after.common, 1e-11));
    EXPECT_TRUE(before.priv.isApprox(after.priv, 1e-11));
    EXPECT_TRUE(before.wiretap.isApprox(after.wiretap, 1e-11));
  }
}

TEST(EvaluateTest, ZeroPrecoder) {
  const ChannelMatrix h = RandomChannels(2, 2, 5);
  const SystemConfig cfg = SystemConfig::Symmetric(2, 2, 10.0, 1.0, 0.0);
  const RateReport r = Evaluate(h, Precoder::Zero(2, 2), cfg);
  EXPECT_EQ(r.wsr, 0.0);
  EXPECT_EQ(r.rate_private.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(r.secrecy.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_TRUE(r.common_rate_feasible);
}

TEST(EvaluateTest, OrthogonalChannelsGiveOneBitEach) {
  const ChannelMatrix h(Eigen::MatrixXcd::Identity(2, 2));
  Precoder p = Precoder::Zero(2, 2);
  p.priv[0] = h.user(0);
  p.priv[1] = h.user(1);
  const SystemConfig cfg = SystemConfig::Symmetric(2, 2, 2.0, 1.0, 0.0);
  const RateReport r = Evaluate(h, p, cfg);
  EXPECT_DOUBLE_EQ(r.rate_private[0], 1.0);
  EXPECT_DOUBLE_EQ(r.secrecy[0], 1.0);
  EXPECT_DOUBLE_EQ(r.secrecy[1], 1.0);
  EXPECT_DOUBLE_EQ(r.wsr, 1.0);
}

TEST(EvaluateTest, FlagsOverAllocatedCommonRate) {
  const ChannelMatrix h(Eigen::MatrixXcd::Ones(2, 2));
  Precoder p = Precoder::Zero(2, 2);
  p.common << 1.0, 0.0;
  p.common_alloc << 5.0, 5.0;
  const SystemConfig cfg = SystemConfig::Symmetric(2, 2, 2.0, 1.0, 0.0);
  const RateReport r = Evaluate(h, p, cfg);
  EXPECT_FALSE(r.common_rate_feasible);
  EXPECT_DOUBLE_EQ(r.common_rate_cap, 1.0);
}

TEST(EvaluateTest, ShapeMismatchThrows) {
  const ChannelMatrix h = RandomChannels(2, 2, 5);
  const SystemConfig cfg = SystemConfig::Symmetric(3, 2, 10.0, 1.0, 0.0);
  EXPECT_THROW(Evaluate(h, Precoder::Zero(2, 2), cfg), std::invalid_argument);
}

TEST(EvaluateProperty, RatesSecrecyAndWsrIdentities) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 200; ++trial) {
    const int nt = 1 + static_cast<int>(rng() % 4);
    const int k = 2 + static_cast<int>(rng() % 3);
    const ChannelMatrix h(testing::RandomMatrix(rng, nt, k));
    Precoder p = testing::RandomPrecoder(rng, nt, k, 20.0);
    SystemConfig cfg = SystemConfig::Symmetric(nt, k, 20.0, 1.0, 0.0);
    for (int u = 0; u < k; ++u) cfg.weights[u] = 0.1 + (rng() % 10) / 10.0;
    const testing::OracleSinr o = testing::ComputeOracleSinr(h.entries(), p, 1.0);
    double cap = 1e300;
    for (int u = 0; u < k; ++u) cap = std::min(cap, std::log2(1.0 + o.common[u]));
    p.common_alloc = Eigen::VectorXd::Constant(k, cap / k);
    const RateReport r = Evaluate(h, p, cfg);
    EXPECT_NEAR(r.common_rate_cap, cap, 1e-12);
    double wsr = 0.0;
    for (int u = 0; u < k; ++u) {
      const double rp = std::log2(1.0 + o.priv[u]);
      double worst = 0.0;
      for (int j = 0; j < k; ++j) {
        if (j != u) worst = std::max(worst, std::log2(1.0 + o.wiretap[u][j]));
      }
      EXPECT_NEAR(r.rate_private[u], rp, 1e-12);
      EXPECT_NEAR(r.secrecy[u], std::max(0.0, rp - worst), 1e-12);
      EXPECT_GE(r.secrecy[u], 0.0);
      if (worst > rp) {
        EXPECT_EQ(r.secrecy[u], 0.0);
      }
      wsr += cfg.weights[u] * (cap / k + rp);
    }
    EXPECT_NEAR(r.wsr, wsr, 1e-12);
    EXPECT_DOUBLE_EQ(r.wsr, cfg.weights.dot(r.total));
  }
}

TEST(TransmitPowerTest, Examples) {
  Precoder p = Precoder::Zero(2, 2);
  EXPECT_EQ(TransmitPower(p), 0.0);
  p.common << 1.0, 0.0;
  p.priv[0] << 0.0, 2.0;
  EXPECT_DOUBLE_EQ(TransmitPower(p), 5.0);
}

TEST(PowerRatiosTest, ZeroAndThrows) {
  const Precoder p = Precoder::Zero(2, 2);
  EXPECT_EQ(PowerRatios(p, 10.0), Eigen::VectorXd::Zero(3));
  EXPECT_THROW(PowerRatios(p, 0.0), std::invalid_argument);
}

TEST(PowerRatiosProperty, SumsToPowerFraction) {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 50; ++trial) {
    const Precoder p = testing::RandomPrecoder(rng, 3, 2, 7.0);
    const Eigen::VectorXd r = PowerRatios(p, 10.0);
    EXPECT_NEAR(r.sum(), 0.7, 1e-12);
    EXPECT_NEAR(r[0], p.common.squaredNorm() / 10.0, 1e-15);
  }
}

}  // namespace
}  // namespace rsbeam
