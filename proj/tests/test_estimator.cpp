#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bsvd/estimator.hpp"
#include "oracle_values.hpp"
#include "test_util.hpp"

using namespace bsvd;

namespace {

EstimatorConfig cfg_with(double delta, double n) {
  EstimatorConfig c;
  c.delta = delta;
  c.n = n;
  return c;
}

}  // namespace

TEST(CutoffKappa, ExtendedPrecisionValue) {
  auto c = cfg_with(1e-2, 1e8);
  EXPECT_NEAR(cutoff_kappa(1, c, 5), oracle::kKappa_l1_s5_d1em2_n1e8, 1e-12);
}

TEST(CutoffKappa, NoOperatorNoise) {
  EXPECT_DOUBLE_EQ(cutoff_kappa(3, cfg_with(0.0, 100.0), 7), 10.0);
  EXPECT_TRUE(std::isinf(cutoff_kappa(1, cfg_with(0.0, kInfinity), 1)));
}

TEST(CutoffKappa, UnitLogDelta) {
  EXPECT_NEAR(cutoff_kappa(1, cfg_with(std::exp(-1.0), kInfinity), 1), std::exp(1.0), 1e-14);
}

TEST(CutoffKappa, MonotoneInLambda0) {
  auto c = cfg_with(1e-3, 1e6);
  double prev = 0.0;
  for (double lam : {0.01, 0.1, 1.0, 10.0, 1e3}) {
    c.lambda0 = lam;
    const double k = cutoff_kappa(2, c, 3);
    EXPECT_GE(k, prev);
    prev = k;
  }
}

TEST(ThresholdTau, ExtendedPrecisionValue) {
  EXPECT_NEAR(threshold_tau(2, cfg_with(0.0, 1e4), 3), oracle::kTau_m1_s3_n1e4, 1e-15);
}

TEST(ThresholdTau, ZeroCases) {
  auto c = cfg_with(0.1, 1e6);
  c.mu0 = 0.0;
  for (int l = 1; l < 5; ++l) EXPECT_EQ(threshold_tau(l, c, 2 * l - 1), 0.0);
  EXPECT_EQ(threshold_tau(1, cfg_with(0.1, kInfinity), 9), 0.0);
}

TEST(EstimatorConfig, Validation) {
  EXPECT_THROW(cfg_with(1.0, 10.0).validate(), ConfigError);
  EXPECT_THROW(cfg_with(-0.1, 10.0).validate(), ConfigError);
  EXPECT_THROW(cfg_with(0.1, 1.0).validate(), ConfigError);
  EXPECT_THROW(cfg_with(0.1, 0.0).validate(), ConfigError);
  auto c = cfg_with(0.1, 10.0);
  c.lambda0 = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_NO_THROW(cfg_with(0.0, kInfinity).validate());
}

TEST(MaxLevel, SphereExample) {
  auto c = cfg_with(1e-3, 1e8);
  c.nu = 2;
  c.d = 2;
  EXPECT_EQ(max_level(c), 15);
  EXPECT_EQ(std::floor(oracle::kLevelDeltaTerm), 15);
  EXPECT_EQ(std::floor(oracle::kLevelNTerm), 21);
  c.delta = 0.0;
  EXPECT_EQ(max_level(c), 21);
}

TEST(MaxLevel, ExponentsCollapse) {
  auto c = cfg_with(0.0, 64.0);
  c.nu = 0;
  c.d = 1;
  EXPECT_EQ(max_level(c), 64);
}

TEST(MaxLevel, OverrideAndMissingCap) {
  auto c = cfg_with(0.3, 1e5);
  c.level_override = 10;
  EXPECT_EQ(max_level(c), 10);
  EXPECT_THROW(max_level(cfg_with(0.0, kInfinity)), ConfigError);
  auto tiny = cfg_with(0.9, kInfinity);
  tiny.nu = 5;
  EXPECT_EQ(max_level(tiny), 1);
}

TEST(Estimate, ExactRecoveryWithoutNoise) {
  std::mt19937_64 rng(5);
  const auto s = BlockStructure::circular(2, 6);
  const auto K = testutil::random_operator(rng, s, 4.0);
  const auto f = testutil::random_coeffs(rng, s);
  auto c = cfg_with(0.0, kInfinity);
  c.level_override = 6;
  const auto r = estimate(apply_operator(K, f), K, c);
  EXPECT_EQ(r.level_used, 6);
  for (int l = 1; l <= 6; ++l) {
    EXPECT_TRUE(r.gate_pass[l - 1]);
    EXPECT_TRUE(r.energy_pass[l - 1]);
    EXPECT_LE((r.f_hat.block(l) - f.block(l)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Estimate, LevelsAboveCapAreZero) {
  std::mt19937_64 rng(6);
  const auto s = BlockStructure::spherical(6);
  const auto K = testutil::random_operator(rng, s, 4.0);
  const auto f = testutil::random_coeffs(rng, s);
  auto c = cfg_with(0.0, kInfinity);
  c.level_override = 3;
  const auto r = estimate(apply_operator(K, f), K, c);
  EXPECT_EQ(r.level_used, 3);
  for (int l = 4; l <= 6; ++l) EXPECT_EQ(r.f_hat.block(l).norm(), 0.0);
  EXPECT_NEAR(squared_error(r.f_hat, f), tail_energy(f, 3), 1e-10);
}

TEST(Estimate, EnergyBelowThresholdIsKilled) {
  const auto s = BlockStructure::custom({2, 2});
  const auto K = BlockOperator<double>::identity(s);
  auto c = cfg_with(0.0, 1e4);
  c.level_override = 2;
  const double tau = threshold_tau(2, c, 2);
  BlockCoefficients<double> z(s);
  z.set_block(1, Eigen::VectorXcd::Constant(2, 1.0));
  Eigen::VectorXcd half(2);
  half << 0.5 * tau, 0.0;
  z.set_block(2, half);
  const auto r = estimate(z, K, c);
  EXPECT_TRUE(r.energy_pass[0]);
  EXPECT_FALSE(r.energy_pass[1]);
  EXPECT_EQ(r.f_hat.block(2).norm(), 0.0);
  // Exactly at the threshold the block is kept.
  half << tau, 0.0;
  z.set_block(2, half);
  EXPECT_TRUE(estimate(z, K, c).energy_pass[1]);
}

TEST(Estimate, GateFailsOnIllConditionedBlock) {
  const auto s = BlockStructure::custom({2});
  auto c = cfg_with(1e-2, 1e8);
  c.level_override = 1;
  const double kappa = cutoff_kappa(1, c, 2);
  const double eps = 0.5 / kappa;  // ||diag(1, eps)^{-1}|| = 2 kappa
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Identity(2, 2);
  b(1, 1) = eps;
  const BlockOperator<double> K(s, {b});
  const BlockCoefficients<double> z(s, {Eigen::VectorXcd::Ones(2)});
  const auto r = estimate(z, K, c);
  EXPECT_FALSE(r.gate_pass[0]);
  EXPECT_TRUE(r.energy_pass[0]);
  EXPECT_NEAR(r.inverse_norm[0], 2 * kappa, 1e-9 * kappa);
  EXPECT_EQ(r.f_hat.block(1).norm(), 0.0);
}

TEST(Estimate, SingularBlockFailsGateWithoutThrowing) {
  const auto s = BlockStructure::custom({2, 1});
  Eigen::MatrixXcd sing(2, 2);
  sing << 1, 1, 1, 1;
  const BlockOperator<double> K(s, {sing, Eigen::MatrixXcd::Identity(1, 1)});
  const BlockCoefficients<double> z(s, {Eigen::VectorXcd::Ones(2), Eigen::VectorXcd::Ones(1)});
  auto c = cfg_with(0.0, kInfinity);
  c.level_override = 2;
  const auto r = estimate(z, K, c);
  EXPECT_FALSE(r.gate_pass[0]);
  EXPECT_TRUE(std::isinf(r.inverse_norm[0]));
  EXPECT_TRUE(r.gate_pass[1]);
}

TEST(Estimate, MonotoneGates) {
  std::mt19937_64 rng(7);
  const auto s = BlockStructure::spherical(8);
  const auto K = testutil::random_operator(rng, s, 0.5);
  const auto z = testutil::random_coeffs(rng, s);
  auto c = cfg_with(0.05, 50.0);
  c.level_override = 8;
  std::vector<bool> prev_gate(8, false), prev_energy(8, true);
  for (double scale : {0.01, 0.1, 0.5, 1.0, 2.0, 8.0}) {
    c.lambda0 = scale;
    c.mu0 = scale;
    const auto r = estimate(z, K, c);
    for (int i = 0; i < 8; ++i) {
      if (prev_gate[i]) {
        EXPECT_TRUE(r.gate_pass[i]);
      }
      if (!prev_energy[i]) {
        EXPECT_FALSE(r.energy_pass[i]);
      }
      prev_gate[i] = r.gate_pass[i];
      prev_energy[i] = r.energy_pass[i];
    }
  }
}

TEST(Estimate, ScalingConsistency) {
  std::mt19937_64 rng(8);
  const auto s = BlockStructure::circular(1, 10);
  const auto K = testutil::random_operator(rng, s, 2.0);
  const auto z = testutil::random_coeffs(rng, s);
  auto c = cfg_with(0.01, 1e3);
  c.level_override = 10;
  const std::complex<double> k(3.0, 0.0);
  const auto a = estimate(z, K, c);
  const auto b = estimate(k * z, k * K, c);
  int compared = 0;
  for (int l = 1; l <= 10; ++l) {
    const int i = l - 1;
    if (a.gate_pass[i] && a.energy_pass[i] && b.gate_pass[i] && b.energy_pass[i]) {
      EXPECT_LE((a.f_hat.block(l) - b.f_hat.block(l)).cwiseAbs().maxCoeff(), 1e-10);
      ++compared;
    }
  }
  EXPECT_GT(compared, 0);
}

TEST(SquaredError, TrivialCases) {
  std::mt19937_64 rng(9);
  const auto s = BlockStructure::spherical(4);
  const auto f = testutil::random_coeffs(rng, s);
  EXPECT_EQ(squared_error(f, f), 0.0);
  BlockCoefficients<double> unit(BlockStructure::custom({1, 1}));
  unit.set_block(2, Eigen::VectorXcd::Ones(1));
  EXPECT_DOUBLE_EQ(squared_error(BlockCoefficients<double>(BlockStructure::custom({1, 1})), unit), 1.0);
}

TEST(SquaredError, MatchesFlatOracleAndLevelSum) {
  std::mt19937_64 rng(10);
  const auto s = BlockStructure::circular(3, 5);
  const auto a = testutil::random_coeffs(rng, s);
  const auto b = testutil::random_coeffs(rng, s);
  const double flat = (a.flatten() - b.flatten()).squaredNorm();
  EXPECT_NEAR(squared_error(a, b), flat, 1e-13 * flat);
  double sum = 0.0;
  for (double e : squared_error_by_level(a, b)) sum += e;
  EXPECT_NEAR(sum, squared_error(a, b), 1e-15 * flat);
}

TEST(SquaredError, MissingLevelsCountAsZero) {
  std::mt19937_64 rng(11);
  const auto f = testutil::random_coeffs(rng, BlockStructure::spherical(5));
  const auto short_hat = truncate(f, 2);
  EXPECT_NEAR(squared_error(short_hat, f), tail_energy(f, 2), 1e-13);
}
