#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bsvd/estimator.hpp"
#include "bsvd/random.hpp"
#include "bsvd/torus.hpp"

using namespace bsvd;

namespace {

struct Moments {
  double mean = 0.0;
  double se = 0.0;
};

Moments moments(const std::vector<double>& x) {
  Moments m;
  for (double v : x) m.mean += v;
  m.mean /= x.size();
  double ss = 0.0;
  for (double v : x) ss += (v - m.mean) * (v - m.mean);
  m.se = std::sqrt(ss / (x.size() - 1) / x.size());
  return m;
}

bool bitwise_equal(const BlockOperator<double>& a, const BlockOperator<double>& b) {
  if (a.levels() != b.levels()) return false;
  for (int l = 1; l <= a.levels(); ++l)
    if (!(a.block(l).array() == b.block(l).array()).all()) return false;
  return true;
}

}  // namespace

TEST(Seeding, DerivedSeedsDifferAcrossStreamsAndReplicates) {
  const SeedSpec a{42, 0}, b{42, 1}, c{43, 0};
  EXPECT_NE(derive_seed(a, Stream::Operator), derive_seed(a, Stream::Signal));
  EXPECT_NE(derive_seed(a, Stream::Operator), derive_seed(b, Stream::Operator));
  EXPECT_NE(derive_seed(a, Stream::Operator), derive_seed(c, Stream::Operator));
  EXPECT_EQ(derive_seed(a, Stream::Operator), derive_seed(SeedSpec{42, 0}, Stream::Operator));
  auto e1 = make_engine(a, Stream::Signal), e2 = make_engine(a, Stream::Signal);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(e1(), e2());
}

TEST(PerturbOperator, ZeroDeltaIsIdentical) {
  const auto K = torus::power_law_operator(2.0, 20);
  EXPECT_TRUE(bitwise_equal(perturb_operator(K, 0.0, {1, 2}), K));
  EXPECT_THROW(perturb_operator(K, -0.1, {1, 2}), DomainError);
}

TEST(PerturbOperator, Reproducible) {
  const auto K = BlockOperator<double>::identity(BlockStructure::spherical(6));
  EXPECT_TRUE(bitwise_equal(perturb_operator(K, 0.1, {7, 3}), perturb_operator(K, 0.1, {7, 3})));
  EXPECT_FALSE(bitwise_equal(perturb_operator(K, 0.1, {7, 3}), perturb_operator(K, 0.1, {7, 4})));
}

TEST(PerturbOperator, FrobeniusMomentComplex) {
  const auto K = BlockOperator<double>::identity(BlockStructure::custom({5}));
  const double delta = 0.3;
  std::vector<double> x;
  for (int r = 0; r < 10000; ++r)
    x.push_back((perturb_operator(K, delta, {11, static_cast<std::uint64_t>(r)}).block(1) - K.block(1)).squaredNorm());
  const auto m = moments(x);
  EXPECT_NEAR(m.mean, delta * delta * 25.0, 3.0 * m.se);
}

TEST(PerturbOperator, FrobeniusMomentRealMode) {
  const auto s = BlockStructure::circular(2, 2);  // level 2 has 4 entries
  const auto K = BlockOperator<double>::identity(s);
  const double delta = 0.3;
  std::vector<double> x;
  for (int r = 0; r < 10000; ++r)
    x.push_back((perturb_operator(K, delta, {12, static_cast<std::uint64_t>(r)}, NoiseMode::Real).block(2) -
                 K.block(2)).squaredNorm());
  const auto m = moments(x);
  EXPECT_NEAR(m.mean, delta * delta * 16.0, 3.0 * m.se);
}

TEST(PerturbOperator, RealModeKeepsRealOperatorsReal) {
  const auto K = torus::power_law_operator(1.0, 6);
  const auto Kd = perturb_operator(K, 0.2, {13, 0}, NoiseMode::Real);
  for (int l = 2; l <= 7; ++l) {
    const auto U = torus::real_representation(2);
    const Eigen::MatrixXcd real = U * Kd.block(l) * U.adjoint();
    EXPECT_LE(real.imag().cwiseAbs().maxCoeff(), 1e-15);
  }
  EXPECT_THROW(perturb_operator(BlockOperator<double>::identity(BlockStructure::spherical(2)), 0.1, {1, 1},
                                NoiseMode::Real),
               ConfigError);
}

TEST(ObserveSignal, NoiselessIsExact) {
  const auto K = torus::power_law_operator(2.0, 30);
  const auto f = torus::power_law_signal(5.0, 30).coeffs;
  const auto z = observe_signal(K, f, kInfinity, {1, 1});
  const auto clean = apply_operator(K, f);
  for (int l = 1; l <= 31; ++l) EXPECT_TRUE((z.block(l).array() == clean.block(l).array()).all());
}

TEST(ObserveSignal, NoiseEnergyMoment) {
  for (auto mode : {NoiseMode::Complex, NoiseMode::Real}) {
    const auto s = BlockStructure::circular(2, 3);  // level 3 has 8 entries
    const auto K = BlockOperator<double>::identity(s);
    const BlockCoefficients<double> f(s);
    const double n = 400.0;
    std::vector<double> x;
    for (int r = 0; r < 10000; ++r)
      x.push_back(observe_signal(K, f, n, {14, static_cast<std::uint64_t>(r)}, mode).block(3).squaredNorm());
    const auto m = moments(x);
    EXPECT_NEAR(m.mean, 8.0 / n, 3.0 * m.se);
  }
}

TEST(ObserveSignal, RealModePreservesSymmetryAndIsReproducible) {
  const auto K = torus::power_law_operator(1.0, 40);
  const auto f = torus::power_law_signal(2.0, 40).coeffs;
  const auto z = observe_signal(K, f, 100.0, {15, 2}, NoiseMode::Real);
  EXPECT_LE(torus::conjugate_symmetry_residue(z), 1e-15);
  const auto again = observe_signal(K, f, 100.0, {15, 2}, NoiseMode::Real);
  for (int l = 1; l <= 41; ++l) EXPECT_TRUE((z.block(l).array() == again.block(l).array()).all());
}

TEST(Concentration, SizeOneIsHalfNormal) {
  const auto s = concentration_diag(1, 100000, 5);
  const double se = s.std_op_norm_scaled / std::sqrt(100000.0);
  EXPECT_NEAR(s.mean_op_norm_scaled, std::sqrt(2.0 / std::numbers::pi), 3.0 * se);
}

TEST(Concentration, ModerateSizeAndTails) {
  const auto s = concentration_diag(16, 4000, 6);
  EXPECT_GT(s.mean_op_norm_scaled, 1.5);
  EXPECT_LT(s.mean_op_norm_scaled, 2.3);
  EXPECT_NEAR(s.mean_vec_norm_scaled, 1.0, 0.03);
  for (std::size_t i = 1; i < s.betas.size(); ++i) {
    EXPECT_LE(s.vec_exceedance[i], s.vec_exceedance[i - 1]);
    EXPECT_LE(s.op_exceedance[i], s.op_exceedance[i - 1]);
  }
  EXPECT_LT(s.vec_exceedance.back(), std::exp(-4.0));
}

TEST(Concentration, ThreadCountDoesNotChangeResults) {
  const auto a = concentration_diag(8, 500, 9, 1);
  const auto b = concentration_diag(8, 500, 9, 3);
  EXPECT_EQ(a.mean_op_norm_scaled, b.mean_op_norm_scaled);
  EXPECT_EQ(a.std_vec_norm_scaled, b.std_vec_norm_scaled);
  EXPECT_EQ(a.op_exceedance, b.op_exceedance);
  EXPECT_THROW(concentration_diag(0, 10, 1), DomainError);
}
