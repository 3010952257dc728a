#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "bsvd/sampling.hpp"

using namespace bsvd;
using namespace bsvd::sphere;

namespace {

Eigen::Vector3d mean_direction(const std::vector<SpherePoint>& pts) {
  Eigen::Vector3d m = Eigen::Vector3d::Zero();
  for (const auto& p : pts) m += p.direction();
  return m / static_cast<double>(pts.size());
}

// Haar-distributed rotation from the QR factorization of a Gaussian matrix.
Eigen::Matrix3d haar_by_qr(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::Matrix3d a;
  for (int i = 0; i < 9; ++i) a(i) = g(rng);
  Eigen::HouseholderQR<Eigen::Matrix3d> qr(a);
  Eigen::Matrix3d q = qr.householderQ();
  const Eigen::Matrix3d r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < 3; ++j)
    if (r(j, j) < 0) q.col(j) *= -1.0;
  if (q.determinant() < 0) q.col(0) *= -1.0;
  return q;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
  }
  return d;
}

}  // namespace

TEST(SphereSampling, UniformDensityAcceptsEverything) {
  const int n = 20000;
  const auto pts = sample_sphere_density([](const SpherePoint&) { return 1.0; }, 1.0, n, {3, 0});
  ASSERT_EQ(pts.size(), static_cast<std::size_t>(n));
  EXPECT_LT(mean_direction(pts).norm(), 4.0 / std::sqrt(double(n)));
}

TEST(SphereSampling, BumpSamplesConcentrateNearCenter) {
  const int n = 5000;
  const auto f = [](const SpherePoint& p) { return 4.0 * std::numbers::pi * gaussian_bump(p); };
  const auto pts = sample_sphere_density(f, 4.0 * std::numbers::pi * kBumpScale, n, {3, 1});
  EXPECT_GT(mean_direction(pts).dot(bump_center()), 4.0 / std::sqrt(double(n)));
}

TEST(SphereSampling, Errors) {
  const auto spike = [](const SpherePoint& p) { return p.theta < 1e-3 ? 1.0 : 0.0; };
  EXPECT_THROW(sample_sphere_density(spike, 1.0, 10, {1, 0}), AccuracyError);
  EXPECT_THROW(sample_sphere_density([](const SpherePoint&) { return 2.0; }, 1.0, 10, {1, 0}), DomainError);
}

TEST(SphereSampling, Reproducible) {
  const auto f = [](const SpherePoint& p) { return 1.0 + std::cos(p.theta); };
  const auto a = sample_sphere_density(f, 2.0, 100, {8, 2});
  const auto b = sample_sphere_density(f, 2.0, 100, {8, 2});
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].theta, b[i].theta);
    EXPECT_EQ(a[i].phi, b[i].phi);
  }
}

TEST(RotationSampling, ZeroAngleGivesIdentity) {
  const auto rs = sample_rotation_conjinv([](double) { return 0.0; }, 50, {2, 0});
  for (const auto& r : rs) EXPECT_LE((r.matrix() - Eigen::Matrix3d::Identity()).norm(), 1e-12);
}

TEST(RotationSampling, HaarAngleQuantile) {
  EXPECT_NEAR(haar_angle_quantile(0.0), 0.0, 1e-12);
  EXPECT_NEAR(haar_angle_quantile(1.0), std::numbers::pi, 1e-12);
  for (double u : {0.1, 0.5, 0.9}) {
    const double w = haar_angle_quantile(u);
    EXPECT_NEAR((w - std::sin(w)) / std::numbers::pi, u, 1e-12);
  }
}

TEST(RotationSampling, HaarTraceMatchesQrOracle) {
  const int n = 10000;
  const auto rs = sample_rotation_conjinv(haar_angle_quantile, n, {21, 0});
  std::vector<double> a, b;
  for (const auto& r : rs) a.push_back(r.matrix().trace());
  std::mt19937_64 rng(99);
  for (int i = 0; i < n; ++i) b.push_back(haar_by_qr(rng).trace());
  // 1% critical value of the two-sample statistic, 1.63 sqrt(2/n).
  EXPECT_LT(ks_two_sample(a, b), 1.63 * std::sqrt(2.0 / n));
}

TEST(RotationSampling, ActRotatesPointwise) {
  const auto rs = sample_rotation_conjinv(haar_angle_quantile, 5, {4, 4});
  std::vector<SpherePoint> pts(5, SpherePoint{0.3, 1.2});
  const auto z = act(rs, pts);
  for (int i = 0; i < 5; ++i)
    EXPECT_LE((z[i].direction() - rs[i].matrix() * pts[i].direction()).norm(), 1e-12);
  EXPECT_THROW(act(rs, std::span<const SpherePoint>(pts).first(3)), ShapeError);
}

TEST(EmpiricalCoeffs, NorthPole) {
  const std::vector<SpherePoint> pole{{0.0, 0.0}};
  const auto c = empirical_coeffs(pole, 3);
  EXPECT_NEAR(std::abs(c.block(1)(0) - 1.0), 0.0, 1e-14);
  for (int l = 1; l <= 3; ++l) EXPECT_NEAR(c.block(l + 1)(l).real(), std::sqrt(2.0 * l + 1.0), 1e-12);
}

TEST(EmpiricalCoeffs, UniformPointsHaveVanishingHigherCoefficients) {
  const int n = 100000;
  const auto pts = sample_sphere_density([](const SpherePoint&) { return 1.0; }, 1.0, n, {5, 0});
  const auto c = empirical_coeffs(pts, 4);
  for (int l = 2; l <= 5; ++l)
    for (int i = 0; i < c.block(l).size(); ++i) EXPECT_LT(std::abs(c.block(l)(i)), 5.0 / std::sqrt(double(n)));
}

TEST(EmpiricalCoeffs, BumpSamplesEstimateDensityCoefficients) {
  const int n = 100000, l_max = 4;
  const auto f = [](const SpherePoint& p) { return 4.0 * std::numbers::pi * gaussian_bump(p); };
  const auto pts = sample_sphere_density(f, 4.0 * std::numbers::pi * kBumpScale, n, {6, 0});
  const auto c = empirical_coeffs(pts, l_max);
  const auto truth = bump_density_coeffs(l_max);
  // Each conj(Y_l^m) has second moment at most 2l+1 under any law on S^2
  // (addition theorem), so this bound holds per coefficient.
  for (int l = 1; l <= l_max + 1; ++l)
    for (int i = 0; i < c.block(l).size(); ++i)
      EXPECT_LT(std::abs(c.block(l)(i) - truth.block(l)(i)), 5.0 * std::sqrt((2.0 * l - 1.0) / n));
}
