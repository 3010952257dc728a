#include "bsvd/sampling.hpp"

#include <cmath>
#include <numbers>

namespace bsvd {

namespace {

constexpr double kPi = std::numbers::pi;

sphere::SpherePoint uniform_direction(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double z = 2.0 * u(rng) - 1.0;
  const double phi = 2.0 * kPi * u(rng);
  return {std::acos(z), phi};
}

}  // namespace

std::vector<sphere::SpherePoint> sample_sphere_density(const std::function<double(const sphere::SpherePoint&)>& f,
                                                       double f_max, int n, const SeedSpec& seed) {
  if (!(f_max > 0.0)) throw DomainError("sample_sphere_density: f_max must be positive");
  if (n < 0) throw DomainError("sample_sphere_density: n must be nonnegative");
  auto rng = make_engine(seed, Stream::Sphere);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  auto propose = [&](sphere::SpherePoint& p) {
    p = uniform_direction(rng);
    const double value = f(p);
    if (value > f_max * (1.0 + 1e-12))
      throw DomainError("sample_sphere_density: density exceeds the supplied bound f_max");
    return u(rng) * f_max < value;
  };

  std::vector<sphere::SpherePoint> out;
  out.reserve(n);
  constexpr int kProbe = 100000;
  int accepted = 0;
  sphere::SpherePoint p;
  for (int i = 0; i < kProbe; ++i) {
    if (propose(p)) {
      ++accepted;
      if (static_cast<int>(out.size()) < n) out.push_back(p);
    }
  }
  if (static_cast<double>(accepted) / kProbe < 1e-4)
    throw AccuracyError("sample_sphere_density: acceptance rate below 1e-4");
  while (static_cast<int>(out.size()) < n)
    if (propose(p)) out.push_back(p);
  return out;
}

std::vector<sphere::RotationZYZ> sample_rotation_conjinv(const std::function<double(double)>& angle_quantile,
                                                         int n, const SeedSpec& seed) {
  if (n < 0) throw DomainError("sample_rotation_conjinv: n must be nonnegative");
  auto rng = make_engine(seed, Stream::Rotation);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<sphere::RotationZYZ> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d axis = uniform_direction(rng).direction();
    const double angle = angle_quantile(u(rng));
    const Eigen::Matrix3d r = Eigen::AngleAxisd(angle, axis).toRotationMatrix();
    out.push_back(sphere::RotationZYZ::from_matrix(r));
  }
  return out;
}

double haar_angle_quantile(double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("haar_angle_quantile: u outside [0, 1]");
  // CDF (w - sin w) / pi is monotone on [0, pi]; bisection is plenty.
  double lo = 0.0, hi = kPi;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((mid - std::sin(mid)) / kPi < u)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<sphere::SpherePoint> act(std::span<const sphere::RotationZYZ> rotations,
                                     std::span<const sphere::SpherePoint> points) {
  if (rotations.size() != points.size()) throw ShapeError("act: rotation and point counts differ");
  std::vector<sphere::SpherePoint> out;
  out.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) out.push_back(sphere::rotate(rotations[i], points[i]));
  return out;
}

sphere::SphericalCoeffs empirical_coeffs(std::span<const sphere::SpherePoint> points, int l_max) {
  if (points.empty()) throw DomainError("empirical_coeffs: empty sample");
  if (l_max < 0) throw RangeError("l_max must be >= 0");
  Eigen::VectorXcd acc = Eigen::VectorXcd::Zero((l_max + 1) * (l_max + 1));
  for (const auto& p : points) acc += sphere::spherical_harmonics(l_max, p).conjugate();
  acc /= static_cast<double>(points.size());
  std::vector<Eigen::VectorXcd> blocks;
  Eigen::Index pos = 0;
  for (int l = 0; l <= l_max; ++l) {
    blocks.push_back(acc.segment(pos, 2 * l + 1));
    pos += 2 * l + 1;
  }
  return sphere::SphericalCoeffs(BlockStructure::spherical(l_max + 1), std::move(blocks));
}

}  // namespace bsvd
