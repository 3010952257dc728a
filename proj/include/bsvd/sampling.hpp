#pragma once

#include <functional>
#include <span>
#include <vector>

#include "bsvd/random.hpp"
#include "bsvd/sphere.hpp"

namespace bsvd {

/// Rejection sampling from a density on S^2 (w.r.t. the uniform law),
/// proposing uniform directions and accepting with probability f/f_max.
///
/// A probe of 10^5 proposals runs first; an acceptance rate below 1e-4 throws
/// AccuracyError. Throws DomainError if f exceeds f_max at a proposal.
std::vector<sphere::SpherePoint> sample_sphere_density(const std::function<double(const sphere::SpherePoint&)>& f,
                                                       double f_max, int n, const SeedSpec& seed);

/// Rotations with axis uniform on S^2 and angle angle_quantile(U), U ~ U[0,1].
/// The law is invariant under conjugation.
std::vector<sphere::RotationZYZ> sample_rotation_conjinv(const std::function<double(double)>& angle_quantile,
                                                         int n, const SeedSpec& seed);

/// Quantile of the rotation angle under Haar measure, density (1 - cos w)/pi on [0, pi].
double haar_angle_quantile(double u);

/// Z_i = eps_i X_i.
std::vector<sphere::SpherePoint> act(std::span<const sphere::RotationZYZ> rotations,
                                     std::span<const sphere::SpherePoint> points);

/// n^{-1} sum_i conj(Y_l^m(Z_i)) for l <= l_max.
sphere::SphericalCoeffs empirical_coeffs(std::span<const sphere::SpherePoint> points, int l_max);

}  // namespace bsvd
