#pragma once

// Independent references for the spherical harmonic-analysis code. Nothing
// here goes through Wigner-D blocks or the Legendre recurrences under test.

#include <cmath>
#include <functional>
#include <numbers>

#include "bsvd/sphere.hpp"

namespace oracle {

inline double factorial(int n) { return std::tgamma(n + 1.0); }

/// Wigner's explicit sum for d^l_{mn}(beta), in the convention
/// d^l_{mn} = <lm| exp(-i beta J_y) |ln>.
inline double wigner_d_sum(int l, int m, int n, double beta) {
  const double c = std::cos(beta / 2), s = std::sin(beta / 2);
  const double pref = std::sqrt(factorial(l + m) * factorial(l - m) * factorial(l + n) * factorial(l - n));
  double acc = 0.0;
  for (int k = std::max(0, n - m); k <= std::min(l + n, l - m); ++k) {
    const double denom = factorial(l + n - k) * factorial(k) * factorial(m - n + k) * factorial(l - m - k);
    const double sign = ((m - n + k) % 2 == 0) ? 1.0 : -1.0;
    acc += sign / denom * std::pow(c, 2 * l + n - m - 2 * k) * std::pow(s, m - n + 2 * k);
  }
  return pref * acc;
}

/// h(w) = int g(r) f(r^{-1} w) dr over Haar probability measure, by Gauss-Legendre
/// in cos(theta) and trapezoid rules in phi, psi; r^{-1} w is formed with 3x3 matrices.
inline double haar_convolution(const std::function<double(const bsvd::sphere::RotationZYZ&)>& g,
                               const std::function<double(const Eigen::Vector3d&)>& f, const Eigen::Vector3d& w,
                               int theta_nodes, int angle_nodes) {
  const auto gl = bsvd::sphere::gauss_legendre(theta_nodes);
  const double h = 2.0 * std::numbers::pi / angle_nodes;
  double acc = 0.0;
  for (int i = 0; i < theta_nodes; ++i)
    for (int a = 0; a < angle_nodes; ++a)
      for (int b = 0; b < angle_nodes; ++b) {
        const bsvd::sphere::RotationZYZ r{a * h, std::acos(gl.nodes[i]), b * h};
        acc += gl.weights[i] * g(r) * f(r.matrix().transpose() * w);
      }
  return acc * h * h / (8.0 * std::numbers::pi * std::numbers::pi);
}

}  // namespace oracle
