#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bsvd/block_model.hpp"

namespace bsvd::sphere {

/// Point on S^2 by colatitude theta in [0, pi] and longitude phi in [0, 2pi).
struct SpherePoint {
  double theta = 0.0;
  double phi = 0.0;

  Eigen::Vector3d direction() const;
  static SpherePoint from_direction(const Eigen::Vector3d& w);
};

/// Rotation u(phi) a(theta) u(psi): z, then y, then z (active, right to left).
struct RotationZYZ {
  double phi = 0.0;
  double theta = 0.0;
  double psi = 0.0;

  Eigen::Matrix3d matrix() const;
  static RotationZYZ from_matrix(const Eigen::Matrix3d& r);
  RotationZYZ inverse() const;
};

/// a o b, i.e. the rotation with matrix a.matrix() * b.matrix().
RotationZYZ compose(const RotationZYZ& a, const RotationZYZ& b);

SpherePoint rotate(const RotationZYZ& r, const SpherePoint& p);

// Coefficients are stored in blocks of the spherical structure: degree l lives
// at level l + 1, entries ordered m = -l..l.
using SphericalCoeffs = BlockCoefficients<double>;
using SO3BlockOperator = BlockOperator<double>;

inline int level_of_degree(int l) { return l + 1; }
inline int degree_of_level(int level) { return level - 1; }

/// Coefficients of degree <= l_max, all zero.
SphericalCoeffs zero_coeffs(int l_max);

/// Highest stored degree.
int max_degree(const SphericalCoeffs& f);

// ---------------------------------------------------------------------------
// Legendre functions and spherical harmonics

/// Associated Legendre function P_l^m(x), Condon-Shortley phase included:
/// P_1^1(x) = -sqrt(1 - x^2). Negative m uses
/// P_l^{-m} = (-1)^m (l-m)!/(l+m)! P_l^m.
double assoc_legendre(int l, int m, double x);

/// Fully normalized sqrt((2l+1)(l-m)!/(l+m)!) P_l^m(x) for 0 <= m <= l <= l_max.
/// Row l, column m. Stable for large l.
Eigen::MatrixXd normalized_legendre_table(int l_max, double x);

/// Spherical harmonic orthonormal in L^2 of the uniform probability measure:
/// Y_l^m = sqrt((2l+1)(l-m)!/(l+m)!) P_l^m(cos theta) e^{i m phi}.
/// This is sqrt(4 pi) times the surface-measure normalization.
cdouble spherical_harmonic(int l, int m, const SpherePoint& p);

/// All Y_l^m for l <= l_max at one point, flattened in block order
/// (l = 0..l_max, m = -l..l).
Eigen::VectorXcd spherical_harmonics(int l_max, const SpherePoint& p);

// ---------------------------------------------------------------------------
// Rotational harmonics

/// Wigner little-d d^l_{mn}(theta), by three-term recurrence in l.
double wigner_d(int l, int m, int n, double theta);

/// Little-d matrices for every degree 0..l_max at one angle; entry (m+l, n+l).
std::vector<Eigen::MatrixXd> wigner_d_blocks(int l_max, double theta);

/// D^l_{mn}(phi, theta, psi) = e^{-i(m phi + n psi)} d^l_{mn}(theta).
cdouble wigner_D(int l, int m, int n, const RotationZYZ& r);

/// Full (2l+1)x(2l+1) block, entry (m+l, n+l). Unitary, and
/// wigner_D_block(l, a) * wigner_D_block(l, b) == wigner_D_block(l, compose(a, b)).
Eigen::MatrixXcd wigner_D_block(int l, const RotationZYZ& r);

/// Coefficients of w -> f(r^{-1} w).
SphericalCoeffs rotate(const SphericalCoeffs& f, const RotationZYZ& r);

// ---------------------------------------------------------------------------
// Convolution operators

/// Blockwise F(g * f)^l_m = sum_n F(g)^l_{mn} F(f)^l_n.
SphericalCoeffs convolve_blocks(const SO3BlockOperator& g_op, const SphericalCoeffs& f);

/// Laplace law on SO(3): degree-l block (1 + l(l+1))^{-1} I.
SO3BlockOperator laplace_operator(int l_max);

/// Degree-l block (1 + l(l+1))^{-nu/2} I. nu = 2 gives laplace_operator.
SO3BlockOperator ordinary_smooth_operator(int l_max, double nu);

/// F(g)^l_{mn} = int g(r) D^l_{mn}(r) dr over Haar probability measure, by
/// Gauss-Legendre in cos(theta) and trapezoid rules in phi, psi.
SO3BlockOperator rotational_fourier(const std::function<double(const RotationZYZ&)>& g, int l_max,
                                    int theta_nodes, int angle_nodes);

// ---------------------------------------------------------------------------
// Quadrature, analysis, synthesis

struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1].
GaussLegendre gauss_legendre(int n);

/// Gauss-Legendre (in cos theta) x uniform (in phi) product grid.
struct SphereQuadrature {
  std::vector<SpherePoint> points;
  std::vector<double> weights;  ///< sum to 1 (probability measure)
};

/// Exact for band-limited integrands of degree <= 2 * theta_nodes - 1 in
/// cos(theta) and |m| < phi_nodes.
SphereQuadrature sphere_quadrature(int theta_nodes, int phi_nodes);

/// Coefficients of f up to degree l_max by product quadrature; defaults are
/// exact for functions band-limited to l_max.
SphericalCoeffs analyze(const std::function<double(const SpherePoint&)>& f, int l_max,
                        int theta_nodes = 0, int phi_nodes = 0);

/// Coefficients c_l of the zonal function w -> profile(w . e_z) on Y_l^0,
/// for l = 0..l_max, by n-node Gauss-Legendre.
std::vector<double> zonal_coefficients(const std::function<double(double)>& profile, int l_max, int nodes);

/// Pointwise sum_{l,m} c_{l,m} Y_l^m (complex).
std::vector<cdouble> synthesize_complex(const SphericalCoeffs& f, std::span<const SpherePoint> grid);

/// Real synthesis. Throws SymmetryError when the imaginary residue exceeds
/// 1e-8 * max(1, sum |c|).
std::vector<double> synthesize(const SphericalCoeffs& f, std::span<const SpherePoint> grid);

/// max |c_{l,-m} - (-1)^m conj(c_{l,m})|: zero for real-valued functions.
double real_symmetry_residue(const SphericalCoeffs& f);

/// L^2(mu) norm from coefficients (Parseval).
double l2_norm(const SphericalCoeffs& f);

// ---------------------------------------------------------------------------
// Gaussian bump target C exp(-4 |w - w1|^2), w1 = (0, 1, 0), C = 1/0.7854

inline constexpr double kBumpScale = 1.0 / 0.7854;
inline constexpr double kBumpConcentration = 4.0;
Eigen::Vector3d bump_center();

double gaussian_bump(const SpherePoint& p);

/// Zonal coefficients about e_z by node-doubling Gauss-Legendre quadrature,
/// rotated onto w1 with Wigner-D blocks. Throws AccuracyError if doubling the
/// nodes still moves a coefficient by more than 1e-10.
SphericalCoeffs gaussian_bump_coeffs(int l_max);

/// The bump integrates to 1 against surface measure; as a density of the
/// uniform probability law mu it is 4 pi times larger. These are its
/// coefficients, the mean of empirical_coeffs for bump-distributed samples.
SphericalCoeffs bump_density_coeffs(int l_max);

}  // namespace bsvd::sphere
