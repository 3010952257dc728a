#include "bsvd/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace bsvd::sphere {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) {
  double w = std::fmod(a, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

double parity(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

void require_degree(int l, int m) {
  if (l < 0 || std::abs(m) > l)
    throw DomainError("harmonic index (l=" + std::to_string(l) + ", m=" + std::to_string(m) +
                      ") out of range");
}

void require_spherical(const BlockStructure& s, const char* what) {
  if (s.kind() != BlockKind::Spherical)
    throw ShapeError(std::string(what) + ": expected spherical block structure");
}

// d^j_{j0 ...} seed at j = max(|m|, |n|), from the single-term Wigner sum.
double little_d_seed(int m, int n, double theta) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  auto top = [&](int j, int k) {  // d^j_{j,k}
    const double lognorm = 0.5 * (std::lgamma(2.0 * j + 1) - std::lgamma(j + k + 1.0) - std::lgamma(j - k + 1.0));
    return parity(j - k) * std::exp(lognorm) * std::pow(c, j + k) * std::pow(s, j - k);
  };
  auto bottom = [&](int j, int k) {  // d^j_{-j,k}
    const double lognorm = 0.5 * (std::lgamma(2.0 * j + 1) - std::lgamma(j + k + 1.0) - std::lgamma(j - k + 1.0));
    return std::exp(lognorm) * std::pow(c, j - k) * std::pow(s, j + k);
  };
  if (std::abs(m) >= std::abs(n)) {
    const int j = std::abs(m);
    return m >= 0 ? top(j, n) : bottom(j, n);
  }
  // d_{mn} = (-1)^{m-n} d_{nm}
  const int j = std::abs(n);
  return parity(m - n) * (n >= 0 ? top(j, m) : bottom(j, m));
}

// Runs the l-recurrence for fixed (m, n) and calls sink(l, d^l_{mn}) for l = j0..l_max.
template <typename Sink> void little_d_sweep(int m, int n, int l_max, double theta, Sink sink) {
  const int j0 = std::max(std::abs(m), std::abs(n));
  if (j0 > l_max) return;
  const double cb = std::cos(theta);
  double prev = 0.0;
  double cur = little_d_seed(m, n, theta);
  sink(j0, cur);
  for (int j = j0; j < l_max; ++j) {
    double next;
    if (j == 0) {
      next = cb;  // d^1_{00}
    } else {
      const double jj = j;
      const double a = (2.0 * jj + 1.0) * (jj * (jj + 1.0) * cb - static_cast<double>(m) * n);
      const double b = (jj + 1.0) * std::sqrt((jj * jj - m * m) * (jj * jj - n * n));
      const double denom = jj * std::sqrt(((jj + 1) * (jj + 1) - m * m) * ((jj + 1) * (jj + 1) - n * n));
      next = (a * cur - b * prev) / denom;
    }
    prev = cur;
    cur = next;
    sink(j + 1, cur);
  }
}

}  // namespace

// ---------------------------------------------------------------------------

Eigen::Vector3d SpherePoint::direction() const {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

SpherePoint SpherePoint::from_direction(const Eigen::Vector3d& w) {
  const double norm = w.norm();
  if (!(norm > 0.0)) throw DomainError("from_direction: zero vector");
  const Eigen::Vector3d u = w / norm;
  return {std::atan2(std::hypot(u.x(), u.y()), u.z()), wrap_angle(std::atan2(u.y(), u.x()))};
}

namespace {

Eigen::Matrix3d rot_z(double a) {
  Eigen::Matrix3d r;
  r << std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a), 0, 0, 0, 1;
  return r;
}

Eigen::Matrix3d rot_y(double a) {
  Eigen::Matrix3d r;
  r << std::cos(a), 0, std::sin(a), 0, 1, 0, -std::sin(a), 0, std::cos(a);
  return r;
}

}  // namespace

Eigen::Matrix3d RotationZYZ::matrix() const { return rot_z(phi) * rot_y(theta) * rot_z(psi); }

RotationZYZ RotationZYZ::from_matrix(const Eigen::Matrix3d& r) {
  const double st = std::hypot(r(0, 2), r(1, 2));
  const double theta = std::atan2(st, r(2, 2));
  if (st > 1e-12) {
    return {wrap_angle(std::atan2(r(1, 2), r(0, 2))), theta, wrap_angle(std::atan2(r(2, 1), -r(2, 0)))};
  }
  // Gimbal lock: only phi +/- psi is determined; put it all in phi.
  if (r(2, 2) > 0.0) return {wrap_angle(std::atan2(r(1, 0), r(0, 0))), 0.0, 0.0};
  return {wrap_angle(std::atan2(-r(1, 0), r(1, 1))), kPi, 0.0};
}

RotationZYZ RotationZYZ::inverse() const { return from_matrix(matrix().transpose()); }

RotationZYZ compose(const RotationZYZ& a, const RotationZYZ& b) {
  return RotationZYZ::from_matrix(a.matrix() * b.matrix());
}

SpherePoint rotate(const RotationZYZ& r, const SpherePoint& p) {
  return SpherePoint::from_direction(r.matrix() * p.direction());
}

SphericalCoeffs zero_coeffs(int l_max) {
  if (l_max < 0) throw RangeError("l_max must be >= 0");
  return SphericalCoeffs(BlockStructure::spherical(l_max + 1));
}

int max_degree(const SphericalCoeffs& f) {
  require_spherical(f.structure(), "max_degree");
  return f.levels() - 1;
}

// ---------------------------------------------------------------------------

double assoc_legendre(int l, int m, double x) {
  require_degree(l, m);
  if (x < -1.0 || x > 1.0) throw DomainError("assoc_legendre: x outside [-1, 1]");
  if (m < 0) {
    const int k = -m;
    // (l-k)!/(l+k)!
    const double ratio = std::exp(std::lgamma(l - k + 1.0) - std::lgamma(l + k + 1.0));
    return parity(k) * ratio * assoc_legendre(l, k, x);
  }
  const double s = std::sqrt((1.0 - x) * (1.0 + x));
  double pmm = 1.0;
  for (int i = 1; i <= m; ++i) pmm *= -(2.0 * i - 1.0) * s;
  if (l == m) return pmm;
  double pm1 = x * (2.0 * m + 1.0) * pmm;
  if (l == m + 1) return pm1;
  double pl = 0.0;
  for (int ll = m + 2; ll <= l; ++ll) {
    pl = ((2.0 * ll - 1.0) * x * pm1 - (ll + m - 1.0) * pmm) / (ll - m);
    pmm = pm1;
    pm1 = pl;
  }
  return pl;
}

Eigen::MatrixXd normalized_legendre_table(int l_max, double x) {
  if (l_max < 0) throw RangeError("l_max must be >= 0");
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(l_max + 1, l_max + 1);
  const double s = std::sqrt(std::max(0.0, (1.0 - x) * (1.0 + x)));
  p(0, 0) = 1.0;
  for (int m = 1; m <= l_max; ++m) p(m, m) = -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s * p(m - 1, m - 1);
  for (int m = 0; m < l_max; ++m) p(m + 1, m) = std::sqrt(2.0 * m + 3.0) * x * p(m, m);
  for (int m = 0; m <= l_max; ++m) {
    for (int l = m + 2; l <= l_max; ++l) {
      const double ll = l;
      const double a = std::sqrt((4.0 * ll * ll - 1.0) / (ll * ll - m * m));
      const double b = std::sqrt(((ll - 1.0) * (ll - 1.0) - m * m) / (4.0 * (ll - 1.0) * (ll - 1.0) - 1.0));
      p(l, m) = a * (x * p(l - 1, m) - b * p(l - 2, m));
    }
  }
  return p;
}

cdouble spherical_harmonic(int l, int m, const SpherePoint& p) {
  require_degree(l, m);
  const auto table = normalized_legendre_table(l, std::cos(p.theta));
  const int am = std::abs(m);
  double value = table(l, am);
  if (m < 0) value *= parity(am);
  return value * std::polar(1.0, m * p.phi);
}

Eigen::VectorXcd spherical_harmonics(int l_max, const SpherePoint& p) {
  const auto table = normalized_legendre_table(l_max, std::cos(p.theta));
  Eigen::VectorXcd out((l_max + 1) * (l_max + 1));
  std::vector<cdouble> phase(l_max + 1);
  for (int m = 0; m <= l_max; ++m) phase[m] = std::polar(1.0, m * p.phi);
  Eigen::Index pos = 0;
  for (int l = 0; l <= l_max; ++l) {
    for (int m = -l; m <= l; ++m) {
      const int am = std::abs(m);
      const cdouble e = m >= 0 ? phase[am] : std::conj(phase[am]);
      out(pos++) = (m < 0 ? parity(am) : 1.0) * table(l, am) * e;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

double wigner_d(int l, int m, int n, double theta) {
  require_degree(l, m);
  require_degree(l, n);
  double out = 0.0;
  little_d_sweep(m, n, l, theta, [&](int j, double v) {
    if (j == l) out = v;
  });
  return out;
}

std::vector<Eigen::MatrixXd> wigner_d_blocks(int l_max, double theta) {
  if (l_max < 0) throw RangeError("l_max must be >= 0");
  std::vector<Eigen::MatrixXd> blocks;
  blocks.reserve(l_max + 1);
  for (int l = 0; l <= l_max; ++l) blocks.push_back(Eigen::MatrixXd::Zero(2 * l + 1, 2 * l + 1));
  for (int m = -l_max; m <= l_max; ++m)
    for (int n = -l_max; n <= l_max; ++n)
      little_d_sweep(m, n, l_max, theta, [&](int j, double v) { blocks[j](m + j, n + j) = v; });
  return blocks;
}

cdouble wigner_D(int l, int m, int n, const RotationZYZ& r) {
  return std::polar(1.0, -(m * r.phi + n * r.psi)) * wigner_d(l, m, n, r.theta);
}

Eigen::MatrixXcd wigner_D_block(int l, const RotationZYZ& r) {
  if (l < 0) throw DomainError("wigner_D_block: negative degree");
  const auto d = wigner_d_blocks(l, r.theta)[l];
  Eigen::MatrixXcd out(2 * l + 1, 2 * l + 1);
  for (int m = -l; m <= l; ++m)
    for (int n = -l; n <= l; ++n)
      out(m + l, n + l) = std::polar(1.0, -(m * r.phi + n * r.psi)) * d(m + l, n + l);
  return out;
}

SphericalCoeffs rotate(const SphericalCoeffs& f, const RotationZYZ& r) {
  require_spherical(f.structure(), "rotate");
  const int l_max = max_degree(f);
  const auto d = wigner_d_blocks(l_max, r.theta);
  std::vector<Eigen::VectorXcd> out;
  out.reserve(f.levels());
  for (int l = 0; l <= l_max; ++l) {
    Eigen::MatrixXcd D(2 * l + 1, 2 * l + 1);
    for (int m = -l; m <= l; ++m)
      for (int n = -l; n <= l; ++n)
        D(m + l, n + l) = std::polar(1.0, -(m * r.phi + n * r.psi)) * d[l](m + l, n + l);
    out.push_back(D * f.block(level_of_degree(l)));
  }
  return SphericalCoeffs(f.structure(), std::move(out));
}

// ---------------------------------------------------------------------------

SphericalCoeffs convolve_blocks(const SO3BlockOperator& g_op, const SphericalCoeffs& f) {
  require_spherical(g_op.structure(), "convolve_blocks");
  require_spherical(f.structure(), "convolve_blocks");
  return apply_operator(g_op, f);
}

SO3BlockOperator ordinary_smooth_operator(int l_max, double nu) {
  if (l_max < 0) throw RangeError("l_max must be >= 0");
  if (!(nu >= 0.0)) throw DomainError("ordinary_smooth_operator: nu must be nonnegative");
  return SO3BlockOperator::scalar_blocks(BlockStructure::spherical(l_max + 1), [nu](int level) {
    const double l = degree_of_level(level);
    return std::pow(1.0 + l * (l + 1.0), -0.5 * nu);
  });
}

SO3BlockOperator laplace_operator(int l_max) {
  if (l_max < 0) throw RangeError("l_max must be >= 0");
  return SO3BlockOperator::scalar_blocks(BlockStructure::spherical(l_max + 1), [](int level) {
    const double l = degree_of_level(level);
    return 1.0 / (1.0 + l * (l + 1.0));
  });
}

SO3BlockOperator rotational_fourier(const std::function<double(const RotationZYZ&)>& g, int l_max,
                                    int theta_nodes, int angle_nodes) {
  if (l_max < 0) throw RangeError("l_max must be >= 0");
  if (theta_nodes < 1 || angle_nodes < 1) throw DomainError("rotational_fourier: need positive node counts");
  const auto gl = gauss_legendre(theta_nodes);
  std::vector<Eigen::MatrixXcd> acc;
  for (int l = 0; l <= l_max; ++l) acc.push_back(Eigen::MatrixXcd::Zero(2 * l + 1, 2 * l + 1));
  const double h = kTwoPi / angle_nodes;
  // Haar probability: (1 / 8 pi^2) d(phi) d(cos theta) d(psi)
  const double norm = h * h / (8.0 * kPi * kPi);
  for (int i = 0; i < theta_nodes; ++i) {
    const double theta = std::acos(gl.nodes[i]);
    const auto d = wigner_d_blocks(l_max, theta);
    for (int a = 0; a < angle_nodes; ++a) {
      for (int b = 0; b < angle_nodes; ++b) {
        const RotationZYZ r{a * h, theta, b * h};
        const double w = norm * gl.weights[i] * g(r);
        if (w == 0.0) continue;
        for (int l = 0; l <= l_max; ++l)
          for (int m = -l; m <= l; ++m)
            for (int n = -l; n <= l; ++n)
              acc[l](m + l, n + l) += w * std::polar(1.0, -(m * r.phi + n * r.psi)) * d[l](m + l, n + l);
      }
    }
  }
  return SO3BlockOperator(BlockStructure::spherical(l_max + 1), std::move(acc));
}

// ---------------------------------------------------------------------------

GaussLegendre gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: need at least one node");
  GaussLegendre rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  if (n == 1) {
    rule.weights[0] = 2.0;
    return rule;
  }
  // P_n(x) and P_n'(x) by the Bonnet recurrence
  auto legendre = [n](double x, double& deriv) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    deriv = n * (x * p1 - p0) / (x * x - 1.0);
    return p1;
  };
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      const double dx = legendre(x, dp) / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre(x, dp);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

SphereQuadrature sphere_quadrature(int theta_nodes, int phi_nodes) {
  if (theta_nodes < 1 || phi_nodes < 1) throw DomainError("sphere_quadrature: need positive node counts");
  const auto gl = gauss_legendre(theta_nodes);
  SphereQuadrature q;
  q.points.reserve(static_cast<std::size_t>(theta_nodes) * phi_nodes);
  for (int i = 0; i < theta_nodes; ++i) {
    const double theta = std::acos(gl.nodes[i]);
    for (int j = 0; j < phi_nodes; ++j) {
      q.points.push_back({theta, kTwoPi * j / phi_nodes});
      q.weights.push_back(0.5 * gl.weights[i] / phi_nodes);
    }
  }
  return q;
}

SphericalCoeffs analyze(const std::function<double(const SpherePoint&)>& f, int l_max, int theta_nodes,
                        int phi_nodes) {
  if (l_max < 0) throw RangeError("l_max must be >= 0");
  if (theta_nodes <= 0) theta_nodes = l_max + 1;
  if (phi_nodes <= 0) phi_nodes = 2 * l_max + 2;
  const auto q = sphere_quadrature(theta_nodes, phi_nodes);
  Eigen::VectorXcd acc = Eigen::VectorXcd::Zero((l_max + 1) * (l_max + 1));
  for (std::size_t i = 0; i < q.points.size(); ++i)
    acc += (q.weights[i] * f(q.points[i])) * spherical_harmonics(l_max, q.points[i]).conjugate();
  std::vector<Eigen::VectorXcd> blocks;
  Eigen::Index pos = 0;
  for (int l = 0; l <= l_max; ++l) {
    blocks.push_back(acc.segment(pos, 2 * l + 1));
    pos += 2 * l + 1;
  }
  return SphericalCoeffs(BlockStructure::spherical(l_max + 1), std::move(blocks));
}

std::vector<double> zonal_coefficients(const std::function<double(double)>& profile, int l_max, int nodes) {
  if (l_max < 0) throw RangeError("l_max must be >= 0");
  const auto gl = gauss_legendre(nodes);
  std::vector<double> c(l_max + 1, 0.0);
  for (int i = 0; i < nodes; ++i) {
    const double x = gl.nodes[i];
    const double w = 0.5 * gl.weights[i] * profile(x);
    // Legendre P_l(x) by the Bonnet recurrence
    double p0 = 1.0, p1 = x;
    for (int l = 0; l <= l_max; ++l) {
      double pl;
      if (l == 0) {
        pl = 1.0;
      } else if (l == 1) {
        pl = x;
      } else {
        pl = ((2.0 * l - 1.0) * x * p1 - (l - 1.0) * p0) / l;
        p0 = p1;
        p1 = pl;
      }
      c[l] += w * std::sqrt(2.0 * l + 1.0) * pl;
    }
  }
  return c;
}

std::vector<cdouble> synthesize_complex(const SphericalCoeffs& f, std::span<const SpherePoint> grid) {
  require_spherical(f.structure(), "synthesize");
  const int l_max = max_degree(f);
  const auto flat = f.flatten();
  std::vector<cdouble> out;
  out.reserve(grid.size());
  for (const auto& p : grid) out.push_back(spherical_harmonics(l_max, p).transpose() * flat);
  return out;
}

std::vector<double> synthesize(const SphericalCoeffs& f, std::span<const SpherePoint> grid) {
  const auto values = synthesize_complex(f, grid);
  const double tol = 1e-8 * std::max(1.0, f.flatten().cwiseAbs().sum());
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& v : values) {
    if (std::abs(v.imag()) > tol)
      throw SymmetryError("synthesize: imaginary residue " + std::to_string(std::abs(v.imag())) +
                          " exceeds tolerance; coefficients are not real-symmetric");
    out.push_back(v.real());
  }
  return out;
}

double real_symmetry_residue(const SphericalCoeffs& f) {
  require_spherical(f.structure(), "real_symmetry_residue");
  double worst = 0.0;
  for (int l = 0; l <= max_degree(f); ++l) {
    const auto& b = f.block(level_of_degree(l));
    for (int m = 0; m <= l; ++m)
      worst = std::max(worst, std::abs(b(l - m) - parity(m) * std::conj(b(l + m))));
  }
  return worst;
}

double l2_norm(const SphericalCoeffs& f) { return f.flatten().norm(); }

// ---------------------------------------------------------------------------

Eigen::Vector3d bump_center() { return {0.0, 1.0, 0.0}; }

double gaussian_bump(const SpherePoint& p) {
  return kBumpScale * std::exp(-kBumpConcentration * (p.direction() - bump_center()).squaredNorm());
}

SphericalCoeffs gaussian_bump_coeffs(int l_max) {
  if (l_max < 0) throw RangeError("l_max must be >= 0");
  // |w - e_z|^2 = 2 (1 - cos gamma)
  auto profile = [](double x) { return kBumpScale * std::exp(-2.0 * kBumpConcentration * (1.0 - x)); };
  int nodes = std::max(32, 2 * l_max + 16);
  auto zonal = zonal_coefficients(profile, l_max, nodes);
  bool converged = false;
  for (int attempt = 0; attempt < 6 && !converged; ++attempt) {
    nodes *= 2;
    auto refined = zonal_coefficients(profile, l_max, nodes);
    double change = 0.0;
    for (int l = 0; l <= l_max; ++l) change = std::max(change, std::abs(refined[l] - zonal[l]));
    zonal = std::move(refined);
    converged = change <= 1e-10;
  }
  if (!converged) throw AccuracyError("gaussian_bump_coeffs: quadrature did not converge");

  // u(pi/2) a(pi/2) maps e_z onto (0, 1, 0).
  const RotationZYZ to_center{0.5 * kPi, 0.5 * kPi, 0.0};
  const auto d = wigner_d_blocks(l_max, to_center.theta);
  std::vector<Eigen::VectorXcd> blocks;
  for (int l = 0; l <= l_max; ++l) {
    Eigen::VectorXcd b(2 * l + 1);
    for (int m = -l; m <= l; ++m)
      b(m + l) = std::polar(1.0, -m * to_center.phi) * d[l](m + l, l) * zonal[l];
    blocks.push_back(std::move(b));
  }
  return SphericalCoeffs(BlockStructure::spherical(l_max + 1), std::move(blocks));
}

SphericalCoeffs bump_density_coeffs(int l_max) {
  return cdouble(4.0 * kPi) * gaussian_bump_coeffs(l_max);
}

}  // namespace bsvd::sphere
