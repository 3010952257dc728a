#include "bsvd/torus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace bsvd::torus {

int level_of(const FourierIndex& k) {
  int acc = 1;
  for (int v : k) acc += std::abs(v);
  return acc;
}

std::vector<std::vector<FourierIndex>> index_blocks(int d, int max_level) {
  if (d < 1) throw DomainError("index_blocks: d must be >= 1");
  if (max_level < 1) throw RangeError("index_blocks: max_level must be >= 1");
  std::vector<std::vector<FourierIndex>> levels(max_level);
  const int radius = max_level - 1;
  // Odometer over [-radius, radius]^d in lexicographic order, pruned by the l1 ball.
  FourierIndex k(d, -radius);
  while (true) {
    int l1 = 0;
    for (int v : k) l1 += std::abs(v);
    if (l1 <= radius) levels[l1].push_back(k);
    int pos = d - 1;
    while (pos >= 0 && k[pos] == radius) {
      k[pos] = -radius;
      --pos;
    }
    if (pos < 0) break;
    ++k[pos];
  }
  return levels;
}

double conjugate_symmetry_residue(const BlockCoefficients<double>& coeffs) {
  double worst = 0.0;
  for (int l = 1; l <= coeffs.levels(); ++l) {
    const auto& b = coeffs.block(l);
    const Eigen::Index n = b.size();
    for (Eigen::Index i = 0; i < n; ++i) worst = std::max(worst, std::abs(b(i) - std::conj(b(n - 1 - i))));
  }
  return worst;
}

TorusCoeffs make_torus_coeffs(BlockCoefficients<double> coeffs, bool real_valued) {
  if (coeffs.structure().kind() != BlockKind::Circular)
    throw ShapeError("make_torus_coeffs: expected circular block structure");
  if (real_valued && conjugate_symmetry_residue(coeffs) > 1e-10)
    throw SymmetryError("make_torus_coeffs: coefficients violate c_{-k} = conj(c_k)");
  TorusCoeffs out{std::move(coeffs), {}, real_valued};
  out.indices = index_blocks(out.coeffs.structure().dimension(), out.coeffs.levels());
  return out;
}

TorusCoeffs power_law_signal(double exponent, int k_max) {
  if (!(exponent > 0.0)) throw DomainError("power_law_signal: exponent must be positive");
  if (k_max < 0) throw RangeError("power_law_signal: k_max must be >= 0");
  const auto structure = BlockStructure::circular(1, k_max + 1);
  const auto indices = index_blocks(1, k_max + 1);
  std::vector<VectorX<double>> blocks;
  for (const auto& level : indices) {
    VectorX<double> b(level.size());
    for (std::size_t i = 0; i < level.size(); ++i)
      b(i) = std::pow(std::max(1.0, std::abs(static_cast<double>(level[i][0]))), -exponent);
    blocks.push_back(std::move(b));
  }
  return make_torus_coeffs(BlockCoefficients<double>(structure, std::move(blocks)), true);
}

BlockOperator<double> power_law_operator(double nu, int k_max) {
  if (!(nu >= 0.0)) throw DomainError("power_law_operator: nu must be nonnegative");
  if (k_max < 0) throw RangeError("power_law_operator: k_max must be >= 0");
  const auto structure = BlockStructure::circular(1, k_max + 1);
  const auto indices = index_blocks(1, k_max + 1);
  std::vector<MatrixX<double>> blocks;
  for (const auto& level : indices) {
    const auto n = static_cast<Eigen::Index>(level.size());
    MatrixX<double> m = MatrixX<double>::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      m(i, i) = std::pow(std::max(1.0, std::abs(static_cast<double>(level[i][0]))), -nu);
    blocks.push_back(std::move(m));
  }
  return BlockOperator<double>(structure, std::move(blocks));
}

std::vector<double> synthesize_1d(const TorusCoeffs& f, int grid_size) {
  if (f.dimension() != 1) throw ShapeError("synthesize_1d: only d = 1 is supported");
  if (grid_size < 1) throw RangeError("synthesize_1d: grid_size must be positive");
  if (!f.real_valued) throw SymmetryError("synthesize_1d: coefficients are not flagged real");
  const double tol = 1e-8 * std::max(1.0, f.coeffs.flatten().cwiseAbs().sum());
  std::vector<double> out(grid_size);
  for (int j = 0; j < grid_size; ++j) {
    const double x = static_cast<double>(j) / grid_size;
    cdouble acc = 0.0;
    for (int l = 1; l <= f.coeffs.levels(); ++l) {
      const auto& b = f.coeffs.block(l);
      for (Eigen::Index i = 0; i < b.size(); ++i) {
        // e^{2 pi i k x}; reduce k x mod 1 first to keep the phase accurate.
        const double t = std::fmod(static_cast<double>(f.indices[l - 1][i][0]) * x, 1.0);
        acc += b(i) * std::polar(1.0, 2.0 * std::numbers::pi * t);
      }
    }
    if (std::abs(acc.imag()) > tol)
      throw SymmetryError("synthesize_1d: imaginary residue " + std::to_string(std::abs(acc.imag())));
    out[j] = acc.real();
  }
  return out;
}

Eigen::MatrixXcd real_representation(int size) {
  if (size < 1) throw RangeError("real_representation: size must be positive");
  const double r = 1.0 / std::sqrt(2.0);
  const cdouble I(0.0, 1.0);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(size, size);
  for (int i = 0; i < size / 2; ++i) {
    const int j = size - 1 - i;
    u(i, i) = r;
    u(i, j) = r;
    u(j, i) = -I * r;
    u(j, j) = I * r;
  }
  if (size % 2 == 1) u(size / 2, size / 2) = 1.0;
  return u;
}

}  // namespace bsvd::torus
