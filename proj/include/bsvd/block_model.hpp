#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bsvd/block_linalg.hpp"
#include "bsvd/types.hpp"

namespace bsvd {

enum class BlockKind { Circular, Spherical, Custom };

std::string to_string(BlockKind kind);
BlockKind block_kind_from_string(const std::string& name);

/// Partition of the index set into levels 1..max_level.
///
/// Levels are 1-based everywhere. For the sphere, level l+1 holds spherical
/// degree l (size 2l+1). For the d-torus, level 1+|k_1|+...+|k_d| holds the
/// Fourier index k.
class BlockStructure {
 public:
  static BlockStructure circular(int d, int max_level);
  static BlockStructure spherical(int max_level);
  static BlockStructure custom(std::vector<int> sizes, int d = 1);

  BlockKind kind() const noexcept { return kind_; }
  int dimension() const noexcept { return d_; }
  int max_level() const noexcept { return static_cast<int>(sizes_.size()); }

  /// Throws RangeError outside 1..max_level.
  int block_size(int level) const;

  /// Sum of block sizes over levels 1..upto (all levels by default).
  std::int64_t total_size(int upto = -1) const;

  /// Same kind, fewer or more levels. Custom structures can only shrink.
  BlockStructure with_max_level(int max_level) const;

  bool operator==(const BlockStructure& other) const = default;

 private:
  BlockStructure(BlockKind kind, int d, std::vector<int> sizes)
      : kind_(kind), d_(d), sizes_(std::move(sizes)) {}

  BlockKind kind_ = BlockKind::Custom;
  int d_ = 1;
  std::vector<int> sizes_;
};

inline int block_size(const BlockStructure& structure, int level) {
  return structure.block_size(level);
}

/// Number of k in Z^d with |k_1|+...+|k_d| = radius (exact integer count).
std::int64_t lattice_sphere_count(int d, int radius);

namespace detail {

template <typename Derived> bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const auto v = m(i, j);
      if (!std::isfinite(std::real(v)) || !std::isfinite(std::imag(v))) return false;
    }
  return true;
}

inline void require_level(int level, int stored) {
  if (level < 1 || level > stored)
    throw RangeError("block level " + std::to_string(level) + " outside 1.." +
                     std::to_string(stored));
}

}  // namespace detail

/// Signal coordinates grouped by level: blocks[l-1] has length |Lambda_l|.
template <typename Real = double> class BlockCoefficients {
 public:
  using Scalar = Complex<Real>;
  using Vector = VectorX<Real>;

  BlockCoefficients() = default;

  /// All-zero coefficients on every level of the structure.
  explicit BlockCoefficients(BlockStructure structure) : structure_(std::move(structure)) {
    blocks_.reserve(structure_.max_level());
    for (int l = 1; l <= structure_.max_level(); ++l)
      blocks_.push_back(Vector::Zero(structure_.block_size(l)));
  }

  BlockCoefficients(BlockStructure structure, std::vector<Vector> blocks)
      : structure_(std::move(structure)), blocks_(std::move(blocks)) {
    if (static_cast<int>(blocks_.size()) != structure_.max_level())
      throw ShapeError("coefficient block count " + std::to_string(blocks_.size()) +
                       " does not match structure with " +
                       std::to_string(structure_.max_level()) + " levels");
    for (int l = 1; l <= levels(); ++l) check_block(l, blocks_[l - 1]);
  }

  const BlockStructure& structure() const noexcept { return structure_; }
  int levels() const noexcept { return static_cast<int>(blocks_.size()); }

  const Vector& block(int level) const {
    detail::require_level(level, levels());
    return blocks_[level - 1];
  }

  void set_block(int level, Vector values) {
    detail::require_level(level, levels());
    check_block(level, values);
    blocks_[level - 1] = std::move(values);
  }

  const std::vector<Vector>& blocks() const noexcept { return blocks_; }

  /// Concatenation of all blocks in level order.
  Vector flatten() const {
    Vector out(structure_.total_size());
    Eigen::Index pos = 0;
    for (const auto& b : blocks_) {
      out.segment(pos, b.size()) = b;
      pos += b.size();
    }
    return out;
  }

  template <typename Other> BlockCoefficients<Other> cast() const {
    std::vector<VectorX<Other>> out;
    out.reserve(blocks_.size());
    for (const auto& b : blocks_) out.push_back(b.template cast<Complex<Other>>());
    return BlockCoefficients<Other>(structure_, std::move(out));
  }

 private:
  void check_block(int level, const Vector& v) const {
    if (v.size() != structure_.block_size(level))
      throw ShapeError("block " + std::to_string(level) + " has length " +
                       std::to_string(v.size()) + ", expected " +
                       std::to_string(structure_.block_size(level)));
    if (!detail::all_finite(v))
      throw DomainError("non-finite coefficient in block " + std::to_string(level));
  }

  BlockStructure structure_ = BlockStructure::custom({1});
  std::vector<Vector> blocks_;
};

/// Block-diagonal operator: blocks[l-1] is the |Lambda_l| x |Lambda_l| Galerkin matrix.
template <typename Real = double> class BlockOperator {
 public:
  using Scalar = Complex<Real>;
  using Matrix = MatrixX<Real>;

  BlockOperator() = default;

  BlockOperator(BlockStructure structure, std::vector<Matrix> blocks)
      : structure_(std::move(structure)), blocks_(std::move(blocks)) {
    if (static_cast<int>(blocks_.size()) != structure_.max_level())
      throw ShapeError("operator block count " + std::to_string(blocks_.size()) +
                       " does not match structure with " +
                       std::to_string(structure_.max_level()) + " levels");
    for (int l = 1; l <= levels(); ++l) check_block(l, blocks_[l - 1]);
  }

  static BlockOperator identity(const BlockStructure& structure) {
    std::vector<Matrix> blocks;
    for (int l = 1; l <= structure.max_level(); ++l) {
      const int n = structure.block_size(l);
      blocks.push_back(Matrix::Identity(n, n));
    }
    return BlockOperator(structure, std::move(blocks));
  }

  /// Operator with blocks value(l) * I.
  template <typename Fn> static BlockOperator scalar_blocks(const BlockStructure& structure, Fn value) {
    std::vector<Matrix> blocks;
    for (int l = 1; l <= structure.max_level(); ++l) {
      const int n = structure.block_size(l);
      blocks.push_back(Matrix::Identity(n, n) * Scalar(value(l)));
    }
    return BlockOperator(structure, std::move(blocks));
  }

  const BlockStructure& structure() const noexcept { return structure_; }
  int levels() const noexcept { return static_cast<int>(blocks_.size()); }

  const Matrix& block(int level) const {
    detail::require_level(level, levels());
    return blocks_[level - 1];
  }

  void set_block(int level, Matrix values) {
    detail::require_level(level, levels());
    check_block(level, values);
    blocks_[level - 1] = std::move(values);
  }

  const std::vector<Matrix>& blocks() const noexcept { return blocks_; }

 private:
  void check_block(int level, const Matrix& m) const {
    const int n = structure_.block_size(level);
    if (m.rows() != n || m.cols() != n)
      throw ShapeError("operator block " + std::to_string(level) + " is " +
                       std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                       ", expected " + std::to_string(n) + "x" + std::to_string(n));
    if (!detail::all_finite(m))
      throw DomainError("non-finite operator entry in block " + std::to_string(level));
  }

  BlockStructure structure_ = BlockStructure::custom({1});
  std::vector<Matrix> blocks_;
};

/// Sobolev ball W^s(M).
struct SmoothnessClass {
  double s = 0.0;
  double radius = 1.0;

  SmoothnessClass(double s_, double radius_) : s(s_), radius(radius_) {
    if (!(s >= 0.0) || !(radius > 0.0))
      throw DomainError("smoothness class needs s >= 0 and M > 0");
  }

  template <typename Real> bool contains(const BlockCoefficients<Real>& f) const;
};

/// Degree of ill-posedness nu with mapping constants Q1, Q2.
struct IllPosedness {
  double nu = 0.0;
  double q1 = 1.0;
  double q2 = 1.0;

  IllPosedness(double nu_, double q1_, double q2_) : nu(nu_), q1(q1_), q2(q2_) {
    if (!(nu >= 0.0) || !(q1 > 0.0) || !(q1 * q2 >= 1.0))
      throw DomainError("ill-posedness class needs nu >= 0, Q1 > 0 and Q1*Q2 >= 1");
  }
};

// ---------------------------------------------------------------------------
// Free functions

/// (sum_l l^{2s} ||f_l||^2)^{1/2} over the stored levels.
template <typename Real> Real sobolev_norm(const BlockCoefficients<Real>& f, Real s) {
  Real acc = 0;
  for (int l = 1; l <= f.levels(); ++l)
    acc += std::pow(static_cast<Real>(l), 2 * s) * f.block(l).squaredNorm();
  return std::sqrt(acc);
}

template <typename Real>
bool SmoothnessClass::contains(const BlockCoefficients<Real>& f) const {
  return sobolev_norm(f, static_cast<Real>(s)) <= static_cast<Real>(radius);
}

namespace detail {

inline void require_same_shape(const BlockStructure& a, int levels_a, const BlockStructure& b,
                               int levels_b, const char* what) {
  if (a.kind() != b.kind() || a.dimension() != b.dimension())
    throw ShapeError(std::string(what) + ": block structures differ");
  const int common = std::min(levels_a, levels_b);
  for (int l = 1; l <= common; ++l)
    if (a.block_size(l) != b.block_size(l))
      throw ShapeError(std::string(what) + ": block sizes differ at level " + std::to_string(l));
}

}  // namespace detail

/// Blockwise matrix-vector product. K must cover every level of f.
template <typename Real>
BlockCoefficients<Real> apply_operator(const BlockOperator<Real>& K, const BlockCoefficients<Real>& f) {
  detail::require_same_shape(K.structure(), K.levels(), f.structure(), f.levels(), "apply_operator");
  if (K.levels() < f.levels())
    throw ShapeError("apply_operator: operator has " + std::to_string(K.levels()) +
                     " levels, signal has " + std::to_string(f.levels()));
  std::vector<VectorX<Real>> out;
  out.reserve(f.levels());
  for (int l = 1; l <= f.levels(); ++l) out.push_back(K.block(l) * f.block(l));
  return BlockCoefficients<Real>(f.structure(), std::move(out));
}

template <typename Real>
BlockCoefficients<Real> operator*(const BlockOperator<Real>& K, const BlockCoefficients<Real>& f) {
  return apply_operator(K, f);
}

template <typename Real, typename Op>
BlockCoefficients<Real> blockwise(const BlockCoefficients<Real>& a, const BlockCoefficients<Real>& b, Op op) {
  detail::require_same_shape(a.structure(), a.levels(), b.structure(), b.levels(), "blockwise");
  if (a.levels() != b.levels()) throw ShapeError("blockwise: level counts differ");
  std::vector<VectorX<Real>> out;
  out.reserve(a.levels());
  for (int l = 1; l <= a.levels(); ++l) out.push_back(op(a.block(l), b.block(l)));
  return BlockCoefficients<Real>(a.structure(), std::move(out));
}

template <typename Real>
BlockCoefficients<Real> operator+(const BlockCoefficients<Real>& a, const BlockCoefficients<Real>& b) {
  return blockwise(a, b, [](const auto& x, const auto& y) -> VectorX<Real> { return x + y; });
}

template <typename Real>
BlockCoefficients<Real> operator-(const BlockCoefficients<Real>& a, const BlockCoefficients<Real>& b) {
  return blockwise(a, b, [](const auto& x, const auto& y) -> VectorX<Real> { return x - y; });
}

template <typename Real>
BlockCoefficients<Real> operator*(Complex<Real> c, const BlockCoefficients<Real>& a) {
  std::vector<VectorX<Real>> out;
  for (const auto& b : a.blocks()) out.push_back(c * b);
  return BlockCoefficients<Real>(a.structure(), std::move(out));
}

template <typename Real>
BlockOperator<Real> operator*(Complex<Real> c, const BlockOperator<Real>& K) {
  std::vector<MatrixX<Real>> out;
  for (const auto& b : K.blocks()) out.push_back(c * b);
  return BlockOperator<Real>(K.structure(), std::move(out));
}

/// Keep the first max_level levels.
template <typename Real>
BlockCoefficients<Real> truncate(const BlockCoefficients<Real>& f, int max_level) {
  const int keep = std::clamp(max_level, 1, f.levels());
  std::vector<VectorX<Real>> out(f.blocks().begin(), f.blocks().begin() + keep);
  return BlockCoefficients<Real>(f.structure().with_max_level(keep), std::move(out));
}

struct OperatorConstants {
  double q1 = 0.0;
  double q2 = 0.0;
};

/// Q1 = max_l l^{-nu} ||K_l^{-1}||, Q2 = max_l l^{nu} ||K_l||, over the stored levels only.
///
/// Throws SingularError naming the level when a block cannot be inverted.
template <typename Real> OperatorConstants operator_constants(const BlockOperator<Real>& K, double nu) {
  OperatorConstants c;
  for (int l = 1; l <= K.levels(); ++l) {
    Real inv_norm;
    try {
      inv_norm = inverse_norm(K.block(l));
    } catch (const SingularError&) {
      throw SingularError("operator block " + std::to_string(l) + " is singular", l);
    }
    const double w = std::pow(static_cast<double>(l), nu);
    c.q1 = std::max(c.q1, static_cast<double>(inv_norm) / w);
    c.q2 = std::max(c.q2, static_cast<double>(spectral_norm(K.block(l))) * w);
  }
  return c;
}

}  // namespace bsvd
