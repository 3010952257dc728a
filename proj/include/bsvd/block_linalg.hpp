#pragma once

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "bsvd/types.hpp"

namespace bsvd {

/// Relative pivot size below which a block counts as numerically singular.
inline constexpr double kSingularPivotTolerance = 1e-14;

namespace detail {

template <typename Derived> void require_square(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw ShapeError(std::string(what) + ": expected a non-empty square matrix, got " +
                     std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

template <typename Derived>
auto singular_values(const Eigen::MatrixBase<Derived>& m) {
  using Plain = typename Derived::PlainObject;
  Eigen::JacobiSVD<Plain> svd(m.derived());
  return svd.singularValues().eval();
}

}  // namespace detail

/// Largest singular value.
template <typename Derived>
typename Derived::RealScalar spectral_norm(const Eigen::MatrixBase<Derived>& m) {
  detail::require_square(m, "spectral_norm");
  if (m.rows() == 1) return std::abs(m(0, 0));
  return detail::singular_values(m)(0);
}

/// Inverse by full-pivot LU.
///
/// Throws SingularError when the smallest pivot falls below
/// kSingularPivotTolerance * max_ij |m_ij|.
template <typename Derived>
typename Derived::PlainObject invert(const Eigen::MatrixBase<Derived>& m) {
  using Plain = typename Derived::PlainObject;
  using RealScalar = typename Derived::RealScalar;
  detail::require_square(m, "invert");
  const RealScalar scale = m.cwiseAbs().maxCoeff();
  if (!(scale > RealScalar(0))) throw SingularError("invert: zero matrix");
  Eigen::FullPivLU<Plain> lu(m.derived());
  const RealScalar min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(min_pivot >= RealScalar(kSingularPivotTolerance) * scale))
    throw SingularError("invert: pivot " + std::to_string(static_cast<double>(min_pivot)) +
                        " below tolerance");
  return lu.inverse();
}

/// ||m^{-1}||_op = 1 / sigma_min(m). Throws SingularError under the same rule as invert.
template <typename Derived>
typename Derived::RealScalar inverse_norm(const Eigen::MatrixBase<Derived>& m) {
  using RealScalar = typename Derived::RealScalar;
  detail::require_square(m, "inverse_norm");
  if (m.rows() == 1) {
    const RealScalar a = std::abs(m(0, 0));
    if (!(a > RealScalar(0))) throw SingularError("inverse_norm: zero matrix");
    return RealScalar(1) / a;
  }
  (void)invert(m);
  const auto sv = detail::singular_values(m);
  return RealScalar(1) / sv(sv.size() - 1);
}

}  // namespace bsvd
