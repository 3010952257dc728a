#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace bsvd {

template <typename Real> using Complex = std::complex<Real>;
template <typename Real> using VectorX = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using MatrixX = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

using cdouble = Complex<double>;

// Error hierarchy. Every library failure derives from Error so the CLI can
// map categories onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Numerical accuracy failures: non-converged quadrature, symmetry residues,
// sampler efficiency.
class AccuracyError : public Error {
 public:
  using Error::Error;
};

class SymmetryError : public AccuracyError {
 public:
  using AccuracyError::AccuracyError;
};

class SingularError : public Error {
 public:
  explicit SingularError(const std::string& what, int level = 0) : Error(what), level_(level) {}

  /// Block level that failed, 0 when the matrix is not attached to a level.
  int level() const noexcept { return level_; }

 private:
  int level_;
};

}  // namespace bsvd
