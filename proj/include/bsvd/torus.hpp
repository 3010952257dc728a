#pragma once

#include <vector>

#include <Eigen/Dense>

#include "bsvd/block_model.hpp"

namespace bsvd::torus {

/// Frequency k in Z^d; its level is 1 + |k_1| + ... + |k_d|.
using FourierIndex = std::vector<int>;

int level_of(const FourierIndex& k);

/// Frequencies grouped by level 1..max_level, lexicographic within each level.
std::vector<std::vector<FourierIndex>> index_blocks(int d, int max_level);

/// Circular-structure coefficients together with the frequency of every entry.
struct TorusCoeffs {
  BlockCoefficients<double> coeffs;
  std::vector<std::vector<FourierIndex>> indices;
  bool real_valued = false;

  int dimension() const { return coeffs.structure().dimension(); }
};

/// Wraps coefficients of a circular structure; checks c_{-k} = conj(c_k) to
/// 1e-10 when real_valued is set (SymmetryError otherwise).
TorusCoeffs make_torus_coeffs(BlockCoefficients<double> coeffs, bool real_valued);

/// max_k |c_{-k} - conj(c_k)|.
double conjugate_symmetry_residue(const BlockCoefficients<double>& coeffs);

/// d = 1 signal with coefficient (1 v |k|)^{-exponent} for |k| <= k_max.
/// Levels 1..k_max+1. Real and even, so the k = 0 entry is 1.
TorusCoeffs power_law_signal(double exponent, int k_max);

/// Diagonal d = 1 operator with entry (1 v |k|)^{-nu} at frequency k.
BlockOperator<double> power_law_operator(double nu, int k_max);

/// f(x_j) at x_j = j / grid_size by direct summation. d = 1 only.
/// Throws SymmetryError if the imaginary residue exceeds 1e-8 * max(1, sum |c|).
std::vector<double> synthesize_1d(const TorusCoeffs& f, int grid_size);

/// Unitary U mapping a level's complex coordinates to real cos/sin
/// coordinates. Entry i pairs with entry size-1-i (its negated frequency,
/// since negation reverses lexicographic order); U c is real iff the pairs are
/// complex conjugates.
Eigen::MatrixXcd real_representation(int size);

}  // namespace bsvd::torus
