#pragma once

#include <random>

#include "bsvd/block_model.hpp"

namespace testutil {

inline Eigen::MatrixXcd random_matrix(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = {g(rng), g(rng)};
  return m;
}

inline Eigen::VectorXcd random_vector(std::mt19937_64& rng, int size) {
  return random_matrix(rng, size, 1);
}

inline bsvd::BlockCoefficients<double> random_coeffs(std::mt19937_64& rng, const bsvd::BlockStructure& s) {
  std::vector<Eigen::VectorXcd> blocks;
  for (int l = 1; l <= s.max_level(); ++l) blocks.push_back(random_vector(rng, s.block_size(l)));
  return {s, std::move(blocks)};
}

// Random blocks shifted by a multiple of the identity, so they are safely invertible.
inline bsvd::BlockOperator<double> random_operator(std::mt19937_64& rng, const bsvd::BlockStructure& s,
                                                   double shift = 0.0) {
  std::vector<Eigen::MatrixXcd> blocks;
  for (int l = 1; l <= s.max_level(); ++l) {
    const int n = s.block_size(l);
    blocks.push_back(random_matrix(rng, n, n) + shift * Eigen::MatrixXcd::Identity(n, n));
  }
  return {s, std::move(blocks)};
}

}  // namespace testutil
