#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "bsvd/block_model.hpp"

namespace bsvd {

/// Identifies one replicate's random substreams.
///
/// Every generator is derived from (master_seed, replicate_index, stream) by a
/// SplitMix64 mix, so replicates are independent of execution order and
/// thread count.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t replicate_index = 0;
};

/// Substream tags; distinct tags give statistically independent generators.
enum class Stream : std::uint64_t {
  Operator = 1,
  Signal = 2,
  Sphere = 3,
  Rotation = 4,
  Diagnostics = 5,
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(const SeedSpec& seed, Stream stream);
std::mt19937_64 make_engine(const SeedSpec& seed, Stream stream);

/// Complex: i.i.d. entries with independent N(0, 1/2) real and imaginary
/// parts. Real: the noise is real N(0, 1) in the cos/sin coordinates of each
/// circular level, which keeps real signals real. Both give unit variance per
/// entry.
enum class NoiseMode { Complex, Real };

/// K_l + delta * B_l with E|B_ij|^2 = 1, drawn level by level in order.
/// delta == 0 returns K unchanged.
BlockOperator<double> perturb_operator(const BlockOperator<double>& K, double delta, const SeedSpec& seed,
                                       NoiseMode mode = NoiseMode::Complex);

/// K_l f_l + n^{-1/2} eta_l with E||eta_l||^2 = |Lambda_l|. n infinite gives K f exactly.
BlockCoefficients<double> observe_signal(const BlockOperator<double>& K, const BlockCoefficients<double>& f,
                                         double n, const SeedSpec& seed, NoiseMode mode = NoiseMode::Complex);

struct ConcentrationSummary {
  int size = 0;
  int trials = 0;
  double mean_op_norm_scaled = 0.0;   ///< mean of size^{-1/2} ||B||_op
  double std_op_norm_scaled = 0.0;
  double mean_vec_norm_scaled = 0.0;  ///< mean of size^{-1/2} ||eta||
  double std_vec_norm_scaled = 0.0;
  std::vector<double> betas;
  std::vector<double> op_exceedance;   ///< P(size^{-1/2} ||B||_op >= beta)
  std::vector<double> vec_exceedance;  ///< P(size^{-1/2} ||eta|| >= beta)
};

/// Monte-Carlo summary of the scaled norms of real standard Gaussian
/// size x size matrices and size-vectors, with exceedance frequencies at
/// beta in {2.5, 3, 4}. Trials are split across `threads` workers; results do
/// not depend on the thread count.
ConcentrationSummary concentration_diag(int size, int trials, std::uint64_t master_seed, int threads = 1);

}  // namespace bsvd
