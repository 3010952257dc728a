#include "bsvd/random.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "bsvd/torus.hpp"

namespace bsvd {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(const SeedSpec& seed, Stream stream) {
  std::uint64_t h = splitmix64(seed.master_seed);
  h = splitmix64(h ^ seed.replicate_index);
  return splitmix64(h ^ static_cast<std::uint64_t>(stream));
}

std::mt19937_64 make_engine(const SeedSpec& seed, Stream stream) {
  const std::uint64_t s = derive_seed(seed, stream);
  std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
  return std::mt19937_64(seq);
}

namespace {

void require_circular_for_real(const BlockStructure& s) {
  if (s.kind() != BlockKind::Circular)
    throw ConfigError("real noise mode needs a circular block structure");
}

MatrixX<double> draw_matrix(std::mt19937_64& rng, int size, NoiseMode mode) {
  if (mode == NoiseMode::Complex) {
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    MatrixX<double> b(size, size);
    for (int j = 0; j < size; ++j)
      for (int i = 0; i < size; ++i) {
        const double re = g(rng);
        const double im = g(rng);
        b(i, j) = {re, im};
      }
    return b;
  }
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd real(size, size);
  for (int j = 0; j < size; ++j)
    for (int i = 0; i < size; ++i) real(i, j) = g(rng);
  const auto u = torus::real_representation(size);
  return u.adjoint() * real.cast<cdouble>() * u;
}

VectorX<double> draw_vector(std::mt19937_64& rng, int size, NoiseMode mode) {
  if (mode == NoiseMode::Complex) {
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    VectorX<double> v(size);
    for (int i = 0; i < size; ++i) {
      const double re = g(rng);
      const double im = g(rng);
      v(i) = {re, im};
    }
    return v;
  }
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXd real(size);
  for (int i = 0; i < size; ++i) real(i) = g(rng);
  return torus::real_representation(size).adjoint() * real.cast<cdouble>();
}

}  // namespace

BlockOperator<double> perturb_operator(const BlockOperator<double>& K, double delta, const SeedSpec& seed,
                                       NoiseMode mode) {
  if (!(delta >= 0.0)) throw DomainError("perturb_operator: delta must be nonnegative");
  if (delta == 0.0) return K;
  if (mode == NoiseMode::Real) require_circular_for_real(K.structure());
  auto rng = make_engine(seed, Stream::Operator);
  std::vector<MatrixX<double>> blocks;
  blocks.reserve(K.levels());
  for (int l = 1; l <= K.levels(); ++l) {
    const int size = K.structure().block_size(l);
    blocks.push_back(K.block(l) + delta * draw_matrix(rng, size, mode));
  }
  return BlockOperator<double>(K.structure(), std::move(blocks));
}

BlockCoefficients<double> observe_signal(const BlockOperator<double>& K, const BlockCoefficients<double>& f,
                                         double n, const SeedSpec& seed, NoiseMode mode) {
  if (!(n > 0.0)) throw DomainError("observe_signal: n must be positive");
  auto clean = apply_operator(K, f);
  if (std::isinf(n)) return clean;
  if (mode == NoiseMode::Real) require_circular_for_real(f.structure());
  auto rng = make_engine(seed, Stream::Signal);
  const double scale = 1.0 / std::sqrt(n);
  std::vector<VectorX<double>> blocks;
  blocks.reserve(f.levels());
  for (int l = 1; l <= f.levels(); ++l) {
    const int size = f.structure().block_size(l);
    blocks.push_back(clean.block(l) + scale * draw_vector(rng, size, mode));
  }
  return BlockCoefficients<double>(f.structure(), std::move(blocks));
}

ConcentrationSummary concentration_diag(int size, int trials, std::uint64_t master_seed, int threads) {
  if (size < 1) throw DomainError("concentration_diag: size must be >= 1");
  if (trials < 1) throw DomainError("concentration_diag: trials must be >= 1");
  threads = std::max(1, threads);

  std::vector<double> op(trials), vec(trials);
  const double scale = 1.0 / std::sqrt(static_cast<double>(size));
  auto run = [&](int begin, int end) {
    for (int t = begin; t < end; ++t) {
      auto rng = make_engine({master_seed, static_cast<std::uint64_t>(t)}, Stream::Diagnostics);
      std::normal_distribution<double> g(0.0, 1.0);
      Eigen::MatrixXd b(size, size);
      for (int j = 0; j < size; ++j)
        for (int i = 0; i < size; ++i) b(i, j) = g(rng);
      Eigen::VectorXd eta(size);
      for (int i = 0; i < size; ++i) eta(i) = g(rng);
      // Largest eigenvalue of B^T B is ||B||_op^2.
      double op_norm;
      if (size == 1) {
        op_norm = std::abs(b(0, 0));
      } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b.transpose() * b, Eigen::EigenvaluesOnly);
        op_norm = std::sqrt(std::max(0.0, es.eigenvalues()(size - 1)));
      }
      op[t] = scale * op_norm;
      vec[t] = scale * eta.norm();
    }
  };
  std::vector<std::thread> pool;
  const int chunk = (trials + threads - 1) / threads;
  for (int w = 0; w < threads; ++w) {
    const int begin = w * chunk;
    const int end = std::min(trials, begin + chunk);
    if (begin < end) pool.emplace_back(run, begin, end);
  }
  for (auto& t : pool) t.join();

  ConcentrationSummary s;
  s.size = size;
  s.trials = trials;
  auto moments = [trials](const std::vector<double>& x, double& mean, double& sd) {
    mean = 0.0;
    for (double v : x) mean += v;
    mean /= trials;
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    sd = trials > 1 ? std::sqrt(ss / (trials - 1)) : 0.0;
  };
  moments(op, s.mean_op_norm_scaled, s.std_op_norm_scaled);
  moments(vec, s.mean_vec_norm_scaled, s.std_vec_norm_scaled);
  s.betas = {2.5, 3.0, 4.0};
  for (double beta : s.betas) {
    const auto over_op = std::count_if(op.begin(), op.end(), [beta](double v) { return v >= beta; });
    const auto over_vec = std::count_if(vec.begin(), vec.end(), [beta](double v) { return v >= beta; });
    s.op_exceedance.push_back(static_cast<double>(over_op) / trials);
    s.vec_exceedance.push_back(static_cast<double>(over_vec) / trials);
  }
  return s;
}

}  // namespace bsvd
