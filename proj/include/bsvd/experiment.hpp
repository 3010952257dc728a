#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bsvd/estimator.hpp"
#include "bsvd/random.hpp"

namespace bsvd {

/// d = 1 torus: f_k = (1 v |k|)^{-s_exponent}, K_k = (1 v |k|)^{-nu}, |k| <= k_max.
struct CircularPowerLaw {
  double s_exponent = 5.0;
  double nu = 1.0;
  int k_max = 1000;
};

/// Gaussian bump on S^2 blurred by the Laplace law (nu = 2, d = 2), degrees <= l_max.
struct SphericalLaplace {
  int l_max = 30;
};

using Problem = std::variant<CircularPowerLaw, SphericalLaplace>;

struct ExperimentConfig {
  Problem problem = CircularPowerLaw{};
  std::vector<double> delta_grid{0.0};
  double n = kInfinity;
  int replicates = 1;
  std::uint64_t master_seed = 0;
  int threads = 1;
  double lambda0 = 1.0;
  double mu0 = 1.0;
  std::optional<int> level_override;
  /// Defaults to Real for circular problems and Complex for the sphere.
  std::optional<NoiseMode> noise_mode;

  void validate() const;
};

/// True signal and operator of a problem, plus the estimator's (nu, d).
struct ProblemInstance {
  BlockCoefficients<double> f;
  BlockOperator<double> K;
  double nu = 0.0;
  double d = 1.0;
  NoiseMode mode = NoiseMode::Complex;
};

ProblemInstance build_problem(const ExperimentConfig& cfg);

EstimatorConfig estimator_config(const ExperimentConfig& cfg, const ProblemInstance& problem, double delta);

/// Raw squared error of one draw of (K_delta, z). Replicate r uses the same
/// seed at every delta, so curves over a grid share random numbers.
double run_replicate(const ExperimentConfig& cfg, double delta, const SeedSpec& seed);
double run_replicate(const ProblemInstance& problem, const ExperimentConfig& cfg, double delta,
                     const SeedSpec& seed);

struct RiskRow {
  double delta = 0.0;
  double mean = 0.0;
  double std = 0.0;  ///< across replicates (n - 1 denominator); 0 for one replicate
  int replicates = 0;
  double bias = 0.0;  ///< mean of sum ||f_l||^2 over levels the estimator zeroed (cap or gate)
};

struct RiskSummary {
  std::vector<RiskRow> rows;
  std::string normalization = "raw squared error";
};

/// Replicates run on cfg.threads workers; the reduction is ordered by
/// replicate index, so the summary is bitwise independent of the thread count.
RiskSummary monte_carlo(const ExperimentConfig& cfg);

/// mean_i / mean_0 for every row; throws DomainError if the first mean is not positive.
std::vector<double> ratios_to_first(const RiskSummary& summary);

struct RatePoint {
  double delta = 0.0;
  double risk = 0.0;
};

/// OLS slope of log(risk) on log(delta). Throws DomainError on nonpositive
/// values, fewer than two points or a degenerate delta set.
double rate_slope(const std::vector<RatePoint>& points);

std::vector<RatePoint> rate_points(const RiskSummary& summary);

/// n points from lo to hi, equally spaced in log.
std::vector<double> log_grid(double lo, double hi, int n);

/// The delta grid of the spherical table.
std::vector<double> sphere_table_deltas();

/// Spherical Laplace configuration of the table: n = 1e8, lambda0 = mu0 = 1.
ExperimentConfig sphere_table_config(int replicates, std::uint64_t master_seed, int threads = 1);

}  // namespace bsvd
