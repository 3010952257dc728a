#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "bsvd/block_linalg.hpp"
#include "bsvd/block_model.hpp"

namespace bsvd {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Tuning of the blockwise-SVD estimator.
///
/// `n == kInfinity` means the signal is observed without noise; `delta == 0`
/// means the operator is known exactly. Logarithms are natural.
struct EstimatorConfig {
  double delta = 0.0;
  double n = kInfinity;
  double nu = 0.0;
  double d = 1.0;
  double lambda0 = 1.0;
  double mu0 = 1.0;
  std::optional<int> level_override;

  void validate() const;
};

inline void EstimatorConfig::validate() const {
  if (!(delta >= 0.0) || !(delta < 1.0))
    throw ConfigError("delta must lie in [0, 1)");
  if (!(n > 0.0)) throw ConfigError("n must be positive (or infinite)");
  if (std::isfinite(n) && !(n > 1.0)) throw ConfigError("finite n must exceed 1 so that log n > 0");
  if (!(nu >= 0.0)) throw ConfigError("nu must be nonnegative");
  if (!(d >= 1.0)) throw ConfigError("d must be >= 1");
  if (!(lambda0 > 0.0)) throw ConfigError("lambda0 must be positive");
  if (!(mu0 >= 0.0)) throw ConfigError("mu0 must be nonnegative");
  if (level_override && *level_override < 1) throw ConfigError("level override must be >= 1");
}

/// Operator gate kappa_l = (lambda0 |Lambda_l|^{-1/2} (delta^2 |log delta|)^{-1/2}) min n^{1/2}.
///
/// Returns +infinity when both delta == 0 and n is infinite (gate disabled).
inline double cutoff_kappa(int level, const EstimatorConfig& cfg, int size) {
  if (level < 1 || size < 1) throw RangeError("cutoff_kappa: level and size must be positive");
  const double n_cap = std::sqrt(cfg.n);
  if (cfg.delta == 0.0) return n_cap;
  const double dl = cfg.delta * cfg.delta * std::abs(std::log(cfg.delta));
  const double operator_term = cfg.lambda0 / std::sqrt(static_cast<double>(size)) / std::sqrt(dl);
  return std::min(operator_term, n_cap);
}

/// Energy threshold tau_l = mu0 |Lambda_l|^{1/2} (log n / n)^{1/2}; zero when n is infinite.
inline double threshold_tau(int level, const EstimatorConfig& cfg, int size) {
  if (level < 1 || size < 1) throw RangeError("threshold_tau: level and size must be positive");
  if (std::isinf(cfg.n)) return 0.0;
  if (!(cfg.n > 1.0)) throw ConfigError("threshold_tau: finite n must exceed 1");
  return cfg.mu0 * std::sqrt(static_cast<double>(size)) * std::sqrt(std::log(cfg.n) / cfg.n);
}

namespace detail {

// floor() that is robust to pow() landing one ulp below an exact integer.
inline double safe_floor(double x) {
  return std::floor(x * (1.0 + 1e-12));
}

}  // namespace detail

/// Frequency cap L = floor((delta^2)^{-1/(2nu+d-1)}) min floor(n^{1/(2nu+d)}).
///
/// An infinite term (delta == 0, n infinite, or a vanishing exponent) drops
/// out of the minimum. The override wins when set.
inline int max_level(const EstimatorConfig& cfg) {
  if (cfg.level_override) return *cfg.level_override;
  double delta_term = kInfinity;
  const double operator_exp = 2.0 * cfg.nu + cfg.d - 1.0;
  if (cfg.delta > 0.0 && operator_exp > 0.0)
    delta_term = detail::safe_floor(std::pow(cfg.delta * cfg.delta, -1.0 / operator_exp));
  double n_term = kInfinity;
  if (std::isfinite(cfg.n)) n_term = detail::safe_floor(std::pow(cfg.n, 1.0 / (2.0 * cfg.nu + cfg.d)));
  const double level = std::min(delta_term, n_term);
  if (std::isinf(level))
    throw ConfigError("max_level: delta = 0 and n = infinity need an explicit level override");
  if (level > static_cast<double>(std::numeric_limits<int>::max() / 2)) return std::numeric_limits<int>::max() / 2;
  return std::max(1, static_cast<int>(level));
}

template <typename Real = double> struct EstimateReport {
  BlockCoefficients<Real> f_hat;
  std::vector<bool> gate_pass;    ///< per level 1..level_used
  std::vector<bool> energy_pass;  ///< per level 1..level_used
  std::vector<double> kappa;
  std::vector<double> tau;
  std::vector<double> inverse_norm;  ///< +inf when the block is singular
  int level_used = 0;
  int level_formula = 0;  ///< max_level(cfg) before clamping to the stored levels
};

/// Gated blockwise inversion with block thresholding.
///
/// Level l <= L is kept iff ||K_{delta,l}^{-1}|| <= kappa_l and ||z_l|| >= tau_l;
/// kept levels get K_{delta,l}^{-1} z_l, everything else is zero. L is
/// clamped to the levels stored in both z and K_delta. Numerically singular
/// blocks fail the gate.
template <typename Real>
EstimateReport<Real> estimate(const BlockCoefficients<Real>& z, const BlockOperator<Real>& K_delta,
                              const EstimatorConfig& cfg) {
  cfg.validate();
  detail::require_same_shape(z.structure(), z.levels(), K_delta.structure(), K_delta.levels(), "estimate");

  EstimateReport<Real> report;
  report.level_formula = max_level(cfg);
  report.level_used = std::min({report.level_formula, z.levels(), K_delta.levels()});
  report.f_hat = BlockCoefficients<Real>(z.structure());

  const int L = report.level_used;
  report.gate_pass.assign(L, false);
  report.energy_pass.assign(L, false);
  report.kappa.resize(L);
  report.tau.resize(L);
  report.inverse_norm.resize(L);

  for (int l = 1; l <= L; ++l) {
    const int size = z.structure().block_size(l);
    const double kappa = cutoff_kappa(l, cfg, size);
    const double tau = threshold_tau(l, cfg, size);
    report.kappa[l - 1] = kappa;
    report.tau[l - 1] = tau;

    const auto& zl = z.block(l);
    const bool energy = static_cast<double>(zl.squaredNorm()) >= tau * tau;
    report.energy_pass[l - 1] = energy;

    MatrixX<Real> inv;
    double inv_norm = kInfinity;
    try {
      inv = invert(K_delta.block(l));
      inv_norm = static_cast<double>(inverse_norm(K_delta.block(l)));
    } catch (const SingularError&) {
      inv_norm = kInfinity;
    }
    report.inverse_norm[l - 1] = inv_norm;
    const bool gate = std::isfinite(inv_norm) && inv_norm <= kappa;
    report.gate_pass[l - 1] = gate;

    if (gate && energy) report.f_hat.set_block(l, inv * zl);
  }
  return report;
}

/// sum_l ||f_hat_l - f_l||^2 over the union of stored levels, summed left to right.
template <typename Real>
Real squared_error(const BlockCoefficients<Real>& f_hat, const BlockCoefficients<Real>& f) {
  detail::require_same_shape(f_hat.structure(), f_hat.levels(), f.structure(), f.levels(), "squared_error");
  const int levels = std::max(f_hat.levels(), f.levels());
  Real acc = 0;
  for (int l = 1; l <= levels; ++l) {
    if (l <= f_hat.levels() && l <= f.levels())
      acc += (f_hat.block(l) - f.block(l)).squaredNorm();
    else if (l <= f.levels())
      acc += f.block(l).squaredNorm();
    else
      acc += f_hat.block(l).squaredNorm();
  }
  return acc;
}

/// Per-level squared errors; entries sum to squared_error.
template <typename Real>
std::vector<Real> squared_error_by_level(const BlockCoefficients<Real>& f_hat, const BlockCoefficients<Real>& f) {
  const int levels = std::max(f_hat.levels(), f.levels());
  std::vector<Real> out(levels, Real(0));
  for (int l = 1; l <= levels; ++l) {
    if (l <= f_hat.levels() && l <= f.levels())
      out[l - 1] = (f_hat.block(l) - f.block(l)).squaredNorm();
    else if (l <= f.levels())
      out[l - 1] = f.block(l).squaredNorm();
    else
      out[l - 1] = f_hat.block(l).squaredNorm();
  }
  return out;
}

/// sum_{l > level} ||f_l||^2: the truncation bias of a cap at `level`.
template <typename Real> Real tail_energy(const BlockCoefficients<Real>& f, int level) {
  Real acc = 0;
  for (int l = std::max(level + 1, 1); l <= f.levels(); ++l) acc += f.block(l).squaredNorm();
  return acc;
}

}  // namespace bsvd
