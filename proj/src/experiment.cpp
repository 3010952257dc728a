#include "bsvd/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "bsvd/sphere.hpp"
#include "bsvd/torus.hpp"

namespace bsvd {

void ExperimentConfig::validate() const {
  if (replicates < 1) throw ConfigError("replicates must be >= 1");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (delta_grid.empty()) throw ConfigError("delta grid is empty");
  for (double d : delta_grid)
    if (!(d >= 0.0 && d < 1.0)) throw ConfigError("delta values must lie in [0, 1)");
  if (!(n > 0.0)) throw ConfigError("n must be positive (or infinite)");
  if (std::isfinite(n) && !(n > 1.0)) throw ConfigError("finite n must exceed 1");
  if (!(lambda0 > 0.0)) throw ConfigError("lambda0 must be positive");
  if (!(mu0 >= 0.0)) throw ConfigError("mu0 must be nonnegative");
  if (level_override && *level_override < 1) throw ConfigError("level override must be >= 1");
  if (const auto* c = std::get_if<CircularPowerLaw>(&problem)) {
    if (c->k_max < 0) throw ConfigError("k_max must be >= 0");
    if (!(c->nu >= 0.0)) throw ConfigError("nu must be nonnegative");
    if (!(c->s_exponent > 0.0) || !std::isfinite(c->s_exponent)) throw ConfigError("s_exponent must be positive");
  } else {
    const auto& s = std::get<SphericalLaplace>(problem);
    if (s.l_max < 0) throw ConfigError("l_max must be >= 0");
    if (noise_mode == NoiseMode::Real) throw ConfigError("real noise mode is only available on the torus");
  }
}

ProblemInstance build_problem(const ExperimentConfig& cfg) {
  if (const auto* c = std::get_if<CircularPowerLaw>(&cfg.problem)) {
    return {torus::power_law_signal(c->s_exponent, c->k_max).coeffs, torus::power_law_operator(c->nu, c->k_max),
            c->nu, 1.0, cfg.noise_mode.value_or(NoiseMode::Real)};
  }
  const auto& s = std::get<SphericalLaplace>(cfg.problem);
  return {sphere::gaussian_bump_coeffs(s.l_max), sphere::laplace_operator(s.l_max), 2.0, 2.0,
          cfg.noise_mode.value_or(NoiseMode::Complex)};
}

EstimatorConfig estimator_config(const ExperimentConfig& cfg, const ProblemInstance& problem, double delta) {
  EstimatorConfig e;
  e.delta = delta;
  e.n = cfg.n;
  e.nu = problem.nu;
  e.d = problem.d;
  e.lambda0 = cfg.lambda0;
  e.mu0 = cfg.mu0;
  e.level_override = cfg.level_override;
  return e;
}

namespace {

struct ReplicateOutcome {
  double error = 0.0;
  double dropped = 0.0;
};

ReplicateOutcome replicate(const ProblemInstance& problem, const ExperimentConfig& cfg, double delta,
                           const SeedSpec& seed) {
  const auto K_delta = perturb_operator(problem.K, delta, seed, problem.mode);
  const auto z = observe_signal(problem.K, problem.f, cfg.n, seed, problem.mode);
  const auto report = estimate(z, K_delta, estimator_config(cfg, problem, delta));
  ReplicateOutcome out;
  out.error = squared_error(report.f_hat, problem.f);
  for (int l = 1; l <= problem.f.levels(); ++l) {
    const bool kept = l <= report.level_used && report.gate_pass[l - 1] && report.energy_pass[l - 1];
    if (!kept) out.dropped += problem.f.block(l).squaredNorm();
  }
  return out;
}

}  // namespace

double run_replicate(const ProblemInstance& problem, const ExperimentConfig& cfg, double delta,
                     const SeedSpec& seed) {
  return replicate(problem, cfg, delta, seed).error;
}

double run_replicate(const ExperimentConfig& cfg, double delta, const SeedSpec& seed) {
  cfg.validate();
  return run_replicate(build_problem(cfg), cfg, delta, seed);
}

RiskSummary monte_carlo(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto problem = build_problem(cfg);
  const int reps = cfg.replicates;
  const int workers = std::min(cfg.threads, reps);

  RiskSummary summary;
  for (double delta : cfg.delta_grid) {
    estimator_config(cfg, problem, delta).validate();

    std::vector<ReplicateOutcome> outcomes(reps);
    auto run = [&](int worker) {
      for (int r = worker; r < reps; r += workers)
        outcomes[r] = replicate(problem, cfg, delta, {cfg.master_seed, static_cast<std::uint64_t>(r)});
    };
    if (workers == 1) {
      run(0);
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
      for (auto& t : pool) t.join();
    }

    RiskRow row;
    row.delta = delta;
    row.replicates = reps;
    double sum = 0.0, dropped = 0.0;
    for (const auto& o : outcomes) {
      sum += o.error;
      dropped += o.dropped;
    }
    row.mean = sum / reps;
    row.bias = dropped / reps;
    if (reps > 1) {
      double ss = 0.0;
      for (const auto& o : outcomes) ss += (o.error - row.mean) * (o.error - row.mean);
      row.std = std::sqrt(ss / (reps - 1));
    }
    summary.rows.push_back(row);
  }
  return summary;
}

std::vector<double> ratios_to_first(const RiskSummary& summary) {
  if (summary.rows.empty() || !(summary.rows.front().mean > 0.0))
    throw DomainError("ratios_to_first: first mean must be positive");
  std::vector<double> out;
  for (const auto& row : summary.rows) out.push_back(row.mean / summary.rows.front().mean);
  return out;
}

double rate_slope(const std::vector<RatePoint>& points) {
  if (points.size() < 2) throw DomainError("rate_slope: need at least two points");
  std::vector<double> x, y;
  for (const auto& p : points) {
    if (!(p.delta > 0.0) || !(p.risk > 0.0)) throw DomainError("rate_slope: delta and risk must be positive");
    x.push_back(std::log(p.delta));
    y.push_back(std::log(p.risk));
  }
  const double m = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (!(sxx > 0.0)) throw DomainError("rate_slope: delta values must not all coincide");
  return sxy / sxx;
}

std::vector<RatePoint> rate_points(const RiskSummary& summary) {
  std::vector<RatePoint> out;
  for (const auto& row : summary.rows) out.push_back({row.delta, row.mean});
  return out;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi >= lo) || n < 1) throw DomainError("log_grid: need 0 < lo <= hi and n >= 1");
  if (n == 1) return {lo};
  std::vector<double> out(n);
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < n; ++i) out[i] = std::exp(a + (b - a) * i / (n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> sphere_table_deltas() {
  return {0.0, 1e-3, 3e-3, 5e-3, 1e-2};
}

ExperimentConfig sphere_table_config(int replicates, std::uint64_t master_seed, int threads) {
  ExperimentConfig cfg;
  cfg.problem = SphericalLaplace{};
  cfg.delta_grid = sphere_table_deltas();
  cfg.n = 1e8;
  cfg.replicates = replicates;
  cfg.master_seed = master_seed;
  cfg.threads = threads;
  cfg.lambda0 = 1.0;
  cfg.mu0 = 1.0;
  return cfg;
}

}  // namespace bsvd
