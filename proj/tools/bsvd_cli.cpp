// Command-line front end: simulate, mc, slope, sphere-table, synth, diag.
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "bsvd/experiment.hpp"
#include "bsvd/io.hpp"
#include "bsvd/sphere.hpp"
#include "bsvd/torus.hpp"

namespace {

using bsvd::ConfigError;
using bsvd::ExperimentConfig;
namespace io = bsvd::io;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> replicates;
  std::optional<int> threads;
  std::vector<double> deltas;
  std::string n;
  std::optional<double> nu;
  std::optional<double> lambda0;
  std::optional<double> mu0;
  std::optional<int> level_override;
  std::string out;
};

void add_overrides(CLI::App* app, Overrides& o, bool with_config = true) {
  if (with_config) app->add_option("--config", o.config, "experiment config JSON");
  app->add_option("--seed", o.seed, "master seed");
  app->add_option("--replicates", o.replicates, "Monte-Carlo replicates");
  app->add_option("--threads", o.threads, "worker threads");
  app->add_option("--delta", o.deltas, "operator noise level(s), comma separated")->delimiter(',');
  app->add_option("--n", o.n, "signal sample size, or inf");
  app->add_option("--nu", o.nu, "degree of ill-posedness (circular problem)");
  app->add_option("--lambda0", o.lambda0, "operator gate constant");
  app->add_option("--mu0", o.mu0, "energy threshold constant");
  app->add_option("--level", o.level_override, "fixed frequency cap L");
  app->add_option("--out", o.out, "output file (default stdout)");
}

double parse_n(const std::string& s) {
  if (s == "inf" || s == "Infinity") return bsvd::kInfinity;
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("--n: expected a number or inf, got '" + s + "'");
}

ExperimentConfig resolve(const Overrides& o, ExperimentConfig base) {
  if (!o.config.empty()) base = io::experiment_from_json(io::read_json_file(o.config), base);
  if (o.seed) base.master_seed = *o.seed;
  if (o.replicates) base.replicates = *o.replicates;
  if (o.threads) base.threads = *o.threads;
  if (!o.deltas.empty()) base.delta_grid = o.deltas;
  if (!o.n.empty()) base.n = parse_n(o.n);
  if (o.nu) {
    auto* c = std::get_if<bsvd::CircularPowerLaw>(&base.problem);
    if (!c) throw ConfigError("--nu applies to the circular problem only");
    c->nu = *o.nu;
  }
  if (o.lambda0) base.lambda0 = *o.lambda0;
  if (o.mu0) base.mu0 = *o.mu0;
  if (o.level_override) base.level_override = *o.level_override;
  base.validate();
  return base;
}

// Writes to --out when given, stdout otherwise.
template <typename Fn> void emit(const std::string& path, Fn&& write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot open " + path + " for writing");
  write(f);
}

int run(int argc, char** argv) {
  CLI::App app{"Blockwise-SVD estimation with a noisy operator"};
  app.require_subcommand(1);

  Overrides sim_o;
  int sim_replicate = 0;
  auto* simulate = app.add_subcommand("simulate", "one replicate; prints the estimate report as JSON");
  add_overrides(simulate, sim_o);
  simulate->add_option("--replicate", sim_replicate, "replicate index");

  Overrides mc_o;
  auto* mc = app.add_subcommand("mc", "Monte-Carlo risk per delta as CSV (delta,mean,std,replicates)");
  add_overrides(mc, mc_o);

  std::string slope_in;
  auto* slope = app.add_subcommand("slope", "log-log slope of risk against delta from a CSV");
  slope->add_option("input", slope_in, "CSV with delta,risk columns (- for stdin)")->required();

  Overrides table_o;
  auto* table = app.add_subcommand("sphere-table", "spherical Laplace risk table with ratios to delta = 0");
  add_overrides(table, table_o);

  std::string synth_coeffs, synth_out;
  bool synth_bump = false;
  int synth_grid = 64, bump_lmax = 30;
  auto* synth = app.add_subcommand("synth", "evaluate a sphere or torus function on a grid as CSV");
  synth->add_option("--coeffs", synth_coeffs, "coefficient JSON (spherical or circular d = 1)");
  synth->add_flag("--bump", synth_bump, "use the Gaussian bump target");
  synth->add_option("--l-max", bump_lmax, "degree cutoff for --bump");
  synth->add_option("--grid", synth_grid, "torus points, or sphere colatitude nodes (longitudes: twice as many)");
  synth->add_option("--out", synth_out, "output file");

  int diag_size = 64, diag_trials = 100000, diag_threads = 1;
  std::uint64_t diag_seed = 0;
  std::string diag_out;
  auto* diag = app.add_subcommand("diag", "concentration diagnostics of Gaussian noise blocks as JSON");
  diag->add_option("--size", diag_size, "block size");
  diag->add_option("--trials", diag_trials, "Monte-Carlo trials");
  diag->add_option("--seed", diag_seed, "master seed");
  diag->add_option("--threads", diag_threads, "worker threads");
  diag->add_option("--out", diag_out, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (*simulate) {
    auto cfg = resolve(sim_o, {});
    if (cfg.delta_grid.size() != 1) throw ConfigError("simulate takes a single --delta");
    const auto problem = bsvd::build_problem(cfg);
    const double delta = cfg.delta_grid.front();
    const bsvd::SeedSpec seed{cfg.master_seed, static_cast<std::uint64_t>(sim_replicate)};
    const auto K_delta = bsvd::perturb_operator(problem.K, delta, seed, problem.mode);
    const auto z = bsvd::observe_signal(problem.K, problem.f, cfg.n, seed, problem.mode);
    const auto report = bsvd::estimate(z, K_delta, bsvd::estimator_config(cfg, problem, delta));
    auto j = io::report_to_json(report);
    j["delta"] = delta;
    j["squared_error"] = bsvd::squared_error(report.f_hat, problem.f);
    j["config"] = io::experiment_to_json(cfg);
    emit(sim_o.out, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
  } else if (*mc) {
    const auto cfg = resolve(mc_o, {});
    const auto summary = bsvd::monte_carlo(cfg);
    emit(mc_o.out, [&](std::ostream& out) { io::write_risk_csv(out, summary); });
  } else if (*slope) {
    std::vector<bsvd::RatePoint> points;
    if (slope_in == "-") {
      points = io::read_rate_points_csv(std::cin);
    } else {
      std::ifstream f(slope_in);
      if (!f) throw ConfigError("cannot open " + slope_in);
      points = io::read_rate_points_csv(f);
    }
    std::cout << std::setprecision(17) << bsvd::rate_slope(points) << '\n';
  } else if (*table) {
    const auto cfg = resolve(table_o, bsvd::sphere_table_config(300, 0, 1));
    if (!std::holds_alternative<bsvd::SphericalLaplace>(cfg.problem))
      throw ConfigError("sphere-table needs the sphere problem");
    const auto summary = bsvd::monte_carlo(cfg);
    emit(table_o.out, [&](std::ostream& out) { io::write_sphere_table_csv(out, summary); });
  } else if (*synth) {
    if (synth_bump == !synth_coeffs.empty()) throw ConfigError("synth needs exactly one of --coeffs and --bump");
    if (synth_grid < 1) throw ConfigError("--grid must be positive");
    const auto f = synth_bump ? bsvd::sphere::gaussian_bump_coeffs(bump_lmax)
                              : io::coeffs_from_json(io::read_json_file(synth_coeffs));
    if (f.structure().kind() == bsvd::BlockKind::Spherical) {
      const auto quad = bsvd::sphere::sphere_quadrature(synth_grid, 2 * synth_grid);
      const auto values = bsvd::sphere::synthesize(f, quad.points);
      emit(synth_out, [&](std::ostream& out) {
        out << "theta,phi,value\n" << std::setprecision(17);
        for (std::size_t i = 0; i < values.size(); ++i)
          out << quad.points[i].theta << ',' << quad.points[i].phi << ',' << values[i] << '\n';
      });
    } else if (f.structure().kind() == bsvd::BlockKind::Circular && f.structure().dimension() == 1) {
      const auto values = bsvd::torus::synthesize_1d(bsvd::torus::make_torus_coeffs(f, true), synth_grid);
      emit(synth_out, [&](std::ostream& out) {
        out << "x,value\n" << std::setprecision(17);
        for (int i = 0; i < synth_grid; ++i) out << static_cast<double>(i) / synth_grid << ',' << values[i] << '\n';
      });
    } else {
      throw ConfigError("synth supports spherical and one-dimensional circular coefficients");
    }
  } else if (*diag) {
    const auto s = bsvd::concentration_diag(diag_size, diag_trials, diag_seed, diag_threads);
    emit(diag_out, [&](std::ostream& out) { out << io::concentration_to_json(s).dump(2) << '\n'; });
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const bsvd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const bsvd::Error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
