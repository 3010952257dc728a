#include "bsvd/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace bsvd::io {

namespace {

json number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  return x;
}

double read_number(const json& j, const char* what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "Infinity") return kInfinity;
  }
  throw ConfigError(std::string(what) + ": expected a number or \"inf\"");
}

json interleave(const Eigen::Ref<const VectorX<double>>& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    a.push_back(v(i).real());
    a.push_back(v(i).imag());
  }
  return a;
}

VectorX<double> deinterleave(const json& a, const char* what) {
  if (!a.is_array() || a.size() % 2 != 0)
    throw ConfigError(std::string(what) + ": expected an even-length array of numbers");
  VectorX<double> v(static_cast<Eigen::Index>(a.size() / 2));
  for (std::size_t i = 0; i < a.size(); i += 2) {
    if (!a[i].is_number() || !a[i + 1].is_number()) throw ConfigError(std::string(what) + ": non-numeric entry");
    v(static_cast<Eigen::Index>(i / 2)) = {a[i].get<double>(), a[i + 1].get<double>()};
  }
  return v;
}

void require_keys(const json& j, std::initializer_list<const char*> allowed, const char* what) {
  if (!j.is_object()) throw ConfigError(std::string(what) + ": expected a JSON object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(std::string(what) + ": unknown key '" + key + "'");
  }
}

template <typename T> T get(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("key '") + key + "': " + e.what());
  }
}

}  // namespace

json structure_to_json(const BlockStructure& s) {
  json j;
  j["kind"] = to_string(s.kind());
  j["d"] = s.dimension();
  j["max_level"] = s.max_level();
  if (s.kind() == BlockKind::Custom) {
    std::vector<int> sizes;
    for (int l = 1; l <= s.max_level(); ++l) sizes.push_back(s.block_size(l));
    j["sizes"] = sizes;
  }
  return j;
}

BlockStructure structure_from_json(const json& j) {
  require_keys(j, {"kind", "d", "max_level", "sizes", "levels"}, "structure");
  BlockKind kind;
  try {
    kind = block_kind_from_string(get<std::string>(j, "kind"));
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  try {
    switch (kind) {
      case BlockKind::Circular:
        return BlockStructure::circular(get<int>(j, "d"), get<int>(j, "max_level"));
      case BlockKind::Spherical:
        return BlockStructure::spherical(get<int>(j, "max_level"));
      case BlockKind::Custom:
        return BlockStructure::custom(get<std::vector<int>>(j, "sizes"), j.contains("d") ? get<int>(j, "d") : 1);
    }
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("structure: unreachable kind");
}

json coeffs_to_json(const BlockCoefficients<double>& f) {
  json j = structure_to_json(f.structure());
  j["max_level"] = f.levels();
  json levels = json::array();
  for (int l = 1; l <= f.levels(); ++l) levels.push_back(interleave(f.block(l)));
  j["levels"] = std::move(levels);
  return j;
}

BlockCoefficients<double> coeffs_from_json(const json& j) {
  const auto s = structure_from_json(j);
  const json& levels = j.at("levels");
  if (!levels.is_array()) throw ConfigError("coefficients: 'levels' must be an array");
  std::vector<VectorX<double>> blocks;
  for (const auto& b : levels) blocks.push_back(deinterleave(b, "coefficients"));
  try {
    const auto stored = s.with_max_level(static_cast<int>(blocks.size()));
    return BlockCoefficients<double>(stored, std::move(blocks));
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

json operator_to_json(const BlockOperator<double>& K) {
  json j = structure_to_json(K.structure());
  j["max_level"] = K.levels();
  json levels = json::array();
  for (int l = 1; l <= K.levels(); ++l) {
    const auto& b = K.block(l);
    VectorX<double> row_major(b.size());
    for (Eigen::Index r = 0; r < b.rows(); ++r)
      for (Eigen::Index c = 0; c < b.cols(); ++c) row_major(r * b.cols() + c) = b(r, c);
    levels.push_back(interleave(row_major));
  }
  j["levels"] = std::move(levels);
  return j;
}

BlockOperator<double> operator_from_json(const json& j) {
  const auto s = structure_from_json(j);
  const json& levels = j.at("levels");
  if (!levels.is_array()) throw ConfigError("operator: 'levels' must be an array");
  BlockStructure stored = s;
  try {
    stored = s.with_max_level(static_cast<int>(levels.size()));
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  std::vector<MatrixX<double>> blocks;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const auto flat = deinterleave(levels[i], "operator");
    const int size = stored.block_size(static_cast<int>(i) + 1);
    if (flat.size() != static_cast<Eigen::Index>(size) * size)
      throw ConfigError("operator: level " + std::to_string(i + 1) + " has the wrong number of entries");
    MatrixX<double> b(size, size);
    for (int r = 0; r < size; ++r)
      for (int c = 0; c < size; ++c) b(r, c) = flat(r * size + c);
    blocks.push_back(std::move(b));
  }
  return BlockOperator<double>(stored, std::move(blocks));
}

json report_to_json(const EstimateReport<double>& report) {
  json j;
  j["level_used"] = report.level_used;
  j["level_formula"] = report.level_formula;
  json levels = json::array();
  for (int l = 1; l <= report.level_used; ++l) {
    const std::size_t i = static_cast<std::size_t>(l - 1);
    levels.push_back({{"level", l},
                      {"gate_pass", static_cast<bool>(report.gate_pass[i])},
                      {"energy_pass", static_cast<bool>(report.energy_pass[i])},
                      {"kappa", number(report.kappa[i])},
                      {"tau", number(report.tau[i])},
                      {"inverse_norm", number(report.inverse_norm[i])}});
  }
  j["levels"] = std::move(levels);
  j["f_hat"] = coeffs_to_json(report.f_hat);
  return j;
}

ExperimentConfig experiment_from_json(const json& j, ExperimentConfig cfg) {
  require_keys(j,
               {"problem", "deltas", "n", "replicates", "seed", "threads", "lambda0", "mu0", "level_override",
                "noise"},
               "config");
  if (j.contains("problem")) {
    const json& p = j["problem"];
    const auto type = p.is_object() && p.contains("type") ? get<std::string>(p, "type") : std::string();
    if (type == "circular") {
      require_keys(p, {"type", "s_exponent", "nu", "k_max"}, "problem");
      CircularPowerLaw c;
      if (p.contains("s_exponent")) c.s_exponent = get<double>(p, "s_exponent");
      if (p.contains("nu")) c.nu = get<double>(p, "nu");
      if (p.contains("k_max")) c.k_max = get<int>(p, "k_max");
      cfg.problem = c;
    } else if (type == "sphere") {
      require_keys(p, {"type", "l_max"}, "problem");
      SphericalLaplace s;
      if (p.contains("l_max")) s.l_max = get<int>(p, "l_max");
      cfg.problem = s;
    } else {
      throw ConfigError("problem.type must be \"circular\" or \"sphere\"");
    }
  }
  if (j.contains("deltas")) {
    if (!j["deltas"].is_array()) throw ConfigError("deltas must be an array");
    cfg.delta_grid.clear();
    for (const auto& d : j["deltas"]) cfg.delta_grid.push_back(read_number(d, "deltas"));
  }
  if (j.contains("n")) cfg.n = read_number(j["n"], "n");
  if (j.contains("replicates")) cfg.replicates = get<int>(j, "replicates");
  if (j.contains("seed")) cfg.master_seed = get<std::uint64_t>(j, "seed");
  if (j.contains("threads")) cfg.threads = get<int>(j, "threads");
  if (j.contains("lambda0")) cfg.lambda0 = get<double>(j, "lambda0");
  if (j.contains("mu0")) cfg.mu0 = get<double>(j, "mu0");
  if (j.contains("level_override")) {
    if (j["level_override"].is_null())
      cfg.level_override.reset();
    else
      cfg.level_override = get<int>(j, "level_override");
  }
  if (j.contains("noise")) {
    const auto mode = get<std::string>(j, "noise");
    if (mode == "real")
      cfg.noise_mode = NoiseMode::Real;
    else if (mode == "complex")
      cfg.noise_mode = NoiseMode::Complex;
    else
      throw ConfigError("noise must be \"real\" or \"complex\"");
  }
  cfg.validate();
  return cfg;
}

json experiment_to_json(const ExperimentConfig& cfg) {
  json j;
  if (const auto* c = std::get_if<CircularPowerLaw>(&cfg.problem))
    j["problem"] = {{"type", "circular"}, {"s_exponent", c->s_exponent}, {"nu", c->nu}, {"k_max", c->k_max}};
  else
    j["problem"] = {{"type", "sphere"}, {"l_max", std::get<SphericalLaplace>(cfg.problem).l_max}};
  json deltas = json::array();
  for (double d : cfg.delta_grid) deltas.push_back(d);
  j["deltas"] = deltas;
  j["n"] = number(cfg.n);
  j["replicates"] = cfg.replicates;
  j["seed"] = cfg.master_seed;
  j["threads"] = cfg.threads;
  j["lambda0"] = cfg.lambda0;
  j["mu0"] = cfg.mu0;
  j["level_override"] = cfg.level_override ? json(*cfg.level_override) : json(nullptr);
  if (cfg.noise_mode) j["noise"] = *cfg.noise_mode == NoiseMode::Real ? "real" : "complex";
  return j;
}

json concentration_to_json(const ConcentrationSummary& s) {
  return {{"size", s.size},
          {"trials", s.trials},
          {"mean_op_norm_scaled", s.mean_op_norm_scaled},
          {"std_op_norm_scaled", s.std_op_norm_scaled},
          {"mean_vec_norm_scaled", s.mean_vec_norm_scaled},
          {"std_vec_norm_scaled", s.std_vec_norm_scaled},
          {"betas", s.betas},
          {"op_exceedance", s.op_exceedance},
          {"vec_exceedance", s.vec_exceedance}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void write_risk_csv(std::ostream& out, const RiskSummary& summary) {
  out << "delta,mean,std,replicates\n" << std::setprecision(17);
  for (const auto& r : summary.rows) out << r.delta << ',' << r.mean << ',' << r.std << ',' << r.replicates << '\n';
}

void write_sphere_table_csv(std::ostream& out, const RiskSummary& summary) {
  const auto ratios = ratios_to_first(summary);
  out << "delta,mean,std,replicates,ratio_to_delta0\n" << std::setprecision(17);
  for (std::size_t i = 0; i < summary.rows.size(); ++i) {
    const auto& r = summary.rows[i];
    out << r.delta << ',' << r.mean << ',' << r.std << ',' << r.replicates << ',' << ratios[i] << '\n';
  }
}

std::vector<RatePoint> read_rate_points_csv(std::istream& in) {
  std::vector<RatePoint> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string a, b;
    std::getline(ss, a, ',');
    std::getline(ss, b, ',');
    try {
      out.push_back({std::stod(a), std::stod(b)});
    } catch (const std::exception&) {
      if (line_no == 1 && out.empty()) continue;
      throw ConfigError("rate CSV line " + std::to_string(line_no) + ": expected delta,risk");
    }
  }
  return out;
}

}  // namespace bsvd::io
