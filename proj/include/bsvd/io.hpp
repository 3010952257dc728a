#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bsvd/estimator.hpp"
#include "bsvd/experiment.hpp"
#include "bsvd/random.hpp"

namespace bsvd::io {

using nlohmann::json;

// Schemas are described in docs/formats.md. Complex numbers are stored
// interleaved as [re, im, re, im, ...]; operator blocks are row-major.

json structure_to_json(const BlockStructure& s);
BlockStructure structure_from_json(const json& j);

json coeffs_to_json(const BlockCoefficients<double>& f);
BlockCoefficients<double> coeffs_from_json(const json& j);

json operator_to_json(const BlockOperator<double>& K);
BlockOperator<double> operator_from_json(const json& j);

json report_to_json(const EstimateReport<double>& report);

/// Reads an experiment config; unknown keys and malformed values throw ConfigError.
/// Keys absent from `j` keep the value in `base`.
ExperimentConfig experiment_from_json(const json& j, ExperimentConfig base = {});
json experiment_to_json(const ExperimentConfig& cfg);

json concentration_to_json(const ConcentrationSummary& s);

/// Reads and parses a JSON file; I/O and parse failures throw ConfigError.
json read_json_file(const std::string& path);

/// "delta,mean,std,replicates" header, one row per delta, 17 significant digits.
void write_risk_csv(std::ostream& out, const RiskSummary& summary);

/// Table layout: delta,mean,std,replicates,ratio_to_delta0.
void write_sphere_table_csv(std::ostream& out, const RiskSummary& summary);

/// Reads "delta,risk" rows (a header line is skipped when present). Extra
/// columns are ignored, so an `mc` CSV works as input.
std::vector<RatePoint> read_rate_points_csv(std::istream& in);

}  // namespace bsvd::io
