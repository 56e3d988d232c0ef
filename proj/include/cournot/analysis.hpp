#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cournot/io.hpp"

namespace cournot {

/// One analysis job, read from a JSON config file:
///
///   {
///     "market": {"n": 2, "c": 0.0, "demand": {"family": "Uniform", "params": {...}}},
///     "grid": {"points": 1024, "hi_quantile": 0.999999999, "mono_tol": 1e-9},
///     "run_oracles": true, "oracle_samples": 200000, "seed": 7,
///     "outputs": {"report_path": "report.json", "grid_csv_path": "grid.csv"}
///   }
///
/// Only "market" is required.
struct AnalysisConfig {
  int firms = 1;
  double cost = 0.0;
  json demand_spec;
  GridConfig grid;
  bool run_oracles = false;
  std::size_t oracle_samples = 200000;
  std::uint64_t seed = 0;
  std::optional<std::string> report_path;
  std::optional<std::string> grid_csv_path;
};

AnalysisConfig parse_analysis_config(const json& doc);
AnalysisConfig load_analysis_config(const std::string& path);

/// classify -> find_equilibria -> uniqueness_certificate ->
/// log_concavity_check -> (optionally) oracles, as one JSON report.
json analyze_market(const MarketConfig& market, const AnalysisConfig& cfg);

/// Builds the market from the config, runs analyze_market and writes the
/// report (and grid CSV when requested). Returns the report.
json run_analyze(const AnalysisConfig& cfg);

/// Serialized report text; identical inputs give identical bytes.
std::string dump_report(const json& report);

enum class SweepParameter { Firms, Cost, Scale };

SweepParameter parse_sweep_parameter(const std::string& name);
std::vector<double> parse_value_list(const std::string& text);

/// Runs the analysis once per value and returns a CSV summary with columns
/// value,status,root_count,total_output,per_firm,hazard_shape,residual_class,
/// zero_cost_moment,consistent. Rows that fail record the error code in
/// "status" and the sweep continues.
std::string run_sweep(const AnalysisConfig& base, SweepParameter param,
                      const std::vector<double>& values);

}  // namespace cournot
