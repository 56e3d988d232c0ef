// Command-line front end: analyze one market or sweep a parameter.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cournot/analysis.hpp"
#include "cournot/error.hpp"

namespace {

constexpr const char* kExitCodes = R"(Exit codes:
  0   success
  1   unexpected internal error
  2   ConfigParse          malformed config, arguments or sweep values
  3   AssumptionViolated   expected demand intercept does not exceed cost
  4   QuadratureFailure    numerical integration missed its tolerance
  5   InconsistentVerdict  class implications broken on the grid (refine it)
  6   InvalidParameter     distribution or grid parameter out of range
  7   NonPositiveScale     scale factor <= 0
  8   OutOfSupport         evaluation point outside the support
  9   ZeroSurvival         survival underflow inside the support
  10  NonPositivePoint     generalized residual demand at x <= 0
  11  EmptyRegion          expected price never exceeds cost
  12  Io                   report or grid file could not be written)";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetric Cournot equilibrium analyzer for stochastic linear demand"};
  app.footer(kExitCodes);
  app.require_subcommand(1);

  std::string config_path;
  std::string report_path;
  std::string grid_csv_path;
  std::uint64_t seed = 0;

  auto* analyze = app.add_subcommand("analyze", "Classify demand, solve and certify one market");
  analyze->add_option("--config", config_path, "JSON analysis config")->required();
  analyze->add_option("--report", report_path, "Write the JSON report here (default: stdout)");
  analyze->add_option("--grid-csv", grid_csv_path, "Write the shape-function grid as CSV");
  auto* seed_opt = analyze->add_option("--seed", seed, "Seed for the Monte Carlo oracles");

  std::string sweep_config;
  std::string param;
  std::string values;
  std::string out_path;
  auto* sweep = app.add_subcommand("sweep", "Repeat the analysis over a list of parameter values");
  sweep->add_option("--config", sweep_config, "JSON analysis config")->required();
  sweep->add_option("--param", param, "Parameter to vary: n, c or scale")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required();
  sweep->add_option("--out", out_path, "Write the CSV summary here (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cournot::exit_code(cournot::ErrorCode::ConfigParse);
  }

  try {
    if (*analyze) {
      cournot::AnalysisConfig cfg = cournot::load_analysis_config(config_path);
      if (!report_path.empty()) cfg.report_path = report_path;
      if (!grid_csv_path.empty()) cfg.grid_csv_path = grid_csv_path;
      if (seed_opt->count() > 0) cfg.seed = seed;
      const auto report = cournot::run_analyze(cfg);
      if (!cfg.report_path) std::cout << cournot::dump_report(report);
    } else {
      const cournot::AnalysisConfig cfg = cournot::load_analysis_config(sweep_config);
      const auto which = cournot::parse_sweep_parameter(param);
      const auto list = cournot::parse_value_list(values);
      const std::string csv = cournot::run_sweep(cfg, which, list);
      if (out_path.empty()) {
        std::cout << csv;
      } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!(out << csv)) throw cournot::Error(cournot::ErrorCode::Io, "cannot write " + out_path);
      }
    }
  } catch (const cournot::Error& e) {
    std::cerr << "error [" << cournot::to_string(e.code()) << "]: " << e.what() << '\n';
    return cournot::exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
