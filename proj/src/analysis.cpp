#include "cournot/analysis.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "cournot/error.hpp"

namespace cournot {
namespace {

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigParse, "cannot open config file " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigParse, std::string("invalid JSON in ") + path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

json oracle_section(const MarketConfig& m, const EquilibriumSet& eqs, const AnalysisConfig& cfg) {
  const Distribution& d = m.demand;
  json out;
  const double anchor =
      eqs.roots.empty() ? quantile(d, 0.5) : eqs.roots.front().total_output;
  const std::vector<double> outputs{0.0, 0.5 * anchor, anchor};
  const auto mc = mc_expected_prices(d, outputs, cfg.oracle_samples, cfg.seed);
  json rows = json::array();
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    const double exact = expected_price(m, outputs[i]);
    const double z = mc[i].std_error > 0.0 ? (mc[i].estimate - exact) / mc[i].std_error : 0.0;
    rows.push_back({{"total_output", outputs[i]},
                    {"estimate", mc[i].estimate},
                    {"std_error", mc[i].std_error},
                    {"expected_price", exact},
                    {"z_score", z}});
  }
  out["mc_expected_price"] = {{"samples", cfg.oracle_samples}, {"points", rows}};

  if (eqs.roots.size() == 1) {
    const auto& root = eqs.roots.front();
    const double br = best_response(m, (m.firms - 1) * root.per_firm);
    out["best_response_fixed_point"] = {{"per_firm", root.per_firm},
                                        {"best_response", br},
                                        {"gap", std::abs(br - root.per_firm)}};

    std::mt19937_64 rng(cfg.seed + 1);
    std::uniform_real_distribution<double> unif(0.0, 2.0 * root.per_firm);
    std::vector<double> init(static_cast<std::size_t>(m.firms));
    for (auto& v : init) v = unif(rng);
    const DynamicsTrace trace = best_response_dynamics(m, init, 500);
    json dyn = to_json(trace);
    dyn["init"] = init;
    dyn["matches_root"] = trace.limit.has_value() &&
                          std::abs(*trace.limit * m.firms - root.total_output) < 1e-6;
    out["dynamics"] = dyn;
  }
  out["identities"] = to_json(identity_battery(m, cfg.grid, cfg.seed + 2));
  return out;
}

std::string csv_field(double v) { return std::isfinite(v) ? format_double(v) : std::string(); }

}  // namespace

AnalysisConfig parse_analysis_config(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::ConfigParse, "config must be a JSON object");
  if (!doc.contains("market") || !doc.at("market").is_object()) {
    throw Error(ErrorCode::ConfigParse, "config needs a 'market' object");
  }
  const json& market = doc.at("market");
  AnalysisConfig cfg;
  try {
    if (!market.contains("n") || !market.at("n").is_number_integer()) {
      throw Error(ErrorCode::ConfigParse, "market.n must be an integer");
    }
    cfg.firms = market.at("n").get<int>();
    if (market.contains("c")) {
      if (!market.at("c").is_number()) throw Error(ErrorCode::ConfigParse, "market.c must be a number");
      cfg.cost = market.at("c").get<double>();
    }
    if (!market.contains("demand")) throw Error(ErrorCode::ConfigParse, "market.demand missing");
    cfg.demand_spec = market.at("demand");
    if (doc.contains("grid")) cfg.grid = grid_from_json(doc.at("grid"));
    if (doc.contains("run_oracles")) cfg.run_oracles = doc.at("run_oracles").get<bool>();
    if (doc.contains("oracle_samples")) cfg.oracle_samples = doc.at("oracle_samples").get<std::size_t>();
    if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("outputs")) {
      const json& o = doc.at("outputs");
      if (o.contains("report_path")) cfg.report_path = o.at("report_path").get<std::string>();
      if (o.contains("grid_csv_path")) cfg.grid_csv_path = o.at("grid_csv_path").get<std::string>();
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigParse, std::string("bad config field: ") + e.what());
  }
  if (cfg.oracle_samples < 1000) throw Error(ErrorCode::ConfigParse, "oracle_samples must be >= 1000");
  // Surface malformed demand specs as parse errors up front.
  distribution_from_json(cfg.demand_spec);
  return cfg;
}

AnalysisConfig load_analysis_config(const std::string& path) {
  return parse_analysis_config(read_json_file(path));
}

json analyze_market(const MarketConfig& market, const AnalysisConfig& cfg) {
  const ClassificationReport report = classify(market.demand, cfg.grid);
  const EquilibriumSet eqs = find_equilibria(market, cfg.grid);
  const UniquenessCertificate cert = uniqueness_certificate(market, report, eqs);
  const LogConcavityResult lc = log_concavity_check(market, cfg.grid);

  json out;
  out["market"] = to_json(market);
  out["classification"] = to_json(report);
  out["equilibria"] = to_json(eqs);
  out["certificate"] = to_json(cert);
  out["log_concavity"] = to_json(lc);
  if (cfg.run_oracles) out["oracles"] = oracle_section(market, eqs, cfg);
  return out;
}

json run_analyze(const AnalysisConfig& cfg) {
  const MarketConfig market =
      make_market(cfg.firms, cfg.cost, distribution_from_json(cfg.demand_spec));
  const json report = analyze_market(market, cfg);
  if (cfg.report_path) write_text(*cfg.report_path, dump_report(report));
  if (cfg.grid_csv_path) {
    std::ostringstream csv;
    write_grid_csv(csv, grid_dump(market.demand, cfg.grid));
    write_text(*cfg.grid_csv_path, csv.str());
  }
  return report;
}

std::string dump_report(const json& report) { return report.dump(2) + "\n"; }

SweepParameter parse_sweep_parameter(const std::string& name) {
  if (name == "n") return SweepParameter::Firms;
  if (name == "c") return SweepParameter::Cost;
  if (name == "scale") return SweepParameter::Scale;
  throw Error(ErrorCode::ConfigParse, "sweep parameter must be one of n, c, scale");
}

std::vector<double> parse_value_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ConfigParse, "cannot parse sweep value '" + item + "'");
    }
  }
  if (values.empty()) throw Error(ErrorCode::ConfigParse, "sweep needs at least one value");
  return values;
}

std::string run_sweep(const AnalysisConfig& base, SweepParameter param,
                      const std::vector<double>& values) {
  if (values.empty()) throw Error(ErrorCode::ConfigParse, "sweep needs at least one value");
  std::ostringstream csv;
  csv << std::boolalpha;
  csv << "value,status,root_count,total_output,per_firm,hazard_shape,residual_class,"
         "zero_cost_moment,consistent\n";
  for (double v : values) {
    csv << format_double(v) << ',';
    try {
      AnalysisConfig cfg = base;
      cfg.report_path.reset();
      cfg.grid_csv_path.reset();
      Distribution demand = distribution_from_json(cfg.demand_spec);
      switch (param) {
        case SweepParameter::Firms:
          if (v != std::floor(v)) throw Error(ErrorCode::ConfigParse, "n must be an integer");
          cfg.firms = static_cast<int>(v);
          break;
        case SweepParameter::Cost: cfg.cost = v; break;
        case SweepParameter::Scale: demand = scale(demand, v); break;
      }
      const MarketConfig market = make_market(cfg.firms, cfg.cost, std::move(demand));
      const json r = analyze_market(market, cfg);
      const json& roots = r.at("equilibria").at("roots");
      std::string totals;
      std::string per_firm;
      for (std::size_t i = 0; i < roots.size(); ++i) {
        if (i) {
          totals += ';';
          per_firm += ';';
        }
        totals += csv_field(roots[i].at("total_output").get<double>());
        per_firm += csv_field(roots[i].at("per_firm").get<double>());
      }
      const json& cert = r.at("certificate");
      csv << "ok," << roots.size() << ',' << totals << ',' << per_firm << ','
          << cert.at("hazard_shape").at("applies").get<bool>() << ','
          << cert.at("residual_class").at("applies").get<bool>() << ','
          << cert.at("zero_cost_moment").at("applies").get<bool>() << ','
          << cert.at("consistent").get<bool>() << '\n';
    } catch (const Error& e) {
      csv << to_string(e.code()) << ",,,,,,,\n";
    }
  }
  return csv.str();
}

}  // namespace cournot
