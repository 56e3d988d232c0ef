#include "cournot/io.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "cournot/error.hpp"

namespace cournot {
namespace {

[[noreturn]] void parse_error(const std::string& what) {
  throw Error(ErrorCode::ConfigParse, what);
}

double number(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    parse_error(std::string("missing numeric field '") + key + "'");
  }
  const json& v = obj.at(key);
  if (!v.is_number()) parse_error(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

const json& params_of(const json& spec) {
  if (!spec.contains("params") || !spec.at("params").is_object()) {
    parse_error("distribution entry needs a 'params' object");
  }
  return spec.at("params");
}

// JSON has no infinities; they serialize as null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json opt_num(const std::optional<double>& v) { return v ? num(*v) : json(nullptr); }

json to_json(const Witness& w) {
  return {{"x1", num(w.x1)}, {"x2", num(w.x2)}, {"f_x1", num(w.f_x1)}, {"f_x2", num(w.f_x2)}};
}

json to_json(const ClassFlag& f) {
  return {{"verdict", to_string(f.verdict)},
          {"witness", f.witness ? to_json(*f.witness) : json(nullptr)},
          {"closure_forced", f.closure_forced}};
}

json to_json(const IdentityCheck& c) {
  return {{"available", c.available},
          {"max_rel_error", num(c.max_rel_error)},
          {"points_checked", c.points_checked},
          {"points_skipped", c.points_skipped}};
}

}  // namespace

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    case Verdict::NotAvailable: return "not_available";
  }
  return "not_available";
}

Distribution distribution_from_json(const json& spec) {
  if (!spec.is_object()) parse_error("distribution entry must be an object");
  if (!spec.contains("family") || !spec.at("family").is_string()) {
    parse_error("distribution entry needs a string 'family'");
  }
  const std::string family = spec.at("family").get<std::string>();

  auto build = [&]() -> Distribution {
    if (family == "Uniform") {
      const json& p = params_of(spec);
      return Distribution::uniform(number(p, "lo"), number(p, "hi"));
    }
    if (family == "Exponential") return Distribution::exponential(number(params_of(spec), "rate"));
    if (family == "Gamma") {
      const json& p = params_of(spec);
      return Distribution::gamma(number(p, "shape"), number(p, "scale"));
    }
    if (family == "Weibull") {
      const json& p = params_of(spec);
      return Distribution::weibull(number(p, "shape"), number(p, "scale"));
    }
    if (family == "Beta") {
      const json& p = params_of(spec);
      return Distribution::beta(number(p, "a"), number(p, "b"));
    }
    if (family == "Pareto") {
      const json& p = params_of(spec);
      const double alpha = p.contains("alpha") ? number(p, "alpha") : number(p, "a");
      return Distribution::pareto(number(p, "xm"), alpha);
    }
    if (family == "LogNormal") {
      const json& p = params_of(spec);
      return Distribution::lognormal(number(p, "mu"), number(p, "sigma"));
    }
    if (family == "TruncatedNormal") {
      const json& p = params_of(spec);
      return Distribution::truncated_normal(number(p, "mu"), number(p, "sigma"));
    }
    if (family == "Mixture") {
      if (!spec.contains("components") || !spec.at("components").is_array() ||
          !spec.contains("weights") || !spec.at("weights").is_array()) {
        parse_error("Mixture needs 'components' and 'weights' arrays");
      }
      const json& comps = spec.at("components");
      const json& weights = spec.at("weights");
      if (comps.size() != weights.size()) parse_error("Mixture components/weights length mismatch");
      std::vector<MixtureComponent> out;
      for (std::size_t i = 0; i < comps.size(); ++i) {
        if (!weights[i].is_number()) parse_error("Mixture weights must be numbers");
        out.push_back({distribution_from_json(comps[i]), weights[i].get<double>()});
      }
      return Distribution::mixture(std::move(out));
    }
    if (family == "Scaled") {
      if (!spec.contains("base")) parse_error("Scaled needs a 'base' distribution");
      return scale(distribution_from_json(spec.at("base")), number(params_of(spec), "factor"));
    }
    parse_error("unknown distribution family '" + family + "'");
  };

  Distribution d = build();
  if (spec.contains("density")) {
    if (!spec.at("density").is_boolean()) parse_error("'density' must be a boolean");
    if (!spec.at("density").get<bool>()) d = d.without_density();
  }
  return d;
}

json to_json(const Distribution& d) {
  json out = std::visit(
      [](const auto& f) -> json {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Uniform>) {
          return {{"family", "Uniform"}, {"params", {{"lo", f.lo}, {"hi", f.hi}}}};
        } else if constexpr (std::is_same_v<T, Exponential>) {
          return {{"family", "Exponential"}, {"params", {{"rate", f.rate}}}};
        } else if constexpr (std::is_same_v<T, Gamma>) {
          return {{"family", "Gamma"}, {"params", {{"shape", f.shape}, {"scale", f.scale}}}};
        } else if constexpr (std::is_same_v<T, Weibull>) {
          return {{"family", "Weibull"}, {"params", {{"shape", f.shape}, {"scale", f.scale}}}};
        } else if constexpr (std::is_same_v<T, Beta>) {
          return {{"family", "Beta"}, {"params", {{"a", f.a}, {"b", f.b}}}};
        } else if constexpr (std::is_same_v<T, Pareto>) {
          return {{"family", "Pareto"}, {"params", {{"xm", f.xm}, {"alpha", f.alpha}}}};
        } else if constexpr (std::is_same_v<T, LogNormal>) {
          return {{"family", "LogNormal"}, {"params", {{"mu", f.mu}, {"sigma", f.sigma}}}};
        } else if constexpr (std::is_same_v<T, TruncatedNormal>) {
          return {{"family", "TruncatedNormal"}, {"params", {{"mu", f.mu}, {"sigma", f.sigma}}}};
        } else if constexpr (std::is_same_v<T, Mixture>) {
          json comps = json::array();
          json weights = json::array();
          for (const auto& c : f.components) {
            comps.push_back(to_json(c.dist));
            weights.push_back(c.weight);
          }
          return {{"family", "Mixture"}, {"components", comps}, {"weights", weights}};
        } else {
          return {{"family", "Scaled"}, {"params", {{"factor", f.factor}}}, {"base", to_json(*f.base)}};
        }
      },
      d.family());
  if (!d.has_density()) out["density"] = false;
  return out;
}

GridConfig grid_from_json(const json& spec) {
  GridConfig cfg;
  if (spec.is_null()) return cfg;
  if (!spec.is_object()) parse_error("'grid' must be an object");
  if (spec.contains("points")) {
    if (!spec.at("points").is_number_integer() || spec.at("points").get<long long>() < 2) {
      parse_error("grid.points must be an integer >= 2");
    }
    cfg.points = spec.at("points").get<std::size_t>();
  }
  if (spec.contains("hi_quantile")) cfg.hi_quantile = number(spec, "hi_quantile");
  if (spec.contains("mono_tol")) cfg.mono_tol = number(spec, "mono_tol");
  try {
    validate(cfg);
  } catch (const Error& e) {
    parse_error(e.what());
  }
  return cfg;
}

json to_json(const GridConfig& cfg) {
  return {{"points", cfg.points}, {"hi_quantile", cfg.hi_quantile}, {"mono_tol", cfg.mono_tol}};
}

json to_json(const MarketConfig& m) {
  return {{"n", m.firms}, {"c", m.cost}, {"demand", to_json(m.demand)},
          {"mean_intercept", num(m.demand.mean())}};
}

json to_json(const ClassificationReport& r) {
  return {{"ifr", to_json(r.ifr)},
          {"dfr", to_json(r.dfr)},
          {"igfr", to_json(r.igfr)},
          {"dmrd", to_json(r.dmrd)},
          {"dgmrd", to_json(r.dgmrd)},
          {"bathtub", to_json(r.bathtub)},
          {"grid", to_json(r.grid_used)},
          {"grid_size", r.grid_size},
          {"scan_hi", num(r.scan_hi)},
          {"truncated", r.truncated},
          {"support_gap", r.support_gap}};
}

json to_json(const EquilibriumSet& eqs) {
  json roots = json::array();
  for (const auto& r : eqs.roots) {
    roots.push_back({{"total_output", num(r.total_output)},
                     {"per_firm", num(r.per_firm)},
                     {"bracket", {num(r.bracket_lo), num(r.bracket_hi)}},
                     {"l_residual", num(r.l_residual)},
                     {"foc_residual", num(r.foc_residual)},
                     {"foc_ok", r.foc_ok}});
  }
  return {{"roots", roots},
          {"scan_range", {num(eqs.scan_lo), num(eqs.scan_hi)}},
          {"complete_scan", eqs.complete_scan}};
}

json to_json(const UniquenessCertificate& c) {
  return {{"hazard_shape",
           {{"applies", c.hazard_shape_condition},
            {"density_at_zero", opt_num(c.density_at_zero)},
            {"density_bound", num(c.density_bound)},
            {"density_at_zero_ok", to_string(c.density_at_zero_ok)},
            {"hazard_monotone_or_bathtub", to_string(c.hazard_monotone_or_bathtub)}}},
          {"residual_class",
           {{"applies", c.class_condition}, {"dmrd", c.via_dmrd}, {"igfr", c.via_igfr}}},
          {"zero_cost_moment",
           {{"applies", c.zero_cost_moment_condition},
            {"zero_cost", c.zero_cost},
            {"dgmrd", c.dgmrd},
            {"moment_n_plus_1", num(c.moment_n_plus_1)},
            {"moment_finite", c.moment_finite}}},
          {"numeric_root_count", c.numeric_root_count},
          {"certified", c.certified},
          {"consistent", c.consistent}};
}

json to_json(const LogConcavityResult& lc) {
  json w = nullptr;
  if (lc.witness) {
    const auto& k = *lc.witness;
    w = {{"x", {num(k.x0), num(k.x1), num(k.x2)}},
         {"log_excess", {num(k.f0), num(k.f1), num(k.f2)}},
         {"second_difference", num(k.second_difference)}};
  }
  return {{"log_concave", lc.log_concave},
          {"witness", w},
          {"region_hi", num(lc.region_hi)},
          {"points", lc.points},
          {"max_second_difference", num(lc.max_second_difference)},
          {"tol", num(lc.tol)}};
}

json to_json(const DynamicsTrace& t) {
  return {{"converged", t.converged},
          {"iterations_used", t.iterations_used},
          {"limit", opt_num(t.limit)},
          {"final", t.iterates.empty() ? json::array() : json(t.iterates.back())}};
}

json to_json(const IdentityReport& rep) {
  return {{"mrd_slope", to_json(rep.mrd_slope)},
          {"l_slope", to_json(rep.l_slope)},
          {"revenue_slope", to_json(rep.revenue_slope)},
          {"price_slope", to_json(rep.price_slope)},
          {"max_rel_error", num(rep.max_error())}};
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_grid_csv(std::ostream& os, const std::vector<GridRow>& rows) {
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  os << "x,survival,density,hazard,gfr,mrd,gmrd\n";
  for (const auto& r : rows) {
    os << format_double(r.x) << ',' << format_double(r.survival) << ',' << opt(r.density) << ','
       << opt(r.hazard) << ',' << opt(r.gfr) << ',' << format_double(r.mrd) << ','
       << format_double(r.gmrd) << '\n';
  }
}

}  // namespace cournot
