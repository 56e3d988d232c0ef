#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "cournot/distribution.hpp"
#include "cournot/equilibrium.hpp"
#include "cournot/reliability.hpp"
#include "cournot/verify.hpp"

namespace cournot {

using json = nlohmann::json;

/// Parses {"family": ..., "params": {...}}; mixtures carry "components" and
/// "weights", scaled laws carry "base" and params.factor. An optional
/// "density": false disables the density accessor. Throws ConfigParse on
/// malformed input and InvalidParameter on out-of-range parameters.
Distribution distribution_from_json(const json& spec);
json to_json(const Distribution& d);

GridConfig grid_from_json(const json& spec);
json to_json(const GridConfig& cfg);

json to_json(const MarketConfig& m);
json to_json(const ClassificationReport& r);
json to_json(const EquilibriumSet& eqs);
json to_json(const UniquenessCertificate& cert);
json to_json(const LogConcavityResult& lc);
json to_json(const DynamicsTrace& trace);
json to_json(const IdentityReport& rep);

std::string_view to_string(Verdict v) noexcept;

/// Shortest decimal that round-trips, independent of the global locale.
/// Non-finite values print as "inf", "-inf" or "nan".
std::string format_double(double v);

/// Header x,survival,density,hazard,gfr,mrd,gmrd; unavailable fields empty.
void write_grid_csv(std::ostream& os, const std::vector<GridRow>& rows);

}  // namespace cournot
