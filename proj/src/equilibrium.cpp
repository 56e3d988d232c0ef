#include "cournot/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cournot/error.hpp"

namespace cournot {
namespace {

double survival_checked(const Distribution& d, double X) {
  if (!(X >= 0.0) || X >= d.support_hi()) {
    std::ostringstream msg;
    msg << "total output " << X << " outside [0, " << d.support_hi() << ")";
    throw Error(ErrorCode::OutOfSupport, msg.str());
  }
  const double s = survival(d, X);
  if (!(s > 0.0)) throw Error(ErrorCode::ZeroSurvival, "survival underflows");
  return s;
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

MarketConfig make_market(int firms, double cost, Distribution demand) {
  if (firms < 1) throw Error(ErrorCode::InvalidParameter, "number of firms must be >= 1");
  if (!(cost >= 0.0) || !std::isfinite(cost)) {
    throw Error(ErrorCode::InvalidParameter, "marginal cost must be finite and >= 0");
  }
  if (!(demand.mean() > cost)) {
    std::ostringstream msg;
    msg << "expected demand intercept " << demand.mean() << " does not exceed marginal cost "
        << cost;
    throw Error(ErrorCode::AssumptionViolated, msg.str());
  }
  return MarketConfig{firms, cost, std::move(demand)};
}

double expected_price(const MarketConfig& m, double X) {
  if (!(X >= 0.0)) throw Error(ErrorCode::OutOfSupport, "total output must be >= 0");
  return integrated_survival(m.demand, X);
}

double l_function(const MarketConfig& m, double X) {
  const double s = survival_checked(m.demand, X);
  return integrated_survival(m.demand, X) / s - m.cost / s - X / m.firms;
}

std::optional<double> l_function_derivative(const MarketConfig& m, double X) {
  const auto h = hazard(m.demand, X);
  if (!h) return std::nullopt;
  const double n = m.firms;
  return *h * l_function(m, X) + (X * *h - (n + 1.0)) / n;
}

double foc_residual(const MarketConfig& m, double X) {
  const double per_firm = X / m.firms;
  return partial_expectation(m.demand, X) - m.cost -
         (m.firms + 1.0) * per_firm * survival(m.demand, X);
}

EquilibriumSet find_equilibria(const MarketConfig& m, const GridConfig& cfg,
                               const SolverOptions& opts) {
  if (!(m.demand.mean() > m.cost)) {
    throw Error(ErrorCode::AssumptionViolated, "expected demand intercept must exceed cost");
  }
  std::vector<double> xs = scan_grid(m.demand, cfg);
  // L(0) = E[alpha] - c > 0 anchors the scan on the left.
  xs.insert(xs.begin(), 0.0);
  std::vector<double> ls(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) ls[i] = l_function(m, xs[i]);

  EquilibriumSet out;
  out.scan_lo = xs.front();
  out.scan_hi = xs.back();
  out.complete_scan = m.demand.bounded();
  const double foc_bound = opts.foc_tol * std::max(1.0, m.demand.mean());

  auto record = [&](double root, double lo, double hi) {
    EquilibriumRoot r;
    r.total_output = root;
    r.per_firm = root / m.firms;
    r.bracket_lo = lo;
    r.bracket_hi = hi;
    r.l_residual = l_function(m, root);
    r.foc_residual = foc_residual(m, root);
    r.foc_ok = std::abs(r.foc_residual) < foc_bound;
    out.roots.push_back(r);
  };

  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (ls[i] == 0.0) {
      record(xs[i], xs[i], xs[i]);
      continue;
    }
    if (ls[i - 1] == 0.0 || sign(ls[i - 1]) == sign(ls[i])) continue;
    double lo = xs[i - 1];
    double hi = xs[i];
    const int s_lo = sign(ls[i - 1]);
    for (int it = 0; it < opts.max_bisections && hi - lo > opts.solver_tol; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double v = l_function(m, mid);
      if (v == 0.0) {
        lo = hi = mid;
        break;
      }
      if (sign(v) == s_lo) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    record(0.5 * (lo + hi), xs[i - 1], xs[i]);
  }
  return out;
}

UniquenessCertificate uniqueness_certificate(const MarketConfig& m,
                                             const ClassificationReport& report,
                                             const EquilibriumSet& eqs) {
  UniquenessCertificate cert;
  const Distribution& d = m.demand;

  cert.density_bound = 1.0 / (d.mean() - m.cost);
  if (d.support_lo() == 0.0 && d.has_density()) {
    cert.density_at_zero = density(d, 0.0);
    cert.density_at_zero_ok =
        *cert.density_at_zero < cert.density_bound ? Verdict::Holds : Verdict::Fails;
  }
  if (report.ifr.verdict != Verdict::NotAvailable) {
    const bool shaped = report.ifr.holds() || report.dfr.holds() || report.bathtub.holds();
    cert.hazard_monotone_or_bathtub = shaped ? Verdict::Holds : Verdict::Fails;
  }
  cert.hazard_shape_condition = cert.density_at_zero_ok == Verdict::Holds &&
                                cert.hazard_monotone_or_bathtub == Verdict::Holds;

  cert.via_dmrd = report.dmrd.holds();
  cert.via_igfr = report.igfr.holds();
  cert.class_condition = cert.via_dmrd || cert.via_igfr;

  cert.zero_cost = m.cost == 0.0;
  cert.dgmrd = report.dgmrd.holds();
  cert.moment_n_plus_1 = moment(d, m.firms + 1);
  cert.moment_finite = std::isfinite(cert.moment_n_plus_1);
  cert.zero_cost_moment_condition = cert.zero_cost && cert.dgmrd && cert.moment_finite;

  cert.numeric_root_count = eqs.roots.size();
  cert.certified =
      cert.hazard_shape_condition || cert.class_condition || cert.zero_cost_moment_condition;
  cert.consistent = !(cert.certified && cert.numeric_root_count != 1);
  return cert;
}

LogConcavityResult log_concavity_check(const MarketConfig& m, const GridConfig& cfg,
                                       double tol) {
  const Distribution& d = m.demand;
  const double margin = d.mean() - m.cost;
  if (!(margin > 0.0)) {
    throw Error(ErrorCode::EmptyRegion, "expected price never exceeds marginal cost");
  }

  // Right end: where P - c has fallen to a 1e-6 fraction of its value at 0,
  // so log(P - c) stays well conditioned.
  const double floor = 1e-6 * margin;
  double hi = scan_upper(d, cfg);
  if (expected_price(m, hi) - m.cost < floor) {
    double lo = 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (expected_price(m, mid) - m.cost > floor) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    hi = lo;
  }

  LogConcavityResult out;
  out.tol = tol;
  out.region_hi = hi;
  out.points = std::max<std::size_t>(cfg.points, 512);
  const std::size_t n = out.points;
  std::vector<double> xs(n);
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = hi * static_cast<double>(i) / static_cast<double>(n - 1);
    const double excess = expected_price(m, xs[i]) - m.cost;
    if (!(excess > 0.0)) {
      throw Error(ErrorCode::EmptyRegion, "expected price fell to marginal cost inside region");
    }
    f[i] = std::log(excess);
  }
  out.max_second_difference = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double d2 = f[i + 1] - 2.0 * f[i] + f[i - 1];
    out.max_second_difference = std::max(out.max_second_difference, d2);
    if (d2 > tol && !out.witness) {
      out.log_concave = false;
      out.witness = ConcavityWitness{xs[i - 1], xs[i], xs[i + 1], f[i - 1], f[i], f[i + 1], d2};
    }
  }
  return out;
}

}  // namespace cournot
