#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cournot/distribution.hpp"
#include "cournot/reliability.hpp"

namespace cournot {

/// A symmetric Cournot market with inverse demand (alpha - X)_+ (unit slope),
/// n identical firms and constant marginal cost c.
struct MarketConfig {
  int firms;
  double cost;
  Distribution demand;
};

/// Validates n >= 1, c >= 0 and the standing assumption E[alpha] > c
/// (AssumptionViolated otherwise).
MarketConfig make_market(int firms, double cost, Distribution demand);

struct SolverOptions {
  double solver_tol = 1e-10;  ///< bracket width on total output
  int max_bisections = 200;
  double foc_tol = 1e-8;      ///< scaled by max(1, E[alpha])
};

/// Expected price at total output X: E(alpha - X)_+.
double expected_price(const MarketConfig& m, double X);

/// L(X) = m(X) - c / S(X) - X / n on total output X. Symmetric equilibria
/// are its positive roots, with per-firm output X / n.
double l_function(const MarketConfig& m, double X);

/// h(X) L(X) + (g(X) - (n + 1)) / n; nullopt without a density.
std::optional<double> l_function_derivative(const MarketConfig& m, double X);

/// E[alpha; alpha > X] - c - (n + 1) x S(X) with x = X / n: the first-order
/// condition of a symmetric equilibrium, evaluated through quadrature of the
/// density rather than through the residual-demand route used by L.
double foc_residual(const MarketConfig& m, double X);

struct EquilibriumRoot {
  double total_output;
  double per_firm;
  double bracket_lo;
  double bracket_hi;
  double l_residual;
  double foc_residual;
  bool foc_ok;
};

struct EquilibriumSet {
  std::vector<EquilibriumRoot> roots;  ///< ascending in total output
  double scan_lo = 0.0;
  double scan_hi = 0.0;
  /// False when the support is unbounded and roots beyond scan_hi could exist.
  bool complete_scan = true;
};

/// Sign-scan of L over scan_grid, each sign change refined by bisection.
/// Tangential roots (no sign change) are not detected. An empty set is a
/// valid answer: with c = 0 and a heavy tail L can stay positive.
EquilibriumSet find_equilibria(const MarketConfig& m, const GridConfig& cfg = {},
                               const SolverOptions& opts = {});

/// Which sufficient conditions for a unique symmetric equilibrium hold, and
/// whether they agree with the numeric root count.
struct UniquenessCertificate {
  // Hazard-shape route: f(0+) < 1 / (E[alpha] - c) together with a
  // monotone or bathtub-shaped hazard.
  Verdict density_at_zero_ok = Verdict::NotAvailable;
  std::optional<double> density_at_zero;
  double density_bound = 0.0;
  Verdict hazard_monotone_or_bathtub = Verdict::NotAvailable;
  bool hazard_shape_condition = false;

  // Residual-class route: DMRD or IGFR.
  bool via_dmrd = false;
  bool via_igfr = false;
  bool class_condition = false;

  // Zero-cost route: c = 0, DGMRD and a finite (n + 1)-th moment.
  bool zero_cost = false;
  bool dgmrd = false;
  double moment_n_plus_1 = 0.0;
  bool moment_finite = false;
  bool zero_cost_moment_condition = false;

  std::size_t numeric_root_count = 0;
  bool certified = false;
  /// False exactly when some condition certifies uniqueness but the scan
  /// did not find one root.
  bool consistent = true;
};

UniquenessCertificate uniqueness_certificate(const MarketConfig& m,
                                             const ClassificationReport& report,
                                             const EquilibriumSet& eqs);

struct ConcavityWitness {
  double x0, x1, x2;
  double f0, f1, f2;
  double second_difference;
};

struct LogConcavityResult {
  bool log_concave = true;
  std::optional<ConcavityWitness> witness;
  double region_hi = 0.0;
  std::size_t points = 0;
  double max_second_difference = 0.0;
  double tol = 0.0;
};

/// Checks concavity of log(P(X) - c) on a uniform grid of at least 512
/// points over the region where P(X) - c exceeds 1e-6 (E[alpha] - c),
/// capped at the scan upper end. Second differences above tol fail.
LogConcavityResult log_concavity_check(const MarketConfig& m, const GridConfig& cfg = {},
                                       double tol = 1e-7);

}  // namespace cournot
