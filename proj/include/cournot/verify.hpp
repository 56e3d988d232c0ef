#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "cournot/distribution.hpp"
#include "cournot/equilibrium.hpp"
#include "cournot/reliability.hpp"

namespace cournot {

// Oracles that check the equilibrium machinery by routes that do not share
// its code path: sampling, direct payoff maximization and finite differences.

struct MonteCarloEstimate {
  double estimate;
  double std_error;
};

/// Plain Monte Carlo estimate of E(alpha - X)_+ with inverse-cdf sampling.
/// Deterministic for a fixed (samples, seed); samples must be >= 1000.
MonteCarloEstimate mc_expected_price(const Distribution& d, double X, std::size_t samples,
                                     std::uint64_t seed);

/// Same estimator for several outputs, reusing one set of draws.
std::vector<MonteCarloEstimate> mc_expected_prices(const Distribution& d,
                                                   std::span<const double> outputs,
                                                   std::size_t samples, std::uint64_t seed);

/// One inverse-cdf draw per uniform; mixtures pick a component first.
double sample_inverse_cdf(const Distribution& d, std::mt19937_64& rng);

/// argmax over x >= 0 of x (P(x + opponents_total) - c). A coarse scan
/// picks the best cell, golden-section search narrows it, and the
/// stationarity condition P - c - x S = 0 polishes the result when it
/// changes sign across the final bracket. Returns 0 when no positive
/// output earns a positive payoff.
double best_response(const MarketConfig& m, double opponents_total);

struct DynamicsTrace {
  std::vector<std::vector<double>> iterates;  ///< per-firm outputs after each sweep
  bool converged = false;
  /// Common per-firm output when the limit is symmetric.
  std::optional<double> limit;
  int iterations_used = 0;
};

/// Gauss-Seidel best-response updates until the largest per-sweep change is
/// below dyn_tol. Non-convergence is reported, not thrown.
DynamicsTrace best_response_dynamics(const MarketConfig& m, std::vector<double> init,
                                     int max_iters, double dyn_tol = 1e-8);

struct IdentityCheck {
  std::string name;
  bool available = true;
  double max_rel_error = 0.0;
  std::size_t points_checked = 0;
  std::size_t points_skipped = 0;
};

/// Central finite differences against four closed-form derivative identities:
///   m' = h m - 1,  L' = h L + (g - (n + 1)) / n,  (x S)' = S (1 - g),  P' = -S.
/// Hazard-based checks skip points inside support gaps and are unavailable
/// without a density; the price check always runs.
struct IdentityReport {
  IdentityCheck mrd_slope;
  IdentityCheck l_slope;
  IdentityCheck revenue_slope;
  IdentityCheck price_slope;

  double max_error() const;
};

IdentityReport identity_battery(const MarketConfig& m, const GridConfig& cfg,
                                std::uint64_t seed, std::size_t points = 20);

}  // namespace cournot
