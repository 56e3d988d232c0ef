#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cournot/distribution.hpp"

namespace cournot {

/// Resolution of the finite grids used to certify monotonicity and to scan
/// for equilibria.
struct GridConfig {
  std::size_t points = 1024;
  /// Upper cut of the scan, as a quantile level, used for every support.
  double hi_quantile = 1.0 - 1e-9;
  /// Relative slack for weak monotonicity.
  double mono_tol = 1e-9;
};

void validate(const GridConfig& cfg);

/// Sorted scan points in (0, X_max) where X_max is the hi_quantile point.
/// The grid mixes uniform and logarithmic quantile spacing so both tails are
/// resolved, samples [0, support_lo) linearly when the support starts above
/// zero, and places points inside every support gap.
std::vector<double> scan_grid(const Distribution& d, const GridConfig& cfg);

/// Upper end of the scanned range: support_hi is never reached, so this is
/// the hi_quantile point for every distribution.
double scan_upper(const Distribution& d, const GridConfig& cfg);

// Shape functions. Hazard-based ones return nullopt when the density is
// unavailable and throw OutOfSupport / ZeroSurvival outside [0, H).

std::optional<double> hazard(const Distribution& d, double x);
std::optional<double> gfr(const Distribution& d, double x);
/// Mean residual demand E(a - x | a > x); zero at and beyond support_hi.
double mrd(const Distribution& d, double x);
/// mrd(x) / x for x > 0.
double gmrd(const Distribution& d, double x);

enum class Verdict { Holds, Fails, NotAvailable };

/// Two grid points demonstrating a monotonicity failure.
struct Witness {
  double x1;
  double x2;
  double f_x1;
  double f_x2;
};

struct ClassFlag {
  Verdict verdict = Verdict::NotAvailable;
  std::optional<Witness> witness;
  /// Set when the implication closure overrode a marginal raw grid failure.
  bool closure_forced = false;

  bool holds() const noexcept { return verdict == Verdict::Holds; }
};

struct ClassificationReport {
  ClassFlag ifr;      ///< hazard non-decreasing
  ClassFlag dfr;      ///< hazard non-increasing
  ClassFlag igfr;     ///< generalized failure rate non-decreasing
  ClassFlag dmrd;     ///< mean residual demand non-increasing
  ClassFlag dgmrd;    ///< generalized mean residual demand non-increasing
  ClassFlag bathtub;  ///< hazard non-increasing then non-decreasing, both strictly somewhere
  GridConfig grid_used;
  std::size_t grid_size = 0;
  double scan_hi = 0.0;
  /// True when support_hi is infinite and verdicts only cover [0, scan_hi].
  bool truncated = false;
  bool support_gap = false;
};

/// Classifies d into the failure-rate and residual-demand classes by
/// checking weak monotonicity on scan_grid(d, cfg). Raw verdicts are closed
/// under ifr => igfr, ifr => dmrd, igfr => dgmrd, dmrd => dgmrd; a marginal
/// violation (within closure slack) of an implied flag is overridden, a
/// larger one throws InconsistentVerdict.
ClassificationReport classify(const Distribution& d, const GridConfig& cfg = {});

enum class Direction { NonDecreasing, NonIncreasing };

/// First consecutive pair violating the direction beyond relative slack tol.
std::optional<Witness> monotone_violation(const std::vector<double>& xs,
                                          const std::vector<double>& values,
                                          Direction dir, double tol);

/// Relative size of a witness's violation, |f_x2 - f_x1| / max(|f_x1|, |f_x2|).
double violation_size(const Witness& w);

/// Multiple of mono_tol within which the closure overrides a raw failure.
inline constexpr double kClosureSlack = 1e4;

/// Applies the class implications to raw verdicts in place.
void apply_implication_closure(ClassificationReport& report);

/// One row of a grid dump: absent fields are nullopt.
struct GridRow {
  double x;
  double survival;
  std::optional<double> density;
  std::optional<double> hazard;
  std::optional<double> gfr;
  double mrd;
  double gmrd;
};

std::vector<GridRow> grid_dump(const Distribution& d, const GridConfig& cfg = {});

}  // namespace cournot
