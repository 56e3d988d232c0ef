#include "cournot/reliability.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "cournot/error.hpp"

namespace cournot {
namespace {

void check_point(const Distribution& d, double x) {
  if (!(x >= 0.0) || x >= d.support_hi()) {
    std::ostringstream msg;
    msg << "point " << x << " outside [0, " << d.support_hi() << ")";
    throw Error(ErrorCode::OutOfSupport, msg.str());
  }
}

double positive_survival(const Distribution& d, double x) {
  const double s = survival(d, x);
  if (!(s > 0.0)) {
    std::ostringstream msg;
    msg << "survival underflows at x = " << x;
    throw Error(ErrorCode::ZeroSurvival, msg.str());
  }
  return s;
}

std::vector<double> log_spaced(double from, double to, std::size_t count) {
  std::vector<double> out;
  const double a = std::log(from);
  const double b = std::log(to);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1)));
  }
  return out;
}

// -1, 0 or +1 for a step from a to b, with relative slack tol.
int step_sign(double a, double b, double tol) {
  if (a == b) return 0;
  if (!std::isfinite(a) || !std::isfinite(b)) return b > a ? 1 : -1;
  const double slack = tol * std::max(std::abs(a), std::abs(b));
  if (b > a + slack) return 1;
  if (b < a - slack) return -1;
  return 0;
}

ClassFlag flag_from(std::optional<Witness> w) {
  ClassFlag f;
  f.verdict = w ? Verdict::Fails : Verdict::Holds;
  f.witness = w;
  return f;
}

ClassFlag bathtub_flag(const std::vector<double>& xs, const std::vector<double>& h, double tol) {
  bool seen_up = false;
  bool seen_down = false;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const int s = step_sign(h[i], h[i + 1], tol);
    if (s > 0) seen_up = true;
    if (s < 0) {
      if (seen_up) return flag_from(Witness{xs[i], xs[i + 1], h[i], h[i + 1]});
      seen_down = true;
    }
  }
  if (seen_up || seen_down) return flag_from(std::nullopt);
  // Flat hazard on the whole grid: no strict change anywhere.
  return flag_from(Witness{xs.front(), xs.back(), h.front(), h.back()});
}

}  // namespace

void validate(const GridConfig& cfg) {
  if (cfg.points < 2) throw Error(ErrorCode::InvalidParameter, "grid needs at least 2 points");
  if (!(cfg.hi_quantile > 0.0 && cfg.hi_quantile < 1.0)) {
    throw Error(ErrorCode::InvalidParameter, "hi_quantile must lie in (0, 1)");
  }
  if (!(cfg.mono_tol >= 0.0)) throw Error(ErrorCode::InvalidParameter, "mono_tol must be >= 0");
}

double scan_upper(const Distribution& d, const GridConfig& cfg) {
  const double x = inverse_survival(d, 1.0 - cfg.hi_quantile);
  // The upper quantile can round onto a finite support end.
  return x < d.support_hi() ? x : std::nextafter(d.support_hi(), d.support_lo());
}

std::vector<double> scan_grid(const Distribution& d, const GridConfig& cfg) {
  validate(cfg);
  const double upper = scan_upper(d, cfg);
  const double q_min = 1.0 - cfg.hi_quantile;
  const std::size_t n = cfg.points;
  const std::size_t body = std::max<std::size_t>(n / 2, 2);
  const std::size_t tail = std::max<std::size_t>(n / 4, 2);

  std::vector<double> xs;
  xs.reserve(2 * n);
  for (std::size_t i = 1; i <= body; ++i) {
    xs.push_back(quantile(d, cfg.hi_quantile * static_cast<double>(i) / static_cast<double>(body)));
  }
  if (q_min < 0.5) {
    for (double q : log_spaced(0.5, q_min, tail)) xs.push_back(inverse_survival(d, q));
    for (double p : log_spaced(q_min, 0.5, tail)) xs.push_back(quantile(d, p));
  }
  if (d.support_lo() > 0.0) {
    const std::size_t below = std::max<std::size_t>(n / 8, 2);
    for (std::size_t i = 1; i <= below; ++i) {
      xs.push_back(d.support_lo() * static_cast<double>(i) / static_cast<double>(below));
    }
  }
  const auto& ivs = d.support_intervals();
  const std::size_t gap_points = std::max<std::size_t>(n / 16, 2);
  for (std::size_t k = 0; k + 1 < ivs.size(); ++k) {
    const double a = ivs[k].hi;
    const double b = ivs[k + 1].lo;
    for (std::size_t i = 1; i <= gap_points; ++i) {
      xs.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(gap_points + 1));
    }
  }

  std::erase_if(xs, [upper](double x) { return !(x > 0.0) || x > upper; });
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

std::optional<double> hazard(const Distribution& d, double x) {
  check_point(d, x);
  const double s = positive_survival(d, x);
  const auto f = density(d, x);
  if (!f) return std::nullopt;
  return *f / s;
}

std::optional<double> gfr(const Distribution& d, double x) {
  const auto h = hazard(d, x);
  if (!h) return std::nullopt;
  return x * *h;
}

double mrd(const Distribution& d, double x) {
  if (!(x >= 0.0)) throw Error(ErrorCode::OutOfSupport, "mrd requires x >= 0");
  if (x >= d.support_hi()) return 0.0;
  return integrated_survival(d, x) / positive_survival(d, x);
}

double gmrd(const Distribution& d, double x) {
  if (!(x > 0.0)) throw Error(ErrorCode::NonPositivePoint, "gmrd requires x > 0");
  return mrd(d, x) / x;
}

std::optional<Witness> monotone_violation(const std::vector<double>& xs,
                                          const std::vector<double>& values,
                                          Direction dir, double tol) {
  const int bad = dir == Direction::NonDecreasing ? -1 : 1;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (step_sign(values[i], values[i + 1], tol) == bad) {
      return Witness{xs[i], xs[i + 1], values[i], values[i + 1]};
    }
  }
  return std::nullopt;
}

double violation_size(const Witness& w) {
  const double scale = std::max(std::abs(w.f_x1), std::abs(w.f_x2));
  if (scale == 0.0) return 0.0;
  const double diff = std::abs(w.f_x2 - w.f_x1);
  return std::isfinite(diff) ? diff / scale : std::numeric_limits<double>::infinity();
}

void apply_implication_closure(ClassificationReport& r) {
  const double slack = kClosureSlack * r.grid_used.mono_tol;
  const std::array<std::pair<ClassFlag*, ClassFlag*>, 4> rules{{
      {&r.ifr, &r.igfr},
      {&r.ifr, &r.dmrd},
      {&r.igfr, &r.dgmrd},
      {&r.dmrd, &r.dgmrd},
  }};
  // Rules are ordered so that one pass propagates the chains ifr => igfr => dgmrd
  // and ifr => dmrd => dgmrd.
  for (auto [premise, conclusion] : rules) {
    if (!premise->holds() || conclusion->verdict != Verdict::Fails) continue;
    if (conclusion->witness && violation_size(*conclusion->witness) <= slack) {
      conclusion->verdict = Verdict::Holds;
      conclusion->closure_forced = true;
      conclusion->witness.reset();
      continue;
    }
    std::ostringstream msg;
    msg << "class implication violated on the grid";
    if (conclusion->witness) {
      const auto& w = *conclusion->witness;
      msg << " (witness x1=" << w.x1 << ", x2=" << w.x2 << ", f=" << w.f_x1 << " -> "
          << w.f_x2 << ")";
    }
    msg << "; refine the grid";
    throw Error(ErrorCode::InconsistentVerdict, msg.str());
  }
}

ClassificationReport classify(const Distribution& d, const GridConfig& cfg) {
  const std::vector<double> xs = scan_grid(d, cfg);
  if (xs.size() < 2) throw Error(ErrorCode::InvalidParameter, "scan grid collapsed to < 2 points");

  ClassificationReport r;
  r.grid_used = cfg;
  r.grid_size = xs.size();
  r.scan_hi = xs.back();
  r.truncated = !d.bounded();
  r.support_gap = d.has_gap();

  std::vector<double> m(xs.size());
  std::vector<double> ell(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    m[i] = mrd(d, xs[i]);
    ell[i] = m[i] / xs[i];
  }
  r.dmrd = flag_from(monotone_violation(xs, m, Direction::NonIncreasing, cfg.mono_tol));
  r.dgmrd = flag_from(monotone_violation(xs, ell, Direction::NonIncreasing, cfg.mono_tol));

  if (d.has_density()) {
    std::vector<double> h(xs.size());
    std::vector<double> g(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      h[i] = *hazard(d, xs[i]);
      g[i] = xs[i] * h[i];
    }
    r.ifr = flag_from(monotone_violation(xs, h, Direction::NonDecreasing, cfg.mono_tol));
    r.dfr = flag_from(monotone_violation(xs, h, Direction::NonIncreasing, cfg.mono_tol));
    r.igfr = flag_from(monotone_violation(xs, g, Direction::NonDecreasing, cfg.mono_tol));
    r.bathtub = bathtub_flag(xs, h, cfg.mono_tol);

    if (d.has_gap() && r.igfr.holds()) {
      // A support gap rules out a non-decreasing generalized failure rate.
      const double gap_start = d.support_intervals().front().hi;
      const double gap_mid = 0.5 * (gap_start + d.support_intervals()[1].lo);
      const auto before = std::lower_bound(xs.begin(), xs.end(), gap_start);
      const double x1 = before == xs.begin() ? xs.front() : *(before - 1);
      r.igfr.verdict = Verdict::Fails;
      r.igfr.witness = Witness{x1, gap_mid, *gfr(d, x1), *gfr(d, gap_mid)};
    }
  }

  apply_implication_closure(r);
  return r;
}

std::vector<GridRow> grid_dump(const Distribution& d, const GridConfig& cfg) {
  std::vector<GridRow> rows;
  for (double x : scan_grid(d, cfg)) {
    GridRow row{x, survival(d, x), density(d, x), hazard(d, x), gfr(d, x), mrd(d, x), gmrd(d, x)};
    rows.push_back(row);
  }
  return rows;
}

}  // namespace cournot
