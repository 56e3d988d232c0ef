#include "cournot/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cournot/error.hpp"

namespace cournot {
namespace {

// Uniform on the open interval (0, 1) from the top 53 bits of one draw.
double open_uniform(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double relative_gap(double approx, double exact) {
  return std::abs(approx - exact) / std::max(1.0, std::abs(exact));
}

void record(IdentityCheck& check, double approx, double exact) {
  check.max_rel_error = std::max(check.max_rel_error, relative_gap(approx, exact));
  ++check.points_checked;
}

bool inside_support(const Distribution& d, double x) {
  return std::any_of(d.support_intervals().begin(), d.support_intervals().end(),
                     [x](const Interval& iv) { return x > iv.lo && x < iv.hi; });
}

}  // namespace

double sample_inverse_cdf(const Distribution& d, std::mt19937_64& rng) {
  if (const auto* mix = std::get_if<Mixture>(&d.family())) {
    const double u = open_uniform(rng);
    double acc = 0.0;
    for (const auto& c : mix->components) {
      acc += c.weight;
      if (u < acc) return sample_inverse_cdf(c.dist, rng);
    }
    return sample_inverse_cdf(mix->components.back().dist, rng);
  }
  if (const auto* sc = std::get_if<Scaled>(&d.family())) {
    return sc->factor * sample_inverse_cdf(*sc->base, rng);
  }
  const double u = open_uniform(rng);
  // The upper quantile keeps resolution for heavy right tails.
  return u < 0.5 ? quantile(d, u) : inverse_survival(d, 1.0 - u);
}

std::vector<MonteCarloEstimate> mc_expected_prices(const Distribution& d,
                                                   std::span<const double> outputs,
                                                   std::size_t samples, std::uint64_t seed) {
  if (samples < 1000) throw Error(ErrorCode::InvalidParameter, "Monte Carlo needs >= 1000 samples");
  std::vector<double> mean(outputs.size(), 0.0);
  std::vector<double> m2(outputs.size(), 0.0);
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < samples; ++i) {
    const double a = sample_inverse_cdf(d, rng);
    const double count = static_cast<double>(i + 1);
    for (std::size_t j = 0; j < outputs.size(); ++j) {
      const double v = std::max(a - outputs[j], 0.0);
      const double delta = v - mean[j];
      mean[j] += delta / count;
      m2[j] += delta * (v - mean[j]);
    }
  }
  std::vector<MonteCarloEstimate> out;
  const double n = static_cast<double>(samples);
  for (std::size_t j = 0; j < outputs.size(); ++j) {
    if (outputs[j] >= d.support_hi()) {
      out.push_back({0.0, 0.0});
      continue;
    }
    const double var = m2[j] / (n - 1.0);
    out.push_back({mean[j], std::sqrt(var / n)});
  }
  return out;
}

MonteCarloEstimate mc_expected_price(const Distribution& d, double X, std::size_t samples,
                                     std::uint64_t seed) {
  const double outputs[] = {X};
  return mc_expected_prices(d, outputs, samples, seed).front();
}

double best_response(const MarketConfig& m, double opponents_total) {
  if (!(opponents_total >= 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "opponents' output must be >= 0");
  }
  const Distribution& d = m.demand;
  const double y = opponents_total;
  auto margin = [&](double x) { return expected_price(m, x + y) - m.cost; };
  auto payoff = [&](double x) { return x * margin(x); };
  auto stationarity = [&](double x) { return margin(x) - x * survival(d, x + y); };

  if (margin(0.0) <= 0.0) return 0.0;

  // Search window: beyond it the margin is non-positive (or the tail is
  // negligible when c = 0 on unbounded support).
  double top = d.bounded() ? d.support_hi() : inverse_survival(d, 1e-12);
  if (m.cost > 0.0 && expected_price(m, top) < m.cost) {
    double lo = y;
    double hi = top;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (expected_price(m, mid) > m.cost ? lo : hi) = mid;
    }
    top = hi;
  }
  const double width = top - y;
  if (!(width > 0.0)) return 0.0;

  constexpr int kCells = 256;
  int best = 0;
  double best_value = 0.0;
  for (int i = 1; i <= kCells; ++i) {
    const double v = payoff(width * i / kCells);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  if (best == 0) return 0.0;
  const double cell_lo = width * std::max(best - 1, 0) / kCells;
  const double cell_hi = width * std::min(best + 1, kCells) / kCells;

  // Golden-section search on the payoff inside the winning cells.
  const double inv_phi = 1.0 / std::numbers::phi;
  double a = cell_lo;
  double b = cell_hi;
  double c = b - inv_phi * (b - a);
  double e = a + inv_phi * (b - a);
  double fc = payoff(c);
  double fe = payoff(e);
  for (int it = 0; it < 200 && b - a > 1e-14 * std::max(1.0, b); ++it) {
    if (fc >= fe) {
      b = e;
      e = c;
      fe = fc;
      c = b - inv_phi * (b - a);
      fc = payoff(c);
    } else {
      a = c;
      c = e;
      fc = fe;
      e = a + inv_phi * (b - a);
      fe = payoff(e);
    }
  }
  double x = 0.5 * (a + b);

  // The payoff is flat at its peak, so the golden result is only accurate to
  // about sqrt(eps); bisect the stationarity condition when it is bracketed.
  double lo = cell_lo;
  double hi = cell_hi;
  if (stationarity(lo) > 0.0 && stationarity(hi) < 0.0) {
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (stationarity(mid) > 0.0 ? lo : hi) = mid;
    }
    const double polished = 0.5 * (lo + hi);
    if (payoff(polished) >= payoff(x) - 1e-15 * std::abs(payoff(x))) x = polished;
  }
  return x;
}

DynamicsTrace best_response_dynamics(const MarketConfig& m, std::vector<double> init,
                                     int max_iters, double dyn_tol) {
  if (init.size() != static_cast<std::size_t>(m.firms)) {
    throw Error(ErrorCode::InvalidParameter, "initial profile needs one output per firm");
  }
  if (std::any_of(init.begin(), init.end(), [](double v) { return !(v >= 0.0); })) {
    throw Error(ErrorCode::InvalidParameter, "initial outputs must be >= 0");
  }
  DynamicsTrace trace;
  std::vector<double> x = std::move(init);
  double total = 0.0;
  for (double v : x) total += v;

  for (int it = 0; it < max_iters; ++it) {
    double change = 0.0;
    for (auto& xi : x) {
      const double others = std::max(total - xi, 0.0);
      const double next = best_response(m, others);
      change = std::max(change, std::abs(next - xi));
      total = others + next;
      xi = next;
    }
    trace.iterates.push_back(x);
    trace.iterations_used = it + 1;
    if (change < dyn_tol) {
      trace.converged = true;
      break;
    }
  }
  if (trace.converged) {
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    if (*hi - *lo <= 1e-6 * std::max(1.0, *hi)) trace.limit = total / m.firms;
  }
  return trace;
}

double IdentityReport::max_error() const {
  double e = 0.0;
  for (const IdentityCheck* c : {&mrd_slope, &l_slope, &revenue_slope, &price_slope}) {
    if (c->available) e = std::max(e, c->max_rel_error);
  }
  return e;
}

IdentityReport identity_battery(const MarketConfig& m, const GridConfig& cfg,
                                std::uint64_t seed, std::size_t points) {
  const Distribution& d = m.demand;
  IdentityReport rep;
  rep.mrd_slope.name = "mrd_slope";
  rep.l_slope.name = "l_slope";
  rep.revenue_slope.name = "revenue_slope";
  rep.price_slope.name = "price_slope";
  const bool with_density = d.has_density();
  for (IdentityCheck* c : {&rep.mrd_slope, &rep.l_slope, &rep.revenue_slope}) {
    c->available = with_density;
  }

  const double lo = quantile(d, 0.02);
  const double hi = std::min(quantile(d, 0.98), scan_upper(d, cfg));
  std::mt19937_64 rng(seed);
  std::size_t produced = 0;
  for (std::size_t attempt = 0; produced < points && attempt < 100 * points; ++attempt) {
    const double u = open_uniform(rng);
    const double x = produced % 2 == 0 ? quantile(d, 0.02 + 0.96 * u) : lo + (hi - lo) * u;
    const double step = 1e-4 * x;
    if (!(x - 2.0 * step > 0.0) || x + 2.0 * step >= d.support_hi()) continue;
    const bool near_kink = std::any_of(d.breakpoints().begin(), d.breakpoints().end(),
                                       [&](double b) { return std::abs(b - x) <= 2.0 * step; });
    if (near_kink) continue;
    ++produced;

    auto slope = [&](auto&& fn) { return (fn(x + step) - fn(x - step)) / (2.0 * step); };
    const double s = survival(d, x);
    record(rep.price_slope, slope([&](double t) { return expected_price(m, t); }), -s);

    if (!with_density) continue;
    if (!inside_support(d, x)) {
      ++rep.mrd_slope.points_skipped;
      ++rep.l_slope.points_skipped;
      ++rep.revenue_slope.points_skipped;
      continue;
    }
    const double h = *hazard(d, x);
    record(rep.mrd_slope, slope([&](double t) { return mrd(d, t); }), h * mrd(d, x) - 1.0);
    record(rep.l_slope, slope([&](double t) { return l_function(m, t); }),
           *l_function_derivative(m, x));
    record(rep.revenue_slope, slope([&](double t) { return t * survival(d, t); }),
           s * (1.0 - x * h));
  }
  return rep;
}

}  // namespace cournot
