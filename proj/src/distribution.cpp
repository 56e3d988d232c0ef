#include "cournot/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "cournot/error.hpp"
#include "cournot/quadrature.hpp"

namespace cournot {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::InvalidParameter, what);
}

void require(bool ok, const char* family, const char* condition) {
  if (!ok) {
    std::ostringstream msg;
    msg << family << ": parameter check failed (" << condition << ")";
    invalid(msg.str());
  }
}

bool finite(double v) { return std::isfinite(v); }

// Standard normal helpers written in terms of erfc so both tails keep
// relative accuracy.
double normal_sf(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }
double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }
double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}
double normal_isf(double q) {
  return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * q);
}

double truncnorm_mass(const TruncatedNormal& t) { return normal_sf(-t.mu / t.sigma); }

// Right limit of a density of the form C x^(k-1) near zero.
double power_density_at_zero(double shape, double value_at_shape_one) {
  if (shape < 1.0) return kInf;
  if (shape == 1.0) return value_at_shape_one;
  return 0.0;
}

double leaf_mean(const Family& fam) {
  return std::visit(
      overloaded{
          [](const Uniform& u) { return 0.5 * (u.lo + u.hi); },
          [](const Exponential& e) { return 1.0 / e.rate; },
          [](const Gamma& g) { return g.shape * g.scale; },
          [](const Weibull& w) { return w.scale * std::tgamma(1.0 + 1.0 / w.shape); },
          [](const Beta& b) { return b.a / (b.a + b.b); },
          [](const Pareto& p) { return p.alpha * p.xm / (p.alpha - 1.0); },
          [](const LogNormal& l) { return std::exp(l.mu + 0.5 * l.sigma * l.sigma); },
          [](const TruncatedNormal& t) {
            const double z = -t.mu / t.sigma;
            return t.mu + t.sigma * normal_pdf(z) / truncnorm_mass(t);
          },
          [](const Mixture& m) {
            double s = 0.0;
            for (const auto& c : m.components) s += c.weight * c.dist.mean();
            return s;
          },
          [](const Scaled& s) { return s.factor * s.base->mean(); },
      },
      fam);
}

std::vector<Interval> merge_intervals(std::vector<Interval> v) {
  std::sort(v.begin(), v.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> out;
  for (const auto& iv : v) {
    if (!out.empty() && iv.lo <= out.back().hi) {
      out.back().hi = std::max(out.back().hi, iv.hi);
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

void sort_unique(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Bisection on a monotone predicate over [lo, hi]; hi may be +inf, in which
// case it is found by doubling.
template <class Above>
double bisect_monotone(double lo, double hi, Above above) {
  if (!std::isfinite(hi)) {
    double step = std::max(1.0, std::abs(lo));
    hi = lo + step;
    while (!above(hi)) {
      lo = hi;
      step *= 2.0;
      hi = lo + step;
      if (!std::isfinite(hi)) return hi;
    }
  }
  for (int i = 0; i < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * std::abs(hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (above(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

Distribution::Distribution(Family family) : family_(std::move(family)) {
  std::visit(
      overloaded{
          [&](const Uniform& u) {
            lo_ = u.lo;
            hi_ = u.hi;
          },
          [&](const Beta&) {
            lo_ = 0.0;
            hi_ = 1.0;
          },
          [&](const Pareto& p) {
            lo_ = p.xm;
            hi_ = kInf;
          },
          [&](const Mixture& m) {
            lo_ = kInf;
            hi_ = 0.0;
            std::vector<Interval> ivs;
            for (const auto& c : m.components) {
              lo_ = std::min(lo_, c.dist.support_lo());
              hi_ = std::max(hi_, c.dist.support_hi());
              has_density_ = has_density_ && c.dist.has_density();
              ivs.insert(ivs.end(), c.dist.support_intervals().begin(),
                         c.dist.support_intervals().end());
              breakpoints_.insert(breakpoints_.end(), c.dist.breakpoints().begin(),
                                  c.dist.breakpoints().end());
            }
            intervals_ = merge_intervals(std::move(ivs));
          },
          [&](const Scaled& s) {
            lo_ = s.factor * s.base->support_lo();
            hi_ = s.factor * s.base->support_hi();
            has_density_ = s.base->has_density();
            for (const auto& iv : s.base->support_intervals()) {
              intervals_.push_back({s.factor * iv.lo, s.factor * iv.hi});
            }
            for (double b : s.base->breakpoints()) breakpoints_.push_back(s.factor * b);
          },
          [&](const auto&) {
            lo_ = 0.0;
            hi_ = kInf;
          },
      },
      family_);
  if (intervals_.empty()) intervals_.push_back({lo_, hi_});
  for (const auto& iv : intervals_) {
    if (std::isfinite(iv.lo)) breakpoints_.push_back(iv.lo);
    if (std::isfinite(iv.hi)) breakpoints_.push_back(iv.hi);
  }
  sort_unique(breakpoints_);
  mean_ = leaf_mean(family_);
  if (!(mean_ > 0.0) || !std::isfinite(mean_)) {
    invalid("distribution must have a finite positive mean");
  }
}

Distribution Distribution::uniform(double lo, double hi) {
  require(finite(lo) && finite(hi) && lo >= 0.0 && hi > lo, "Uniform", "0 <= lo < hi < inf");
  return Distribution(Uniform{lo, hi});
}

Distribution Distribution::exponential(double rate) {
  require(finite(rate) && rate > 0.0, "Exponential", "rate > 0");
  return Distribution(Exponential{rate});
}

Distribution Distribution::gamma(double shape, double scale) {
  require(finite(shape) && shape > 0.0, "Gamma", "shape > 0");
  require(finite(scale) && scale > 0.0, "Gamma", "scale > 0");
  return Distribution(Gamma{shape, scale});
}

Distribution Distribution::weibull(double shape, double scale) {
  require(finite(shape) && shape > 0.0, "Weibull", "shape > 0");
  require(finite(scale) && scale > 0.0, "Weibull", "scale > 0");
  return Distribution(Weibull{shape, scale});
}

Distribution Distribution::beta(double a, double b) {
  require(finite(a) && a > 0.0, "Beta", "a > 0");
  require(finite(b) && b > 0.0, "Beta", "b > 0");
  return Distribution(Beta{a, b});
}

Distribution Distribution::pareto(double xm, double alpha) {
  require(finite(xm) && xm > 0.0, "Pareto", "xm > 0");
  require(finite(alpha) && alpha > 1.0, "Pareto", "alpha > 1 (finite mean)");
  return Distribution(Pareto{xm, alpha});
}

Distribution Distribution::lognormal(double mu, double sigma) {
  require(finite(mu), "LogNormal", "finite mu");
  require(finite(sigma) && sigma > 0.0, "LogNormal", "sigma > 0");
  return Distribution(LogNormal{mu, sigma});
}

Distribution Distribution::truncated_normal(double mu, double sigma) {
  require(finite(mu), "TruncatedNormal", "finite mu");
  require(finite(sigma) && sigma > 0.0, "TruncatedNormal", "sigma > 0");
  require(mu / sigma > -30.0, "TruncatedNormal", "mu / sigma > -30 (non-negligible mass above 0)");
  return Distribution(TruncatedNormal{mu, sigma});
}

Distribution Distribution::mixture(std::vector<MixtureComponent> components) {
  require(components.size() >= 2, "Mixture", "at least two components");
  double total = 0.0;
  for (const auto& c : components) {
    require(c.weight > 0.0 && c.weight < 1.0, "Mixture", "weights in (0, 1)");
    total += c.weight;
  }
  require(std::abs(total - 1.0) <= 1e-12, "Mixture", "weights sum to 1");
  return Distribution(Mixture{std::move(components)});
}

std::string_view Distribution::family_name() const noexcept {
  return std::visit(overloaded{
                        [](const Uniform&) { return "Uniform"; },
                        [](const Exponential&) { return "Exponential"; },
                        [](const Gamma&) { return "Gamma"; },
                        [](const Weibull&) { return "Weibull"; },
                        [](const Beta&) { return "Beta"; },
                        [](const Pareto&) { return "Pareto"; },
                        [](const LogNormal&) { return "LogNormal"; },
                        [](const TruncatedNormal&) { return "TruncatedNormal"; },
                        [](const Mixture&) { return "Mixture"; },
                        [](const Scaled&) { return "Scaled"; },
                    },
                    family_);
}

bool Distribution::bounded() const noexcept { return std::isfinite(hi_); }

Distribution Distribution::without_density() const {
  Distribution copy = *this;
  copy.has_density_ = false;
  return copy;
}

double survival(const Distribution& d, double x) {
  if (x <= d.support_lo()) return 1.0;
  if (x >= d.support_hi()) return 0.0;
  namespace bm = boost::math;
  return std::visit(
      overloaded{
          [x](const Uniform& u) { return (u.hi - x) / (u.hi - u.lo); },
          [x](const Exponential& e) { return std::exp(-e.rate * x); },
          [x](const Gamma& g) { return bm::gamma_q(g.shape, x / g.scale); },
          [x](const Weibull& w) { return std::exp(-std::pow(x / w.scale, w.shape)); },
          [x](const Beta& b) { return bm::ibetac(b.a, b.b, x); },
          [x](const Pareto& p) { return std::pow(p.xm / x, p.alpha); },
          [x](const LogNormal& l) { return normal_sf((std::log(x) - l.mu) / l.sigma); },
          [x](const TruncatedNormal& t) {
            return normal_sf((x - t.mu) / t.sigma) / truncnorm_mass(t);
          },
          [x](const Mixture& m) {
            double s = 0.0;
            for (const auto& c : m.components) s += c.weight * survival(c.dist, x);
            return s;
          },
          [x](const Scaled& s) { return survival(*s.base, x / s.factor); },
      },
      d.family());
}

double cdf(const Distribution& d, double x) {
  if (x <= d.support_lo()) return 0.0;
  if (x >= d.support_hi()) return 1.0;
  namespace bm = boost::math;
  return std::visit(
      overloaded{
          [x](const Gamma& g) { return bm::gamma_p(g.shape, x / g.scale); },
          [x](const Weibull& w) { return -std::expm1(-std::pow(x / w.scale, w.shape)); },
          [x](const Exponential& e) { return -std::expm1(-e.rate * x); },
          [x](const Beta& b) { return bm::ibeta(b.a, b.b, x); },
          [x](const LogNormal& l) { return normal_cdf((std::log(x) - l.mu) / l.sigma); },
          [x](const Mixture& m) {
            double s = 0.0;
            for (const auto& c : m.components) s += c.weight * cdf(c.dist, x);
            return s;
          },
          [x](const Scaled& s) { return cdf(*s.base, x / s.factor); },
          [&d, x](const auto&) { return 1.0 - survival(d, x); },
      },
      d.family());
}

namespace {

double raw_density(const Distribution& d, double x) {
  if (x < d.support_lo() || x >= d.support_hi()) return 0.0;
  namespace bm = boost::math;
  return std::visit(
      overloaded{
          [x](const Uniform& u) { return 1.0 / (u.hi - u.lo); },
          [x](const Exponential& e) { return e.rate * std::exp(-e.rate * x); },
          [x](const Gamma& g) {
            if (x == 0.0) return power_density_at_zero(g.shape, 1.0 / g.scale);
            return bm::gamma_p_derivative(g.shape, x / g.scale) / g.scale;
          },
          [x](const Weibull& w) {
            if (x == 0.0) return power_density_at_zero(w.shape, 1.0 / w.scale);
            const double z = x / w.scale;
            return w.shape / w.scale * std::pow(z, w.shape - 1.0) *
                   std::exp(-std::pow(z, w.shape));
          },
          [x](const Beta& b) {
            if (x == 0.0) return power_density_at_zero(b.a, b.b);
            return bm::ibeta_derivative(b.a, b.b, x);
          },
          [x](const Pareto& p) {
            return p.alpha / x * std::pow(p.xm / x, p.alpha);
          },
          [x](const LogNormal& l) {
            if (x == 0.0) return 0.0;
            return normal_pdf((std::log(x) - l.mu) / l.sigma) / (x * l.sigma);
          },
          [x](const TruncatedNormal& t) {
            return normal_pdf((x - t.mu) / t.sigma) / (t.sigma * truncnorm_mass(t));
          },
          [x](const Mixture& m) {
            double s = 0.0;
            for (const auto& c : m.components) s += c.weight * raw_density(c.dist, x);
            return s;
          },
          [x](const Scaled& s) { return raw_density(*s.base, x / s.factor) / s.factor; },
      },
      d.family());
}

}  // namespace

std::optional<double> density(const Distribution& d, double x) {
  if (!d.has_density()) return std::nullopt;
  return raw_density(d, x);
}

double integrated_survival(const Distribution& d, double x) {
  if (x < 0.0 || std::isnan(x)) {
    throw Error(ErrorCode::OutOfSupport, "integrated_survival requires x >= 0");
  }
  if (x >= d.support_hi()) return 0.0;
  if (x <= d.support_lo()) return d.mean() - x;
  namespace bm = boost::math;
  return std::visit(
      overloaded{
          [x](const Uniform& u) { return 0.5 * (u.hi - x) * (u.hi - x) / (u.hi - u.lo); },
          [x](const Exponential& e) { return std::exp(-e.rate * x) / e.rate; },
          [x](const Gamma& g) {
            const double z = x / g.scale;
            return g.shape * g.scale * bm::gamma_q(g.shape + 1.0, z) - x * bm::gamma_q(g.shape, z);
          },
          [x](const Weibull& w) {
            const double inv = 1.0 / w.shape;
            return w.scale * std::tgamma(1.0 + inv) *
                   bm::gamma_q(inv, std::pow(x / w.scale, w.shape));
          },
          [x](const Beta& b) {
            if (x <= 0.5) {
              return b.a / (b.a + b.b) * bm::ibetac(b.a + 1.0, b.b, x) - x * bm::ibetac(b.a, b.b, x);
            }
            // Reflected form 1 - alpha ~ Beta(b, a); avoids cancellation near 1.
            const double y = 1.0 - x;
            return y * bm::ibeta(b.b, b.a, y) - b.b / (b.a + b.b) * bm::ibeta(b.b + 1.0, b.a, y);
          },
          [x](const Pareto& p) { return x * std::pow(p.xm / x, p.alpha) / (p.alpha - 1.0); },
          [x](const LogNormal& l) {
            const double z = (std::log(x) - l.mu) / l.sigma;
            return std::exp(l.mu + 0.5 * l.sigma * l.sigma) * normal_sf(z - l.sigma) -
                   x * normal_sf(z);
          },
          [x](const TruncatedNormal& t) {
            const double z = (x - t.mu) / t.sigma;
            return t.sigma * (normal_pdf(z) - z * normal_sf(z)) / truncnorm_mass(t);
          },
          [x](const Mixture& m) {
            double s = 0.0;
            for (const auto& c : m.components) s += c.weight * integrated_survival(c.dist, x);
            return s;
          },
          [x](const Scaled& s) { return s.factor * integrated_survival(*s.base, x / s.factor); },
      },
      d.family());
}

double integrated_survival_numeric(const Distribution& d, double x, double rel_tol) {
  if (x < 0.0 || std::isnan(x)) {
    throw Error(ErrorCode::OutOfSupport, "integrated_survival requires x >= 0");
  }
  if (x >= d.support_hi()) return 0.0;
  return integrate([&d](double u) { return survival(d, u); }, x, d.support_hi(), rel_tol,
                   1e-10 * d.mean(), d.breakpoints());
}

namespace {

double moment_by_quadrature(const Distribution& d, int k) {
  // E a^k = integral of k u^(k-1) S(u) over [0, H) for non-negative a.
  return integrate(
      [&d, k](double u) { return k * std::pow(u, k - 1) * survival(d, u); }, 0.0,
      d.support_hi(), 1e-12, 0.0, d.breakpoints());
}

}  // namespace

double moment(const Distribution& d, int k) {
  if (k < 1) invalid("moment order must be >= 1");
  if (k == 1) return d.mean();
  const double kd = static_cast<double>(k);
  return std::visit(
      overloaded{
          [kd](const Uniform& u) {
            return (std::pow(u.hi, kd + 1.0) - std::pow(u.lo, kd + 1.0)) /
                   ((kd + 1.0) * (u.hi - u.lo));
          },
          [kd](const Exponential& e) { return std::tgamma(kd + 1.0) / std::pow(e.rate, kd); },
          [k](const Gamma& g) {
            double r = 1.0;
            for (int i = 0; i < k; ++i) r *= (g.shape + i) * g.scale;
            return r;
          },
          [kd](const Weibull& w) {
            return std::pow(w.scale, kd) * std::tgamma(1.0 + kd / w.shape);
          },
          [k](const Beta& b) {
            double r = 1.0;
            for (int i = 0; i < k; ++i) r *= (b.a + i) / (b.a + b.b + i);
            return r;
          },
          [kd](const Pareto& p) {
            if (p.alpha <= kd) return kInf;
            return p.alpha * std::pow(p.xm, kd) / (p.alpha - kd);
          },
          [kd](const LogNormal& l) {
            return std::exp(kd * l.mu + 0.5 * kd * kd * l.sigma * l.sigma);
          },
          [&d, k](const TruncatedNormal&) { return moment_by_quadrature(d, k); },
          [k](const Mixture& m) {
            double s = 0.0;
            for (const auto& c : m.components) s += c.weight * moment(c.dist, k);
            return s;
          },
          [k, kd](const Scaled& s) { return std::pow(s.factor, kd) * moment(*s.base, k); },
      },
      d.family());
}

namespace {

double density_moment_above(const Distribution& d, double x, double rel_tol) {
  const double from = std::max(x, d.support_lo());
  return integrate([&d](double u) { return u * raw_density(d, u); }, from, d.support_hi(),
                   rel_tol, 0.0, d.breakpoints());
}

}  // namespace

double partial_expectation(const Distribution& d, double x, double rel_tol) {
  x = std::max(x, 0.0);
  if (x >= d.support_hi()) return 0.0;
  if (!d.has_density()) return integrated_survival(d, x) + x * survival(d, x);
  return std::visit(
      overloaded{
          [&](const Mixture& m) {
            double s = 0.0;
            for (const auto& c : m.components) s += c.weight * partial_expectation(c.dist, x, rel_tol);
            return s;
          },
          [&](const Scaled& s) {
            return s.factor * partial_expectation(*s.base, x / s.factor, rel_tol);
          },
          [&](const Beta& b) {
            if (b.b >= 1.0) return density_moment_above(d, x, rel_tol);
            // The density is unbounded at 1; integrate the inverse survival
            // over survival probability instead.
            return integrate([&d](double q) { return inverse_survival(d, q); }, 0.0,
                             survival(d, x), rel_tol);
          },
          [&](const auto&) { return density_moment_above(d, x, rel_tol); },
      },
      d.family());
}

double quantile(const Distribution& d, double p) {
  if (!(p >= 0.0 && p < 1.0)) invalid("quantile requires p in [0, 1)");
  if (p == 0.0) return d.support_lo();
  namespace bm = boost::math;
  return std::visit(
      overloaded{
          [p](const Uniform& u) { return u.lo + p * (u.hi - u.lo); },
          [p](const Exponential& e) { return -std::log1p(-p) / e.rate; },
          [p](const Gamma& g) { return g.scale * bm::gamma_p_inv(g.shape, p); },
          [p](const Weibull& w) { return w.scale * std::pow(-std::log1p(-p), 1.0 / w.shape); },
          [p](const Beta& b) { return bm::ibeta_inv(b.a, b.b, p); },
          [p](const Pareto& pa) { return pa.xm * std::exp(-std::log1p(-p) / pa.alpha); },
          [p](const LogNormal& l) { return std::exp(l.mu - l.sigma * normal_isf(p)); },
          [p](const TruncatedNormal& t) {
            const double base = normal_cdf(-t.mu / t.sigma);
            const double target = base + p * truncnorm_mass(t);
            // Lower-tail inverse via the complement identity of the normal.
            return std::max(0.0, t.mu - t.sigma * normal_isf(target));
          },
          [&d, p](const Mixture&) {
            return bisect_monotone(d.support_lo(), d.support_hi(),
                                   [&d, p](double x) { return cdf(d, x) >= p; });
          },
          [p](const Scaled& s) { return s.factor * quantile(*s.base, p); },
      },
      d.family());
}

double inverse_survival(const Distribution& d, double q) {
  if (!(q > 0.0 && q <= 1.0)) invalid("inverse_survival requires q in (0, 1]");
  if (q == 1.0) return d.support_lo();
  namespace bm = boost::math;
  return std::visit(
      overloaded{
          [q](const Uniform& u) { return u.hi - q * (u.hi - u.lo); },
          [q](const Exponential& e) { return -std::log(q) / e.rate; },
          [q](const Gamma& g) { return g.scale * bm::gamma_q_inv(g.shape, q); },
          [q](const Weibull& w) { return w.scale * std::pow(-std::log(q), 1.0 / w.shape); },
          [q](const Beta& b) { return bm::ibetac_inv(b.a, b.b, q); },
          [q](const Pareto& p) { return p.xm * std::pow(q, -1.0 / p.alpha); },
          [q](const LogNormal& l) { return std::exp(l.mu + l.sigma * normal_isf(q)); },
          [q](const TruncatedNormal& t) {
            return std::max(0.0, t.mu + t.sigma * normal_isf(q * truncnorm_mass(t)));
          },
          [&d, q](const Mixture&) {
            return bisect_monotone(d.support_lo(), d.support_hi(),
                                   [&d, q](double x) { return survival(d, x) <= q; });
          },
          [q](const Scaled& s) { return s.factor * inverse_survival(*s.base, q); },
      },
      d.family());
}

Distribution scale(const Distribution& d, double k) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw Error(ErrorCode::NonPositiveScale, "scale factor must be positive and finite");
  }
  Distribution out = std::visit(
      overloaded{
          [k](const Uniform& u) { return Distribution::uniform(k * u.lo, k * u.hi); },
          [k](const Exponential& e) { return Distribution::exponential(e.rate / k); },
          [k](const Gamma& g) { return Distribution::gamma(g.shape, k * g.scale); },
          [k](const Weibull& w) { return Distribution::weibull(w.shape, k * w.scale); },
          [k](const Pareto& p) { return Distribution::pareto(k * p.xm, p.alpha); },
          [k](const LogNormal& l) { return Distribution::lognormal(l.mu + std::log(k), l.sigma); },
          [k](const TruncatedNormal& t) { return Distribution::truncated_normal(k * t.mu, k * t.sigma); },
          [k](const Mixture& m) {
            std::vector<MixtureComponent> comps;
            for (const auto& c : m.components) comps.push_back({scale(c.dist, k), c.weight});
            return Distribution::mixture(std::move(comps));
          },
          [k](const Scaled& s) { return scale(*s.base, k * s.factor); },
          [&d, k](const Beta&) {
            return Distribution(Scaled{std::make_shared<const Distribution>(d), k});
          },
      },
      d.family());
  if (!d.has_density()) out = out.without_density();
  return out;
}

}  // namespace cournot
