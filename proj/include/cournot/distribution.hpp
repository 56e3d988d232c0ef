#pragma once

#include <memory>
#include <optional>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace cournot {

class Distribution;

// Parametric families for the demand intercept. All are non-negative and
// absolutely continuous with a finite mean.

struct Uniform {
  double lo;
  double hi;
};

struct Exponential {
  double rate;
};

struct Gamma {
  double shape;
  double scale;
};

struct Weibull {
  double shape;
  double scale;
};

/// Beta(a, b) on [0, 1].
struct Beta {
  double a;
  double b;
};

/// Survival (xm / x)^alpha for x >= xm. Requires alpha > 1.
struct Pareto {
  double xm;
  double alpha;
};

struct LogNormal {
  double mu;
  double sigma;
};

/// Normal(mu, sigma^2) conditioned on being non-negative.
struct TruncatedNormal {
  double mu;
  double sigma;
};

struct MixtureComponent;

struct Mixture {
  std::vector<MixtureComponent> components;
};

/// Law of factor * base, for families that are not closed under scaling.
struct Scaled {
  std::shared_ptr<const Distribution> base;
  double factor;
};

using Family = std::variant<Uniform, Exponential, Gamma, Weibull, Beta, Pareto,
                            LogNormal, TruncatedNormal, Mixture, Scaled>;

struct Interval {
  double lo;
  double hi;
};

/// An immutable demand-intercept law on [support_lo, support_hi).
///
/// Instances are built through the validating factories below; every
/// constructed distribution has a strictly positive finite mean. The
/// density accessor can be switched off with without_density(), in which
/// case only survival-based quantities are available.
class Distribution {
 public:
  static Distribution uniform(double lo, double hi);
  static Distribution exponential(double rate);
  static Distribution gamma(double shape, double scale);
  static Distribution weibull(double shape, double scale);
  static Distribution beta(double a, double b);
  static Distribution pareto(double xm, double alpha);
  static Distribution lognormal(double mu, double sigma);
  static Distribution truncated_normal(double mu, double sigma);
  static Distribution mixture(std::vector<MixtureComponent> components);

  const Family& family() const noexcept { return family_; }
  std::string_view family_name() const noexcept;

  double support_lo() const noexcept { return lo_; }
  double support_hi() const noexcept { return hi_; }
  bool bounded() const noexcept;
  double mean() const noexcept { return mean_; }
  bool has_density() const noexcept { return has_density_; }

  /// Maximal disjoint intervals whose union is the support.
  const std::vector<Interval>& support_intervals() const noexcept { return intervals_; }
  /// Finite points where the density may jump (component endpoints).
  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  bool has_gap() const noexcept { return intervals_.size() > 1; }

  Distribution without_density() const;

 private:
  explicit Distribution(Family family);
  friend Distribution scale(const Distribution& d, double k);

  Family family_;
  double lo_ = 0.0;
  double hi_ = 0.0;
  double mean_ = 0.0;
  bool has_density_ = true;
  std::vector<Interval> intervals_;
  std::vector<double> breakpoints_;
};

struct MixtureComponent {
  Distribution dist;
  double weight;
};

/// 1 - F(x). Equals 1 at or below the support start and 0 at or above its end.
double survival(const Distribution& d, double x);
double cdf(const Distribution& d, double x);

/// f(x), or nullopt when the density accessor is disabled. At the lower
/// support endpoint the right limit is returned (possibly +inf).
std::optional<double> density(const Distribution& d, double x);

/// Integral of the survival function over [x, H): the expected excess
/// E(alpha - x)_+. Closed form for every family; x below zero is rejected.
double integrated_survival(const Distribution& d, double x);

/// The same integral computed by adaptive quadrature of the survival
/// function. Throws QuadratureFailure if the tolerance cannot be met.
double integrated_survival_numeric(const Distribution& d, double x,
                                   double rel_tol = 1e-10);

/// E[alpha^k]; +inf when the tail makes the moment diverge.
double moment(const Distribution& d, int k);

/// E[alpha ; alpha > x], integrating u f(u) by quadrature over the
/// support. Without a density it falls back on integrated_survival(x) + x S(x).
double partial_expectation(const Distribution& d, double x,
                           double rel_tol = 1e-12);

/// Lower quantile F^{-1}(p), p in [0, 1).
double quantile(const Distribution& d, double p);
/// Upper quantile: the x with survival(x) = q, q in (0, 1].
double inverse_survival(const Distribution& d, double q);

/// Law of k * alpha. Closed-form families keep their family tag.
Distribution scale(const Distribution& d, double k);

}  // namespace cournot
