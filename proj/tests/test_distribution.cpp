#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "cournot/distribution.hpp"
#include "cournot/error.hpp"
#include "cournot/io.hpp"
#include "cournot/quadrature.hpp"
#include "oracle.hpp"
#include "zoo.hpp"

using namespace cournot;
using doctest::Approx;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("survival closed forms") {
  CHECK(survival(Distribution::uniform(0, 1), 0.25) == Approx(0.75).epsilon(1e-15));
  CHECK(survival(Distribution::exponential(1), 0.0) == 1.0);
  CHECK(survival(Distribution::pareto(1, 4), 2.0) == Approx(1.0 / 16).epsilon(1e-14));
}

TEST_CASE("survival clamps outside the support") {
  for (const auto& m : zoo::members()) {
    CAPTURE(m.name);
    const auto& d = m.dist;
    CHECK(survival(d, d.support_lo()) == Approx(1.0).epsilon(1e-14));
    CHECK(survival(d, 0.0) == Approx(1.0).epsilon(1e-14));
    if (d.bounded()) CHECK(survival(d, d.support_hi()) == 0.0);
    CHECK(survival(d, 1e300) == 0.0);
  }
}

TEST_CASE("survival is non-increasing") {
  for (const auto& m : zoo::members()) {
    CAPTURE(m.name);
    double prev = 1.0;
    for (int i = 1; i <= 400; ++i) {
      const double x = quantile(m.dist, i / 401.0);
      const double s = survival(m.dist, x);
      CHECK(s <= prev);
      prev = s;
    }
  }
}

TEST_CASE("density closed forms") {
  CHECK(*density(Distribution::uniform(0, 1), 0.5) == 1.0);
  CHECK(*density(Distribution::exponential(1), 1.0) == Approx(std::exp(-1.0)).epsilon(1e-15));
  const auto gap = Distribution::mixture(
      {{Distribution::uniform(0, 1), 0.5}, {Distribution::uniform(2, 3), 0.5}});
  CHECK(*density(gap, 1.5) == 0.0);
}

TEST_CASE("density right limit at zero") {
  CHECK(*density(Distribution::exponential(2), 0.0) == 2.0);
  CHECK(*density(Distribution::gamma(0.5, 1), 0.0) == kInf);
  CHECK(*density(Distribution::gamma(3, 1), 0.0) == 0.0);
  CHECK(*density(Distribution::weibull(1, 2), 0.0) == Approx(0.5));
}

TEST_CASE("density may be absent") {
  const auto d = Distribution::uniform(0, 1).without_density();
  CHECK_FALSE(d.has_density());
  CHECK_FALSE(density(d, 0.5).has_value());
  CHECK(survival(d, 0.5) == 0.5);
}

TEST_CASE("integrated survival closed forms") {
  CHECK(integrated_survival(Distribution::uniform(0, 1), 0.0) == Approx(0.5).epsilon(1e-15));
  CHECK(integrated_survival(Distribution::exponential(1), 2.0) ==
        Approx(std::exp(-2.0)).epsilon(1e-14));
  CHECK(integrated_survival(Distribution::pareto(1, 4), 1.0) == Approx(1.0 / 3).epsilon(1e-14));
  CHECK(integrated_survival(Distribution::uniform(0, 1), 2.0) == 0.0);
  CHECK(code_of([] { integrated_survival(Distribution::uniform(0, 1), -1.0); }) ==
        ErrorCode::OutOfSupport);
}

TEST_CASE("integrated survival agrees with quadrature of survival") {
  for (const auto& m : zoo::members()) {
    CAPTURE(m.name);
    for (double p : {0.05, 0.3, 0.6, 0.9, 0.999}) {
      const double x = quantile(m.dist, p);
      CAPTURE(x);
      const double closed = integrated_survival(m.dist, x);
      CHECK(integrated_survival_numeric(m.dist, x) ==
            Approx(closed).epsilon(1e-9).scale(m.dist.mean()));
    }
  }
}

TEST_CASE("integrated survival at zero equals the mean") {
  for (const auto& m : zoo::members()) {
    CAPTURE(m.name);
    CHECK(std::abs(integrated_survival(m.dist, 0.0) - moment(m.dist, 1)) < 1e-8);
  }
}

TEST_CASE("density integrates to the cdf") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(0.001, 0.999);
  for (const auto& m : zoo::members()) {
    CAPTURE(m.name);
    const auto& d = m.dist;
    for (int i = 0; i < 50; ++i) {
      const double x = quantile(d, unif(rng));
      CAPTURE(x);
      const double f_cdf = integrate([&](double u) { return *density(d, u); }, d.support_lo(), x,
                                     1e-12, 1e-12, d.breakpoints());
      CHECK(std::abs(f_cdf - (1.0 - survival(d, x))) < 1e-8);
    }
  }
}

TEST_CASE("moments") {
  CHECK(moment(Distribution::uniform(0, 1), 1) == Approx(0.5));
  CHECK(moment(Distribution::pareto(1, 2.5), 3) == kInf);
  CHECK(moment(Distribution::pareto(1, 4), 3) == Approx(4.0).epsilon(1e-14));
  CHECK(moment(Distribution::exponential(1), 3) == Approx(6.0).epsilon(1e-14));
  CHECK(moment(Distribution::uniform(0, 1), 3) == Approx(0.25).epsilon(1e-14));
  CHECK(moment(Distribution::gamma(3, 0.5), 2) == Approx(3.0).epsilon(1e-13));
}

TEST_CASE("moments agree with quadrature of k u^(k-1) S(u)") {
  for (const auto& m : zoo::members()) {
    CAPTURE(m.name);
    for (int k = 1; k <= 3; ++k) {
      CAPTURE(k);
      const double closed = moment(m.dist, k);
      if (!std::isfinite(closed)) continue;
      const double numeric = integrate(
          [&](double u) { return k * std::pow(u, k - 1) * survival(m.dist, u); }, 0.0,
          m.dist.support_hi(), 1e-12, 0.0, m.dist.breakpoints());
      CHECK(numeric == Approx(closed).epsilon(1e-8));
    }
  }
}

TEST_CASE("scale maps into the family") {
  const auto u = scale(Distribution::uniform(0, 1), 2.0);
  CHECK(u.family_name() == "Uniform");
  CHECK(u.support_hi() == 2.0);
  const auto e = scale(Distribution::exponential(1), 2.0);
  CHECK(std::get<Exponential>(e.family()).rate == Approx(0.5));
  const auto p = scale(Distribution::pareto(1, 4), 3.0);
  CHECK(std::get<Pareto>(p.family()).xm == Approx(3.0));
  CHECK(std::get<Pareto>(p.family()).alpha == 4.0);
  CHECK(code_of([] { scale(Distribution::uniform(0, 1), 0.0); }) == ErrorCode::NonPositiveScale);
  CHECK(code_of([] { scale(Distribution::uniform(0, 1), -2.0); }) == ErrorCode::NonPositiveScale);
}

TEST_CASE("scaled survival matches the base") {
  for (const auto& m : zoo::members()) {
    CAPTURE(m.name);
    for (double k : {0.5, 2.0, 10.0}) {
      const auto s = scale(m.dist, k);
      CHECK(s.support_lo() == Approx(k * m.dist.support_lo()));
      CHECK(s.mean() == Approx(k * m.dist.mean()).epsilon(1e-13));
      for (double p : {0.01, 0.25, 0.5, 0.75, 0.99}) {
        const double x = quantile(m.dist, p);
        CHECK(std::abs(survival(s, k * x) - survival(m.dist, x)) < 1e-13);
      }
    }
  }
}

TEST_CASE("mixture survival is the weighted sum of components") {
  const auto a = Distribution::exponential(2.0);
  const auto b = Distribution::gamma(3.0, 1.0);
  const auto c = Distribution::uniform(0.5, 4.0);
  const auto mix = Distribution::mixture({{a, 0.2}, {b, 0.5}, {c, 0.3}});
  for (double x = 0.0; x < 8.0; x += 0.173) {
    const double expect = 0.2 * survival(a, x) + 0.5 * survival(b, x) + 0.3 * survival(c, x);
    CHECK(survival(mix, x) == Approx(expect).epsilon(1e-14));
    CHECK(integrated_survival(mix, x) ==
          Approx(0.2 * integrated_survival(a, x) + 0.5 * integrated_survival(b, x) +
                 0.3 * integrated_survival(c, x))
              .epsilon(1e-13));
  }
}

TEST_CASE("uniform mixture matches a hand-built oracle") {
  const std::vector<oracle::UniformPiece> parts{{0.8, 0.0, 1.0}, {0.2, 2.0, 2.2}};
  const auto d = zoo::mix_wide_gap();
  for (double x = 0.0; x < 2.2; x += 0.01) {
    CHECK(survival(d, x) == Approx(oracle::mix_survival(parts, x)).epsilon(1e-13));
    CHECK(integrated_survival(d, x) ==
          Approx(oracle::mix_integrated_survival(parts, x)).epsilon(1e-12));
  }
  CHECK(d.has_gap());
  CHECK(d.support_intervals().size() == 2);
}

TEST_CASE("quantile and inverse survival invert the survival") {
  for (const auto& m : zoo::members()) {
    CAPTURE(m.name);
    for (double p : {1e-6, 0.1, 0.5, 0.9, 1 - 1e-6}) {
      CAPTURE(p);
      CHECK(1.0 - survival(m.dist, quantile(m.dist, p)) == Approx(p).epsilon(1e-8));
      CHECK(survival(m.dist, inverse_survival(m.dist, 1.0 - p)) == Approx(1.0 - p).epsilon(1e-8));
    }
  }
}

TEST_CASE("construction rejects invalid parameters") {
  CHECK(code_of([] { Distribution::uniform(1, 1); }) == ErrorCode::InvalidParameter);
  CHECK(code_of([] { Distribution::uniform(-1, 1); }) == ErrorCode::InvalidParameter);
  CHECK(code_of([] { Distribution::exponential(0); }) == ErrorCode::InvalidParameter);
  CHECK(code_of([] { Distribution::pareto(1, 1); }) == ErrorCode::InvalidParameter);
  CHECK(code_of([] { Distribution::gamma(-1, 1); }) == ErrorCode::InvalidParameter);
  CHECK(code_of([] { Distribution::lognormal(0, 0); }) == ErrorCode::InvalidParameter);
  CHECK(code_of([] {
          Distribution::mixture({{Distribution::uniform(0, 1), 0.5},
                                 {Distribution::uniform(0, 2), 0.4}});
        }) == ErrorCode::InvalidParameter);
  CHECK(code_of([] { Distribution::mixture({{Distribution::uniform(0, 1), 1.0}}); }) ==
        ErrorCode::InvalidParameter);
}

TEST_CASE("distribution JSON round trip") {
  const json spec = {
      {"family", "Mixture"},
      {"components",
       {{{"family", "Uniform"}, {"params", {{"lo", 0.0}, {"hi", 1.0}}}},
        {{"family", "Pareto"}, {"params", {{"xm", 2.0}, {"alpha", 4.0}}}}}},
      {"weights", {0.25, 0.75}}};
  const auto d = distribution_from_json(spec);
  CHECK(d.family_name() == "Mixture");
  CHECK(d.mean() == Approx(0.25 * 0.5 + 0.75 * 4.0 * 2.0 / 3.0));
  const auto again = distribution_from_json(to_json(d));
  for (double x : {0.1, 0.7, 1.5, 3.0}) CHECK(survival(again, x) == survival(d, x));

  CHECK(code_of([] { distribution_from_json(json{{"family", "Cauchy"}}); }) ==
        ErrorCode::ConfigParse);
  CHECK(code_of([] { distribution_from_json(json{{"family", "Uniform"}}); }) ==
        ErrorCode::ConfigParse);
}
