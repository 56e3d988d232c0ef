#include <doctest.h>

#include <cmath>
#include <random>

#include "cournot/equilibrium.hpp"
#include "cournot/error.hpp"
#include "cournot/verify.hpp"
#include "zoo.hpp"

using namespace cournot;
using doctest::Approx;

TEST_CASE("Monte Carlo expected price examples") {
  const auto u = Distribution::uniform(0, 1);
  const auto at0 = mc_expected_price(u, 0.0, 1'000'000, 1);
  CHECK(std::abs(at0.estimate - 0.5) < 4 * at0.std_error);
  const auto at_half = mc_expected_price(u, 0.5, 1'000'000, 2);
  CHECK(std::abs(at_half.estimate - 0.125) < 4 * at_half.std_error);
  const auto beyond = mc_expected_price(u, 1.0, 1000, 3);
  CHECK(beyond.estimate == 0.0);
  CHECK(beyond.std_error == 0.0);
  CHECK_THROWS_AS(mc_expected_price(u, 0.0, 999, 1), Error);
}

TEST_CASE("Monte Carlo is reproducible for a fixed seed") {
  const auto d = zoo::mix_dmrd();
  const auto a = mc_expected_price(d, 0.3, 5000, 42);
  const auto b = mc_expected_price(d, 0.3, 5000, 42);
  CHECK(a.estimate == b.estimate);
  CHECK(a.std_error == b.std_error);
  const auto c = mc_expected_price(d, 0.3, 5000, 43);
  CHECK(a.estimate != c.estimate);
}

TEST_CASE("Monte Carlo agrees with the closed form across the zoo") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unif(0.0, 0.95);
  for (const auto& z : zoo::members()) {
    CAPTURE(z.name);
    const auto m = make_market(1, 0.0, z.dist);
    std::vector<double> xs;
    for (int i = 0; i < 5; ++i) xs.push_back(quantile(z.dist, unif(rng)));
    const auto est = mc_expected_prices(z.dist, xs, 200'000, 99);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      CAPTURE(xs[i]);
      CHECK(std::abs(est[i].estimate - expected_price(m, xs[i])) < 4 * est[i].std_error);
    }
  }
}

TEST_CASE("inverse-cdf draws land in the support") {
  std::mt19937_64 rng(8);
  for (const auto& z : zoo::members()) {
    CAPTURE(z.name);
    for (int i = 0; i < 2000; ++i) {
      const double a = sample_inverse_cdf(z.dist, rng);
      CHECK(a >= z.dist.support_lo());
      CHECK(a <= z.dist.support_hi());
    }
  }
}

TEST_CASE("best response examples") {
  const auto u = make_market(2, 0.0, Distribution::uniform(0, 1));
  CHECK(best_response(u, 0.25) == Approx(0.25).epsilon(1e-9));
  CHECK(best_response(u, 1.0) == 0.0);
  CHECK(best_response(u, 3.0) == 0.0);
  const auto e = make_market(1, 0.0, Distribution::exponential(1));
  CHECK(best_response(e, 0.0) == Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(best_response(u, -1.0), Error);
}

TEST_CASE("best response is zero when cost exceeds the price") {
  const auto m = make_market(1, 0.4, Distribution::uniform(0, 1));
  // Expected price at 0.2 is 0.32 < 0.4.
  CHECK(best_response(m, 0.2) == 0.0);
}

TEST_CASE("equilibrium is a best-response fixed point") {
  for (const auto& z : zoo::members()) {
    CAPTURE(z.name);
    for (int n : {1, 2, 5}) {
      for (double c : {0.0, 0.25 * z.dist.mean()}) {
        const auto m = make_market(n, c, z.dist);
        const auto s = find_equilibria(m);
        if (s.roots.size() != 1) continue;
        const double x = s.roots[0].per_firm;
        CHECK(std::abs(best_response(m, (n - 1) * x) - x) < 1e-6);
      }
    }
  }
}

TEST_CASE("best-response dynamics examples") {
  const auto u = make_market(2, 0.0, Distribution::uniform(0, 1));
  const auto t = best_response_dynamics(u, {0.4, 0.1}, 200);
  REQUIRE(t.converged);
  REQUIRE(t.limit);
  CHECK(*t.limit == Approx(0.25).epsilon(1e-8));
  CHECK(t.iterates.back()[0] == Approx(0.25).epsilon(1e-8));
  CHECK(t.iterates.back()[1] == Approx(0.25).epsilon(1e-8));

  const auto fixed = best_response_dynamics(u, {0.25, 0.25}, 200);
  CHECK(fixed.converged);
  CHECK(fixed.iterations_used <= 1);

  const auto e = make_market(1, 0.0, Distribution::exponential(1));
  const auto te = best_response_dynamics(e, {0.2}, 200);
  REQUIRE(te.converged);
  CHECK(*te.limit == Approx(1.0).epsilon(1e-8));

  CHECK_THROWS_AS(best_response_dynamics(u, {0.1}, 10), Error);
  CHECK_THROWS_AS(best_response_dynamics(u, {0.1, -0.1}, 10), Error);
}

TEST_CASE("converged dynamics land on an equilibrium") {
  std::mt19937_64 rng(23);
  for (const auto& z : zoo::members()) {
    CAPTURE(z.name);
    for (int n : {2, 3}) {
      const auto m = make_market(n, 0.1 * z.dist.mean(), z.dist);
      const auto s = find_equilibria(m);
      std::uniform_real_distribution<double> unif(0.0, z.dist.mean());
      std::vector<double> init(n);
      for (auto& v : init) v = unif(rng);
      const auto t = best_response_dynamics(m, init, 300);
      if (!t.converged || !t.limit) continue;
      bool matched = false;
      for (const auto& r : s.roots) matched = matched || std::abs(*t.limit * n - r.total_output) < 1e-6;
      CHECK(matched);
    }
  }
}

TEST_CASE("identity battery examples") {
  const auto u = make_market(3, 0.1, Distribution::uniform(0, 1));
  const auto ru = identity_battery(u, {}, 1);
  CHECK(ru.max_error() < 1e-4);
  CHECK(ru.mrd_slope.points_checked == 20);

  const auto e = make_market(1, 0.0, Distribution::exponential(1));
  CHECK(identity_battery(e, {}, 2).max_error() < 1e-4);

  const auto gap = make_market(1, 0.0, zoo::mix_wide_gap());
  const auto rg = identity_battery(gap, {}, 3, 200);
  CHECK(rg.mrd_slope.points_skipped > 0);
  CHECK(rg.price_slope.points_skipped == 0);
  CHECK(rg.price_slope.points_checked == 200);
  CHECK(rg.max_error() < 1e-4);
}

TEST_CASE("identity battery without a density keeps the price identity") {
  const auto m = make_market(1, 0.0, Distribution::uniform(0, 1).without_density());
  const auto r = identity_battery(m, {}, 4);
  CHECK_FALSE(r.mrd_slope.available);
  CHECK_FALSE(r.l_slope.available);
  CHECK_FALSE(r.revenue_slope.available);
  CHECK(r.price_slope.available);
  CHECK(r.price_slope.max_rel_error < 1e-4);
}

TEST_CASE("identity battery across the zoo") {
  for (const auto& z : zoo::members()) {
    CAPTURE(z.name);
    const auto r = identity_battery(make_market(2, 0.1 * z.dist.mean(), z.dist), {}, 9);
    CHECK(r.mrd_slope.max_rel_error < 1e-4);
    CHECK(r.l_slope.max_rel_error < 1e-4);
    CHECK(r.revenue_slope.max_rel_error < 1e-4);
    CHECK(r.price_slope.max_rel_error < 1e-4);
  }
}
