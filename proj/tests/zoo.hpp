#pragma once

#include <string>
#include <vector>

#include "cournot/distribution.hpp"

namespace zoo {

struct Member {
  std::string name;
  cournot::Distribution dist;
  bool smooth;  // density continuous on the interior of the support (no gaps)
};

inline cournot::Distribution mix_dmrd() {
  using cournot::Distribution;
  return Distribution::mixture(
      {{Distribution::uniform(0.0, 1.0), 0.5}, {Distribution::uniform(1.2, 1.4), 0.5}});
}

inline cournot::Distribution mix_wide_gap() {
  using cournot::Distribution;
  return Distribution::mixture(
      {{Distribution::uniform(0.0, 1.0), 0.8}, {Distribution::uniform(2.0, 2.2), 0.2}});
}

inline std::vector<Member> members() {
  using cournot::Distribution;
  return {
      {"uniform01", Distribution::uniform(0.0, 1.0), true},
      {"uniform_half_2", Distribution::uniform(0.5, 2.0), true},
      {"exponential1", Distribution::exponential(1.0), true},
      {"gamma_half", Distribution::gamma(0.5, 1.0), true},
      {"gamma3", Distribution::gamma(3.0, 0.5), true},
      {"weibull_07", Distribution::weibull(0.7, 1.0), true},
      {"weibull2", Distribution::weibull(2.0, 1.0), true},
      {"beta23", Distribution::beta(2.0, 3.0), true},
      {"beta_half", Distribution::beta(0.5, 0.5), true},
      {"pareto4", Distribution::pareto(1.0, 4.0), true},
      {"pareto25", Distribution::pareto(1.0, 2.5), true},
      {"lognormal", Distribution::lognormal(0.0, 0.5), true},
      {"truncnormal", Distribution::truncated_normal(1.0, 1.0), true},
      {"mix_dmrd", mix_dmrd(), false},
      {"mix_wide_gap", mix_wide_gap(), false},
      {"scaled_beta23", cournot::scale(Distribution::beta(2.0, 3.0), 2.0), true},
  };
}

}  // namespace zoo
