#include "cournot/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "cournot/error.hpp"

namespace cournot {
namespace {

struct Panel {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;
};

// Non-finite samples come from densities evaluated exactly on an integrable
// endpoint singularity; they carry no mass.
double guarded(const std::function<double(double)>& f, double x) {
  const double v = f(x);
  return std::isfinite(v) ? v : 0.0;
}

Panel finite_panel(const std::function<double(double)>& f, double a, double b,
                   double rel_tol) {
  thread_local boost::math::quadrature::tanh_sinh<double> integrator(15);
  Panel p;
  p.value = integrator.integrate([&](double x) { return guarded(f, x); }, a, b,
                                 rel_tol, &p.error, &p.l1);
  return p;
}

Panel tail_panel(const std::function<double(double)>& f, double a,
                 double rel_tol) {
  thread_local boost::math::quadrature::exp_sinh<double> integrator(12);
  Panel p;
  p.value = integrator.integrate([&](double x) { return guarded(f, x); }, a,
                                 std::numeric_limits<double>::infinity(),
                                 rel_tol, &p.error, &p.l1);
  return p;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol, double abs_tol, std::span<const double> splits) {
  if (!(b > a)) return 0.0;

  std::vector<double> edges{a};
  for (double s : splits) {
    if (s > a && s < b && std::isfinite(s)) edges.push_back(s);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges.push_back(b);

  Panel total;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double lo = edges[i];
    const double hi = edges[i + 1];
    Panel p;
    try {
      p = std::isfinite(hi) ? finite_panel(f, lo, hi, rel_tol)
                            : tail_panel(f, lo, rel_tol);
    } catch (const std::exception& e) {
      throw Error(ErrorCode::QuadratureFailure,
                  std::string("quadrature aborted: ") + e.what());
    }
    total.value += p.value;
    total.error += p.error;
    total.l1 += p.l1;
  }

  // Boost's estimate is the difference between the last two levels, which
  // overstates the error of the returned level; allow one order of slack.
  const double budget = 10.0 * std::max(rel_tol, kRelativeFloor) * total.l1 + abs_tol;
  if (!std::isfinite(total.value) || total.error > budget) {
    std::ostringstream msg;
    msg << "quadrature on [" << a << ", " << b << "] reached error estimate "
        << total.error << " above budget " << budget;
    throw Error(ErrorCode::QuadratureFailure, msg.str());
  }
  return total.value;
}

}  // namespace cournot
