#pragma once

#include <functional>
#include <span>

namespace cournot {

/// Adaptive double-exponential quadrature of f over [a, b]; b may be +inf.
/// Interior points in `splits` that fall strictly inside (a, b) become
/// panel boundaries, so integrands with kinks or jumps there converge.
/// Throws QuadratureFailure when the error estimate exceeds
/// rel_tol * L1-norm (plus abs_tol) after the refinement budget. Requests
/// below kRelativeFloor are judged against the floor instead.
inline constexpr double kRelativeFloor = 1e-11;

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol, double abs_tol = 0.0,
                 std::span<const double> splits = {});

}  // namespace cournot
