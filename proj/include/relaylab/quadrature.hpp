#pragma once

#include <functional>
#include <vector>

namespace relaylab {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // achieved absolute error estimate
  int subdivisions = 0;
  bool converged = true;
};

struct QuadControl {
  double rel_tol = 1e-9;
  double abs_tol = 1e-14;
  int max_subdivisions = 2000;
};

// Adaptive Gauss-Kronrod (G7, K15) on [a, b], worst-interval-first
// bisection. Nodes are interior, so integrable endpoint singularities are
// tolerated. Returns converged = false when the subdivision budget runs out
// before the tolerance is met; the achieved estimate is still reported.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadControl& ctl = {});

// Same, seeding the subdivision with interior breakpoints (sorted or not;
// values outside (a, b) are ignored). Useful when the integrand has known
// scale changes the first panels would otherwise miss.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     std::vector<double> breakpoints, const QuadControl& ctl = {});

}  // namespace relaylab
