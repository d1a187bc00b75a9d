#pragma once

#include <vector>

namespace relaylab {

// Shape-preserving piecewise cubic (Fritsch-Carlson slope limiting). The
// interpolant never overshoots the local data range, so nonnegative samples
// stay nonnegative. Evaluation clamps to the end values outside the knots.
class PchipInterpolant {
 public:
  PchipInterpolant() = default;
  // x strictly increasing, len >= 2, same length as y.
  PchipInterpolant(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }
  bool empty() const { return x_.empty(); }

 private:
  std::vector<double> x_, y_, d_;  // d_: limited derivative at each knot
};

}  // namespace relaylab
