#include "relaylab/geometry.hpp"

#include <cmath>
#include <numbers>

#include "relaylab/errors.hpp"

namespace relaylab {

double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

double inv_pow_from_sq(double dist_sq, double alpha) {
  if (alpha == 4.0) return 1.0 / (dist_sq * dist_sq);
  if (alpha == 3.0) return 1.0 / (dist_sq * std::sqrt(dist_sq));
  if (alpha == 2.0) return 1.0 / dist_sq;
  return std::pow(dist_sq, -0.5 * alpha);
}

PointField sample_ppp(double density, const SimulationRegion& region, Rng& rng,
                      FieldClass cls) {
  if (density < 0.0) throw ConfigError("field density must be >= 0");
  if (region.radius <= 0.0) throw ConfigError("region radius must be > 0");
  PointField field;
  field.cls = cls;
  if (density == 0.0) return field;

  const double mean = density * std::numbers::pi * region.radius * region.radius;
  const std::uint64_t n = rng.poisson(mean);
  field.points.reserve(n);
  field.marks.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    // Rejection from the bounding square: uniform on the disk without trig,
    // so the draw sequence is exactly reproducible everywhere.
    double x, y;
    do {
      x = rng.uniform(-region.radius, region.radius);
      y = rng.uniform(-region.radius, region.radius);
    } while (x * x + y * y > region.radius * region.radius);
    field.points.push_back({region.center.x + x, region.center.y + y});
    field.marks.push_back(rng.exponential());
  }
  return field;
}

void resample_marks(PointField& field, Rng& rng) {
  for (double& m : field.marks) m = rng.exponential();
}

double shot_noise(const PointField& field, Vec2 receiver, double tx_power,
                  double path_loss_exp) {
  if (path_loss_exp <= 2.0)
    throw ConfigError("non-integrable path loss: exponent must exceed 2");
  double sum = 0.0;
  for (std::size_t i = 0; i < field.points.size(); ++i) {
    const double dx = field.points[i].x - receiver.x;
    const double dy = field.points[i].y - receiver.y;
    const double d2 = dx * dx + dy * dy;
    if (d2 == 0.0) throw NumericError("singular distance");
    sum += field.marks[i] * inv_pow_from_sq(d2, path_loss_exp);
  }
  return tx_power * sum;
}

}  // namespace relaylab
