#pragma once

#include <cstddef>
#include <vector>

#include "relaylab/rng.hpp"

namespace relaylab {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

double distance(Vec2 a, Vec2 b);

// d^(-alpha) from a squared distance, with fast paths for the common
// integer exponents.
double inv_pow_from_sq(double dist_sq, double alpha);

// Transmitter class of a sampled field: ambient interferers or dedicated
// power-carrier emitters.
enum class FieldClass { Interferer, CarrierEmitter };

struct SimulationRegion {
  Vec2 center{};
  double radius = 500.0;  // m
};

// One realization of a Poisson field: positions plus one fading power gain
// per point. Immutable by convention once sampled (resample_marks excepted).
struct PointField {
  std::vector<Vec2> points;
  std::vector<double> marks;  // |h|^2, unit-mean exponential
  FieldClass cls = FieldClass::Interferer;

  std::size_t size() const { return points.size(); }
};

// Homogeneous Poisson sample on the region disk: Poisson count with mean
// density*pi*R^2, positions uniform, marks i.i.d. unit-mean exponential.
PointField sample_ppp(double density, const SimulationRegion& region, Rng& rng,
                      FieldClass cls);

// Fresh fading marks on the same positions; used when two receivers see the
// same transmitters through independent channels.
void resample_marks(PointField& field, Rng& rng);

// Aggregate received power: tx_power * sum_i mark_i * d_i^(-path_loss_exp).
// Throws NumericError("singular distance") if a point coincides with the
// receiver, ConfigError if path_loss_exp <= 2.
double shot_noise(const PointField& field, Vec2 receiver, double tx_power,
                  double path_loss_exp);

}  // namespace relaylab
