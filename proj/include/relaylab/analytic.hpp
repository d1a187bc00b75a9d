#pragma once

#include "relaylab/interp.hpp"
#include "relaylab/params.hpp"
#include "relaylab/quadrature.hpp"

namespace relaylab {

// Arguments of the field Laplace functionals: one transmitter class (power,
// density, exponent) plus the receiver separation for the two-receiver case.
struct TransformParams {
  double tx_power = 0.0;       // W
  double density = 0.0;        // points / m^2
  double path_loss_exp = 4.0;  // > 2
  double d_rd = 0.0;           // receiver separation, joint case only, m

  static TransformParams interferers(const SystemParams& p) {
    return {p.p_t, p.zeta, p.alpha, p.d_rd};
  }
  static TransformParams carriers(const SystemParams& p) {
    return {p.ptilde_t, p.zeta_tilde, p.alpha_tilde, 0.0};
  }
};

enum class InversionMethod { Talbot, GaverStehfest };

// Numerical knobs shared by the quadratures and the inverse transform.
struct QuadratureSpec {
  double rel_tol = 1e-8;
  double abs_tol = 1e-14;
  int max_subdivisions = 4000;
  int talbot_nodes = 32;
  int stehfest_terms = 16;
  InversionMethod inversion = InversionMethod::Talbot;

  void validate() const;  // throws ConfigError naming the field
};

// Aggregate-power Laplace functional of one field at a single receiver:
// exp(-(2/alpha)*pi^2*density*(s*power)^(2/alpha)*csc(2*pi/alpha)).
double laplace_single(double s, const TransformParams& tp);

// Joint functional of the same field seen by two receivers d_rd apart
// through independent fades; evaluated by nested adaptive quadrature with
// the radial integral truncated once the integrand falls below 1e-12.
double laplace_joint(double s1, double s2, const TransformParams& tp,
                     const QuadratureSpec& spec = {});

// Density-free exponent E with laplace_joint = exp(-density * E); stays
// representable where the functional itself underflows to zero.
double laplace_joint_exponent(double s1, double s2, const TransformParams& tp,
                              const QuadratureSpec& spec = {});

// Density / CDF of the harvested incident power, by numerical inversion of
// its closed-form transform. pdf is clamped at zero (inversion ringing);
// the unclamped variant exposes the raw excursion for quality gates.
double pdf_qr(double q, const SystemParams& params, const QuadratureSpec& spec = {});
double pdf_qr_unclamped(double q, const SystemParams& params,
                        const QuadratureSpec& spec = {});
double cdf_qr(double q, const SystemParams& params, const QuadratureSpec& spec = {});

struct AnalyticOptions {
  QuadratureSpec quad{};
  // The closed form's saturated-power branch differs from the simulator's
  // three-branch power rule (see SaturationRule); default follows the
  // closed form, switchable for apples-to-apples comparisons.
  SaturationRule saturation = SaturationRule::EnergyHeadroom;
};

struct SuccessTerms {
  double pa = 0.0;      // active mode succeeds end to end
  double j = 0.0;       // active D-hop fails, passive rescues, energy high
  double k = 0.0;       // passive succeeds on the low-energy window
  double total = 0.0;   // clamped sum
  bool clamped = false; // sum left [0,1] by more than numerical slack
};

double term_pa(const SystemParams& params, const AnalyticOptions& opts = {});
double term_j(const SystemParams& params, const AnalyticOptions& opts = {});
double term_k(const SystemParams& params, const AnalyticOptions& opts = {});
SuccessTerms evaluate_terms(const SystemParams& params, const AnalyticOptions& opts = {});
double success_prob_optimal(const SystemParams& params, const AnalyticOptions& opts = {});

// Tabulated harvested-power density: 256 log-spaced inversion points around
// the transform's scale anchor, monotone-cubic interpolation in between.
// Construction is the expensive step; evaluation is cheap and thread-safe.
class QrDensityTable {
 public:
  QrDensityTable(const SystemParams& params, const QuadratureSpec& spec);

  double pdf(double q) const;  // 0 below the grid; direct inversion above it
  double cdf(double q) const;
  double grid_min() const { return q_lo_; }
  double grid_max() const { return q_hi_; }
  // Largest negative excursion seen while tabulating, as a fraction of the
  // density's peak; bounded by the inversion quality gate.
  double negative_excursion() const { return neg_excursion_; }

 private:
  SystemParams params_;
  QuadratureSpec spec_;
  PchipInterpolant pdf_ln_;  // ln q -> clamped density
  double q_lo_ = 0.0, q_hi_ = 0.0;
  double neg_excursion_ = 0.0;
};

}  // namespace relaylab
