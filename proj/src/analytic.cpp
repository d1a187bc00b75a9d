#include "relaylab/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "relaylab/errors.hpp"
#include "relaylab/geometry.hpp"
#include "relaylab/laplace_inversion.hpp"

namespace relaylab {

namespace {

constexpr double kPi = std::numbers::pi;
// exp(-kExpFloor) ~ 1e-18: beyond this exponent a success weight is treated
// as zero and integration regions are trimmed accordingly.
constexpr double kExpFloor = 41.5;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_exponent(double alpha) {
  if (alpha <= 2.0)
    throw ConfigError("non-integrable path loss: exponent must exceed 2");
}

// Coefficient c of the closed-form exponent c * s^(2/alpha).
double transform_coeff(const TransformParams& tp) {
  const double alpha = tp.path_loss_exp;
  return (2.0 / alpha) * kPi * kPi * tp.density *
         std::pow(tp.tx_power, 2.0 / alpha) / std::sin(2.0 * kPi / alpha);
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0)) throw ConfigError("quadrature.rel_tol: must be > 0");
  if (!(abs_tol > 0.0)) throw ConfigError("quadrature.abs_tol: must be > 0");
  if (max_subdivisions < 1)
    throw ConfigError("quadrature.max_subdivisions: must be >= 1");
  if (talbot_nodes < 8) throw ConfigError("quadrature.talbot_nodes: must be >= 8");
  if (stehfest_terms < 2 || stehfest_terms > 20 || stehfest_terms % 2 != 0)
    throw ConfigError("quadrature.stehfest_terms: must be even and in [2, 20]");
}

double laplace_single(double s, const TransformParams& tp) {
  check_exponent(tp.path_loss_exp);
  if (s < 0.0) throw NumericError("transform argument must be >= 0");
  if (s == 0.0 || tp.density == 0.0 || tp.tx_power == 0.0) return 1.0;
  const double delta = 2.0 / tp.path_loss_exp;
  return std::exp(-transform_coeff(tp) * std::pow(s, delta));
}

double laplace_joint_exponent(double s1, double s2, const TransformParams& tp,
                              const QuadratureSpec& spec) {
  check_exponent(tp.path_loss_exp);
  spec.validate();
  if (s1 < 0.0 || s2 < 0.0) throw NumericError("transform argument must be >= 0");
  if (tp.tx_power == 0.0 || (s1 == 0.0 && s2 == 0.0)) return 0.0;

  const double alpha = tp.path_loss_exp;
  const double p = tp.tx_power;
  const double d = tp.d_rd;

  // 1 - 1/((1+u1)(1+u2)) written as (u1+u2+u1*u2)/((1+u1)(1+u2)): no
  // cancellation in the far field where both u are tiny.
  auto bracket = [](double u1, double u2) {
    if (u1 > 1e15 || u2 > 1e15) return 1.0;
    return (u1 + u2 + u1 * u2) / ((1.0 + u1) * (1.0 + u2));
  };

  // Truncation radius: past r_t even the theta-maximal integrand (nearest
  // approach l = r - d) is below 1e-12, and the integrand only decays.
  const double scale1 = s1 > 0.0 ? std::pow(s1 * p, 1.0 / alpha) : 0.0;
  const double scale2 = s2 > 0.0 ? std::pow(s2 * p, 1.0 / alpha) : 0.0;
  double r_t = std::max({2.0 * d + 1.0, 4.0 * scale1, 4.0 * scale2, 1.0});
  for (;;) {
    const double u1 = s1 * p * inv_pow_from_sq(r_t * r_t, alpha);
    const double near = (r_t - d) * (r_t - d);
    const double u2 = s2 * p * inv_pow_from_sq(near, alpha);
    if (u1 + u2 + u1 * u2 < 1e-12) break;
    r_t *= 2.0;
    if (r_t > 1e12)
      throw NumericError("joint transform truncation radius exceeded 1e12 m");
  }

  QuadControl inner_ctl{0.1 * spec.rel_tol, 1e-16, 200};
  QuadControl outer_ctl{spec.rel_tol, spec.abs_tol, spec.max_subdivisions};

  auto radial = [&](double r) {
    const double u1 = s1 * p * inv_pow_from_sq(r * r, alpha);
    auto over_theta = [&](double theta) {
      const double l2 = r * r + d * d - 2.0 * r * d * std::cos(theta);
      const double u2 = s2 * p * inv_pow_from_sq(l2, alpha);
      return bracket(u1, u2);
    };
    // theta-symmetry: integrate half the circle and double
    const QuadResult inner = integrate(over_theta, 0.0, kPi, inner_ctl);
    return 2.0 * r * inner.value;
  };

  std::vector<double> seeds{scale1, scale2, 0.5 * d, d, 2.0 * d,
                            d + scale2, d - scale2};
  const QuadResult outer = integrate(radial, 0.0, r_t, seeds, outer_ctl);
  if (!outer.converged)
    throw NumericError(
        "joint transform quadrature did not converge; error estimate " +
        std::to_string(outer.error));
  return outer.value;
}

double laplace_joint(double s1, double s2, const TransformParams& tp,
                     const QuadratureSpec& spec) {
  if (tp.density == 0.0) {
    check_exponent(tp.path_loss_exp);
    spec.validate();
    if (s1 < 0.0 || s2 < 0.0)
      throw NumericError("transform argument must be >= 0");
    return 1.0;
  }
  return std::exp(-tp.density * laplace_joint_exponent(s1, s2, tp, spec));
}

namespace {

// Chernoff bound on the left tail of the harvested power: for any x > 0,
// P[Q <= q] <= exp(q*x) * E[exp(-x*Q)] = exp(q*x - c*x^delta); minimized at
// x* = (c*delta/q)^(1/(1-delta)). Below the q where this dips under the
// weight floor, density and CDF are treated as exact zeros -- which also
// keeps the numerical inversion away from arguments where its contour fails.
double left_tail_exponent(double q, double coeff, double delta) {
  const double xstar = std::pow(coeff * delta / q, 1.0 / (1.0 - delta));
  return q * xstar - coeff * std::pow(xstar, delta);
}

// The q at which the bound above equals exp(-kExpFloor).
double left_tail_cutoff(double coeff, double delta) {
  return std::pow(coeff, 1.0 / delta) * delta *
         std::pow((1.0 - delta) / kExpFloor, (1.0 - delta) / delta);
}

// Inverts the harvested-power transform exp(-c*s^delta) (optionally /s for
// the CDF) at t = q with the configured backend.
double invert_qr(double q, double coeff, double delta, bool cdf,
                 const QuadratureSpec& spec) {
  if (left_tail_exponent(q, coeff, delta) < -kExpFloor) return 0.0;
  if (spec.inversion == InversionMethod::Talbot) {
    auto log_transform = [&](std::complex<double> s) {
      std::complex<double> z = -coeff * std::pow(s, delta);
      return cdf ? z - std::log(s) : z;
    };
    return talbot_invert_logf(log_transform, q, spec.talbot_nodes);
  }
  auto transform = [&](double s) {
    const double f = std::exp(-coeff * std::pow(s, delta));
    return cdf ? f / s : f;
  };
  return gaver_stehfest_invert(transform, q, spec.stehfest_terms);
}

struct QrTransform {
  double coeff;
  double delta;
};

QrTransform qr_transform(const SystemParams& params) {
  const TransformParams tp = TransformParams::carriers(params);
  check_exponent(tp.path_loss_exp);
  if (tp.density == 0.0 || tp.tx_power == 0.0)
    throw ConfigError(
        "harvested-power distribution is degenerate without carriers "
        "(zeta_tilde and ptilde_t must be > 0)");
  return {transform_coeff(tp), 2.0 / tp.path_loss_exp};
}

}  // namespace

double pdf_qr_unclamped(double q, const SystemParams& params,
                        const QuadratureSpec& spec) {
  if (!(q > 0.0)) throw NumericError("density argument must be > 0");
  spec.validate();
  const QrTransform t = qr_transform(params);
  return invert_qr(q, t.coeff, t.delta, false, spec);
}

double pdf_qr(double q, const SystemParams& params, const QuadratureSpec& spec) {
  return std::max(0.0, pdf_qr_unclamped(q, params, spec));
}

double cdf_qr(double q, const SystemParams& params, const QuadratureSpec& spec) {
  if (!(q > 0.0)) throw NumericError("density argument must be > 0");
  spec.validate();
  const QrTransform t = qr_transform(params);
  const double v = invert_qr(q, t.coeff, t.delta, true, spec);
  return std::clamp(v, 0.0, 1.0);
}

QrDensityTable::QrDensityTable(const SystemParams& params,
                               const QuadratureSpec& spec)
    : params_(params), spec_(spec) {
  spec_.validate();
  const QrTransform t = qr_transform(params_);
  // Scale anchor: the q at which the transform exponent is O(1). The grid
  // starts where the left-tail bound stops being an exact zero.
  const double q_bar = std::pow(t.coeff, 1.0 / t.delta);
  q_lo_ = std::max(1e-4 * q_bar, left_tail_cutoff(t.coeff, t.delta));
  q_hi_ = 1e4 * q_bar;

  constexpr int kPoints = 256;
  std::vector<double> ln_q(kPoints), f(kPoints);
  double peak = 0.0, most_negative = 0.0;
  const double step = std::log(q_hi_ / q_lo_) / (kPoints - 1);
  for (int i = 0; i < kPoints; ++i) {
    ln_q[i] = std::log(q_lo_) + i * step;
    const double raw = invert_qr(std::exp(ln_q[i]), t.coeff, t.delta, false, spec_);
    if (!std::isfinite(raw))
      throw NumericError("harvested-power inversion returned a non-finite value");
    peak = std::max(peak, raw);
    most_negative = std::min(most_negative, raw);
    f[i] = std::max(0.0, raw);
  }
  neg_excursion_ = peak > 0.0 ? -most_negative / peak : 0.0;
  pdf_ln_ = PchipInterpolant(std::move(ln_q), std::move(f));
}

double QrDensityTable::pdf(double q) const {
  if (q <= 0.0) throw NumericError("density argument must be > 0");
  if (q < q_lo_) return 0.0;  // left tail decays super-exponentially
  if (q > q_hi_) return pdf_qr(q, params_, spec_);
  return pdf_ln_(std::log(q));
}

double QrDensityTable::cdf(double q) const { return cdf_qr(q, params_, spec_); }

namespace {

// Shared state for the three closed-form terms. All success events factor
// through the same handful of transforms, so they are computed once: the
// S->R hop weight, the joint D-hop failure weight tabulated over its
// argument range, and the harvested-power density table.
class TermEvaluator {
 public:
  TermEvaluator(const SystemParams& p, const AnalyticOptions& opts)
      : p_(p), opts_(opts), density_(p, opts.quad) {
    const double alpha = p_.alpha;
    g1_ = std::pow(p_.d_sr, alpha) * p_.tau_a / p_.p_s;
    itp_ = TransformParams::interferers(p_);
    exp_g1_ = p_.sigma2 > 0.0 ? std::exp(-g1_ * p_.sigma2) : 1.0;
    l_ir_g1_ = laplace_single(g1_, itp_);
    interference_ = itp_.density > 0.0 && itp_.tx_power > 0.0;

    k2_ = std::pow(p_.d_rd, alpha) * p_.tau_a * (1.0 - p_.eta) / 2.0;
    g3_scale_ = std::pow(p_.d_rd, alpha) * p_.tau_p / (p_.gamma_refl * p_.xi);

    b1_ = p_.q_saturate();
    b2_ = p_.q_passive();
    b3_ = p_.q_active();
    if (opts_.saturation == SaturationRule::EnergyHeadroom) {
      b_mid_ = b1_;
      sat_exists_ = p_.e_c > p_.e_a;
      g2_sat_ = sat_exists_ ? k2_ / (p_.e_c - p_.e_a) : kInf;
    } else {
      b_mid_ = b1_ + b3_;
      sat_exists_ = true;
      g2_sat_ = k2_ / p_.e_c;
    }

    // Map the fail-weight floor back to a q cutoff: below q_cut_ the active
    // D-hop success weight is under ~1e-18 and the integrand is dropped.
    double cap = kInf;
    if (p_.sigma2 > 0.0) cap = kExpFloor / p_.sigma2;
    if (interference_) {
      const double c_i = transform_coeff(itp_);
      cap = std::min(cap, std::pow(kExpFloor / c_i, 0.5 * alpha));
    }
    s2_cap_ = cap;
    q_cut_ = std::isfinite(cap) ? (p_.e_a + k2_ / cap) / p_.eta_beta() : b3_;

    if (interference_ && g2_sat_ < s2_cap_) build_joint_table();
  }

  double g2_of(double q) const {
    const double stored = p_.eta_beta() * q;
    if (stored <= p_.e_a) return kInf;
    return k2_ / (stored - p_.e_a);
  }

  // P[active D-hop clears its threshold | harvested q], marginalized over
  // interference and fading: exp(-sigma2*s2) * joint transform at (g1, s2).
  double fail_weight(double s2) const {
    if (s2 >= s2_cap_) return 0.0;
    double expo = p_.sigma2 > 0.0 ? p_.sigma2 * s2 : 0.0;
    if (interference_) {
      // table exists whenever an s2 below the cap is reachable
      if (!have_table_) return 0.0;
      expo += itp_.density * joint_exponent_(std::log(s2));
    }
    return std::exp(-expo);
  }

  // P[passive D-hop clears its threshold | harvested q] (noise-only link).
  double passive_weight(double q) const {
    if (p_.sigma2_tilde == 0.0) return 1.0;
    return std::exp(-g3_scale_ * p_.sigma2_tilde / q);
  }

  double pa() const {
    const double lo = std::max(b3_, q_cut_);
    double interior = 0.0;
    if (b_mid_ > lo) {
      auto f = [&](double q) {
        return fail_weight(g2_of(q)) * density_.pdf(q);
      };
      interior = integrate_term(f, lo, b_mid_, layer_breakpoints(lo, b_mid_));
    }
    double sat = 0.0;
    if (sat_exists_)
      sat = fail_weight(g2_sat_) * (1.0 - density_.cdf(b_mid_));
    return exp_g1_ * (interior + sat);
  }

  double j() const {
    double interior = 0.0;
    if (b_mid_ > b3_) {
      auto f = [&](double q) {
        const double bracket = l_ir_g1_ - fail_weight(g2_of(q));
        return passive_weight(q) * bracket * density_.pdf(q);
      };
      interior = integrate_term(f, b3_, b_mid_, layer_breakpoints(b3_, b_mid_));
    }
    double sat = 0.0;
    if (sat_exists_) {
      const double bracket = l_ir_g1_ - fail_weight(g2_sat_);
      sat = bracket * tail_passive_mass();
    }
    return exp_g1_ * (interior + sat);
  }

  double k() const {
    if (b3_ <= b2_) return 0.0;
    auto f = [&](double q) { return passive_weight(q) * density_.pdf(q); };
    // log-spaced breakpoints: the passive weight has a 1/q boundary layer
    std::vector<double> bps;
    const double lo = std::max(b2_, density_.grid_min());
    if (lo >= b3_) return 0.0;
    for (int i = 1; i < 8; ++i)
      bps.push_back(lo * std::pow(b3_ / lo, i / 8.0));
    const double integral = integrate_term(f, lo, b3_, bps);
    return exp_g1_ * l_ir_g1_ * integral;
  }

 private:
  void build_joint_table() {
    constexpr int kPoints = 128;
    const double lo = g2_sat_ * 0.99;
    const double hi = s2_cap_ * 1.01;
    std::vector<double> ln_s(kPoints), expo(kPoints);
    const double step = std::log(hi / lo) / (kPoints - 1);
    // Tabulate the density-free double integral; the joint transform is
    // exp(-density * value) and the table is monotone in ln s2. Working on
    // the exponent keeps the table finite where the transform itself
    // underflows to zero.
    for (int i = 0; i < kPoints; ++i) {
      ln_s[i] = std::log(lo) + i * step;
      const double s2 = std::exp(ln_s[i]);
      expo[i] = laplace_joint_exponent(g1_, s2, itp_, opts_.quad);
      if (!std::isfinite(expo[i]))
        throw NumericError("joint transform exponent is non-finite");
    }
    joint_exponent_ = PchipInterpolant(std::move(ln_s), std::move(expo));
    have_table_ = true;
  }

  // Passive-success mass above the saturation boundary.
  double tail_passive_mass() const {
    const double q_hi = density_.grid_max();
    double mass = 0.0;
    if (b_mid_ < q_hi) {
      auto f = [&](double q) { return passive_weight(q) * density_.pdf(q); };
      std::vector<double> bps;
      for (int i = 1; i < 6; ++i)
        bps.push_back(b_mid_ * std::pow(q_hi / b_mid_, i / 6.0));
      mass += integrate_term(f, b_mid_, q_hi, bps);
      mass += passive_weight(q_hi) * (1.0 - density_.cdf(q_hi));
    } else {
      mass += passive_weight(b_mid_) * (1.0 - density_.cdf(b_mid_));
    }
    return mass;
  }

  double integrate_term(const std::function<double(double)>& f, double a,
                        double b, std::vector<double> bps) const {
    QuadControl ctl{opts_.quad.rel_tol, opts_.quad.abs_tol,
                    opts_.quad.max_subdivisions};
    const QuadResult res = integrate(f, a, b, std::move(bps), ctl);
    if (!res.converged)
      throw NumericError(
          "term quadrature did not converge; error estimate " +
          std::to_string(res.error));
    return res.value;
  }

  // Geometric approach points toward the lower endpoint, where the success
  // weights have their sharp transitions.
  static std::vector<double> layer_breakpoints(double lo, double hi) {
    std::vector<double> bps;
    for (int k = 6; k >= 1; --k) bps.push_back(lo + (hi - lo) * std::pow(10.0, -k));
    return bps;
  }

  const SystemParams& p_;
  const AnalyticOptions& opts_;
  QrDensityTable density_;
  TransformParams itp_{};
  PchipInterpolant joint_exponent_;
  bool have_table_ = false;
  bool interference_ = false;
  bool sat_exists_ = false;
  double g1_ = 0.0, exp_g1_ = 1.0, l_ir_g1_ = 1.0;
  double k2_ = 0.0, g3_scale_ = 0.0;
  double b1_ = 0.0, b2_ = 0.0, b3_ = 0.0, b_mid_ = 0.0;
  double g2_sat_ = kInf, s2_cap_ = kInf, q_cut_ = 0.0;
};

bool degenerate_no_harvest(const SystemParams& p) {
  return p.zeta_tilde == 0.0 || p.ptilde_t == 0.0 || p.p_s == 0.0;
}

}  // namespace

SuccessTerms evaluate_terms(const SystemParams& params, const AnalyticOptions& opts) {
  params.validate();
  opts.quad.validate();
  SuccessTerms out;
  // No harvested energy (or no source signal) means no success event has
  // positive probability; the transforms degenerate, so short-circuit.
  if (degenerate_no_harvest(params)) return out;

  TermEvaluator eval(params, opts);
  out.pa = eval.pa();
  out.j = eval.j();
  out.k = eval.k();
  const double raw = out.pa + out.j + out.k;
  constexpr double kSumSlack = 3e-3;
  out.clamped = raw < -kSumSlack || raw > 1.0 + kSumSlack;
  out.total = std::clamp(raw, 0.0, 1.0);
  return out;
}

double term_pa(const SystemParams& params, const AnalyticOptions& opts) {
  params.validate();
  opts.quad.validate();
  if (degenerate_no_harvest(params)) return 0.0;
  return TermEvaluator(params, opts).pa();
}

double term_j(const SystemParams& params, const AnalyticOptions& opts) {
  params.validate();
  opts.quad.validate();
  if (degenerate_no_harvest(params)) return 0.0;
  return TermEvaluator(params, opts).j();
}

double term_k(const SystemParams& params, const AnalyticOptions& opts) {
  params.validate();
  opts.quad.validate();
  if (degenerate_no_harvest(params)) return 0.0;
  return TermEvaluator(params, opts).k();
}

double success_prob_optimal(const SystemParams& params, const AnalyticOptions& opts) {
  return evaluate_terms(params, opts).total;
}

}  // namespace relaylab
