#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "relaylab/analytic.hpp"
#include "relaylab/errors.hpp"
#include "relaylab/params.hpp"
#include "relaylab/quadrature.hpp"

using namespace relaylab;

namespace {

SystemParams levy_params() {
  // power links at exponent 4 make the harvested power an exact stable law:
  // transform exp(-c*sqrt(s)) with c = pi^2 * zeta_tilde * sqrt(ptilde_t) / 2
  SystemParams p;
  p.alpha_tilde = 4.0;
  return p;
}

double levy_c(const SystemParams& p) {
  return M_PI * M_PI * p.zeta_tilde * std::sqrt(p.ptilde_t) / 2.0;
}

double levy_pdf(double q, double c) {
  return c / (2.0 * std::sqrt(M_PI)) * std::pow(q, -1.5) *
         std::exp(-c * c / (4.0 * q));
}

double levy_cdf(double q, double c) { return std::erfc(c / (2.0 * std::sqrt(q))); }

}  // namespace

TEST_CASE("single-receiver functional matches the explicit formula") {
  SystemParams p;
  const TransformParams tp = TransformParams::interferers(p);
  // alpha = 4: exponent (2/4) pi^2 zeta sqrt(s P) csc(pi/2)
  for (double s : {1e3, 1e5, 3e5}) {
    const double expo = 0.5 * M_PI * M_PI * p.zeta * std::sqrt(s * p.p_t);
    CHECK(laplace_single(s, tp) == doctest::Approx(std::exp(-expo)).epsilon(1e-12));
  }
  CHECK(laplace_single(0.0, tp) == doctest::Approx(1.0));
  TransformParams empty = tp;
  empty.density = 0.0;
  CHECK(laplace_single(1e5, empty) == doctest::Approx(1.0));
  CHECK_THROWS_AS(laplace_single(-1.0, tp), NumericError);
}

TEST_CASE("joint functional degenerates, brackets, and commutes") {
  SystemParams p;
  const TransformParams tp = TransformParams::interferers(p);
  const double s1 = 2e5, s2 = 8e4;
  const double joint = laplace_joint(s1, s2, tp);
  // one receiver silent -> single-receiver functional
  CHECK(laplace_joint(s1, 0.0, tp) ==
        doctest::Approx(laplace_single(s1, tp)).epsilon(1e-6));
  // shared interferers hurt both receivers at once: the joint transform
  // cannot exceed either marginal
  CHECK(joint <= laplace_single(s1, tp) * (1 + 1e-9));
  CHECK(joint <= laplace_single(s2, tp) * (1 + 1e-9));
  // receivers are exchangeable
  CHECK(laplace_joint(s2, s1, tp) == doctest::Approx(joint).epsilon(1e-9));
  // independence lower bound: positive correlation of the two aggregates
  CHECK(joint >= laplace_single(s1, tp) * laplace_single(s2, tp) * (1 - 1e-9));
}

TEST_CASE("joint exponent stays representable through deep attenuation") {
  SystemParams p;
  const TransformParams tp = TransformParams::interferers(p);
  const double s1 = 3.125e5;
  const double expo = laplace_joint_exponent(s1, 1e6, tp);
  CHECK(laplace_joint(s1, 1e6, tp) ==
        doctest::Approx(std::exp(-tp.density * expo)).epsilon(1e-9));
  // far beyond underflow of the functional itself
  const double deep = laplace_joint_exponent(s1, 1e11, tp);
  CHECK(std::isfinite(deep));
  CHECK(deep > expo);
  CHECK(laplace_joint(s1, 1e11, tp) == doctest::Approx(0.0));
}

TEST_CASE("harvested-power density and cdf match the stable-law oracle") {
  const SystemParams p = levy_params();
  const double c = levy_c(p);
  const double q_bar = c * c;
  for (double mult : {0.01, 0.1, 1.0, 10.0, 100.0}) {
    const double q = mult * q_bar;
    CHECK(pdf_qr(q, p) == doctest::Approx(levy_pdf(q, c)).epsilon(1e-3));
    CHECK(cdf_qr(q, p) == doctest::Approx(levy_cdf(q, c)).epsilon(1e-3));
  }
  CHECK_THROWS_AS(pdf_qr(0.0, p), NumericError);
  CHECK_THROWS_AS(cdf_qr(-1.0, p), NumericError);
}

TEST_CASE("density table: quality gate, normalization, cdf consistency") {
  SystemParams p;  // defaults: alpha_tilde = 3, the production case
  QuadratureSpec spec;
  const QrDensityTable table(p, spec);
  CHECK(table.negative_excursion() <= 1e-4);

  // table integrates to 1 over its own grid (mass outside is negligible)
  const double mass =
      integrate([&](double lnq) { return table.pdf(std::exp(lnq)) * std::exp(lnq); },
                std::log(table.grid_min()), std::log(table.grid_max()),
                QuadControl{1e-9, 1e-12, 4000})
          .value;
  CHECK(mass == doctest::Approx(1.0).epsilon(2e-3));

  // cdf is monotone and saturates
  double prev = 0.0;
  for (double mult : {1e-2, 0.1, 0.5, 1.0, 2.0, 10.0, 1e3}) {
    const double v = table.cdf(mult * 6.62e-3);
    CHECK(v >= prev - 1e-12);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    prev = v;
  }
  CHECK(table.cdf(table.grid_max()) > 0.99);
}

TEST_CASE("terms are nonnegative, sum to the total, land in [0, 1]") {
  SystemParams p;
  for (SaturationRule rule : {SaturationRule::EnergyHeadroom, SaturationRule::TransmitPower}) {
    AnalyticOptions opts;
    opts.saturation = rule;
    const SuccessTerms t = evaluate_terms(p, opts);
    CHECK(t.pa >= 0.0);
    CHECK(t.j >= 0.0);
    CHECK(t.k >= 0.0);
    CHECK_FALSE(t.clamped);
    CHECK(t.total == doctest::Approx(t.pa + t.j + t.k).epsilon(1e-12));
    CHECK(t.total > 0.0);
    CHECK(t.total < 1.0);
    CHECK(success_prob_optimal(p, opts) == doctest::Approx(t.total));
    CHECK(term_pa(p, opts) == doctest::Approx(t.pa).epsilon(1e-9));
    CHECK(term_j(p, opts) == doctest::Approx(t.j).epsilon(1e-9));
    CHECK(term_k(p, opts) == doctest::Approx(t.k).epsilon(1e-9));
  }
}

TEST_CASE("the two saturation conventions stay within numerical shouting distance") {
  // they share every branch except the saturated transmit power, and at the
  // baseline energy point that difference is far inside the MC tolerance
  SystemParams p;
  AnalyticOptions headroom, tx;
  headroom.saturation = SaturationRule::EnergyHeadroom;
  tx.saturation = SaturationRule::TransmitPower;
  const double d = std::abs(success_prob_optimal(p, headroom) -
                            success_prob_optimal(p, tx));
  CHECK(d < 1e-3);
}

TEST_CASE("success decreases when either decode threshold rises") {
  SystemParams p;
  const double base = success_prob_optimal(p);
  SystemParams harder_a = p;
  harder_a.tau_a = 4.0 * p.tau_a;
  CHECK(success_prob_optimal(harder_a) < base);
  SystemParams harder_p = p;
  harder_p.tau_p = 4.0 * p.tau_p;
  CHECK(success_prob_optimal(harder_p) <= base + 1e-12);
}

TEST_CASE("interference-free network succeeds more often") {
  SystemParams p;
  SystemParams quiet = p;
  quiet.zeta = 0.0;
  CHECK(success_prob_optimal(quiet) > success_prob_optimal(p));
}

TEST_CASE("degenerate energy settings still evaluate cleanly") {
  // storage cap below the active circuit cost: saturated slots cannot pay
  // the cost under the headroom convention, so the saturated branch vanishes
  SystemParams p;
  p.e_c = 1e-4;  // < e_a = 2e-4
  AnalyticOptions opts;
  opts.saturation = SaturationRule::EnergyHeadroom;
  const SuccessTerms t = evaluate_terms(p, opts);
  CHECK(t.total >= 0.0);
  CHECK(t.total <= 1.0);
  CHECK(t.pa >= 0.0);
}

TEST_CASE("parameter validation propagates") {
  SystemParams p;
  p.alpha = 2.0;
  CHECK_THROWS_AS(success_prob_optimal(p), ConfigError);
  SystemParams q;
  q.e_a = 1e-6;  // below e_p = 1e-5
  CHECK_THROWS_AS(success_prob_optimal(q), ConfigError);
  QuadratureSpec bad;
  bad.talbot_nodes = 2;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}
