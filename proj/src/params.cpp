#include "relaylab/params.hpp"

#include <cmath>
#include <string>

#include "relaylab/errors.hpp"

namespace relaylab {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }

namespace {

void require(bool ok, const std::string& field, const std::string& rule) {
  if (!ok) throw ConfigError("system." + field + ": " + rule);
}

}  // namespace

void SystemParams::validate() const {
  require(d_sr > 0.0, "d_sr", "must be > 0");
  require(d_rd > 0.0, "d_rd", "must be > 0");
  require(p_t >= 0.0, "p_t", "must be >= 0");
  require(ptilde_t >= 0.0, "ptilde_t", "must be >= 0");
  require(zeta >= 0.0, "zeta", "must be >= 0");
  require(zeta_tilde >= 0.0, "zeta_tilde", "must be >= 0");
  require(p_s >= 0.0, "p_s", "must be >= 0");
  require(e_a >= 0.0, "e_a", "must be >= 0");
  require(e_p >= 0.0, "e_p", "must be >= 0");
  require(e_a > e_p, "e_a", "must exceed e_p (active circuitry dominates)");
  require(e_c > 0.0, "e_c", "must be > 0");
  require(alpha > 2.0, "alpha", "must be > 2 for an integrable far field");
  require(alpha_tilde > 2.0, "alpha_tilde", "must be > 2 for an integrable far field");
  require(beta > 0.0 && beta <= 1.0, "beta", "must lie in (0, 1]");
  require(gamma_refl > 0.0 && gamma_refl <= 1.0, "gamma_refl", "must lie in (0, 1]");
  require(eta > 0.0 && eta < 1.0, "eta", "must lie in (0, 1)");
  require(xi > 0.0 && xi <= 1.0, "xi", "must lie in (0, 1]");
  require(sigma2 >= 0.0, "sigma2", "must be >= 0");
  require(sigma2_tilde >= 0.0, "sigma2_tilde", "must be >= 0");
  require(tau_a > 0.0, "tau_a", "must be > 0 (linear ratio)");
  require(tau_p > 0.0, "tau_p", "must be > 0 (linear ratio)");
  require(r_max > 0.0, "r_max", "must be > 0");
}

}  // namespace relaylab
