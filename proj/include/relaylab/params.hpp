#pragma once

namespace relaylab {

// Power-ratio and power-level conversions used by config keys with a _db /
// _dbm suffix.
double db_to_linear(double db);
double dbm_to_watts(double dbm);

// How the relay spends stored energy when the store saturates: either the
// transmit power is pinned by the storage cap alone, or the saturated slot
// additionally pays the circuit cost out of the cap.
enum class SaturationRule { TransmitPower, EnergyHeadroom };

// Physical description of one relay deployment: link geometry, the two
// ambient Poisson fields (interferers around both hops, dedicated power
// carriers around the relay), the energy model, and the decode thresholds.
// Defaults are the baseline operating point used across the experiments.
struct SystemParams {
  double d_sr = 5.0;    // source-to-relay distance, m
  double d_rd = 5.0;    // relay-to-destination distance, m
  double p_t = 1.9952623149688795e-3;        // interferer tx power, W (3 dBm)
  double ptilde_t = 10.0;                    // carrier tx power, W (40 dBm)
  double zeta = 1e-3;         // interferer density, points / m^2
  double zeta_tilde = 1e-3;   // carrier density, points / m^2
  double p_s = 2e-3;          // source tx power, W
  double e_a = 200e-6;        // active-mode circuit energy per slot, J
  double e_p = 10e-6;         // passive-mode circuit energy per slot, J
  double e_c = 2e-3;          // energy-storage capacity, J
  double alpha = 4.0;         // path-loss exponent, data links
  double alpha_tilde = 3.0;   // path-loss exponent, power links
  double beta = 0.5;          // RF-to-DC conversion efficiency
  double gamma_refl = 0.375;  // backscatter reflection coefficient
  double eta = 0.4;           // fraction of the slot spent harvesting
  double xi = 0.3;            // backscatter modulation efficiency
  double sigma2 = 1e-10;        // receiver noise power, active links, W
  double sigma2_tilde = 1e-9;   // receiver noise power, passive link, W
  double tau_a = 1.0;     // SINR threshold, active mode (0 dB)
  double tau_p = 100.0;   // SNR threshold, passive mode (20 dB)
  double r_max = 500.0;   // simulated field radius, m
  SaturationRule saturation = SaturationRule::TransmitPower;

  // Energy-to-incident-power conversion: harvested energy is eta*beta*q for
  // incident power q, so thresholds on stored energy map to thresholds on q.
  double eta_beta() const { return eta * beta; }
  double q_saturate() const { return e_c / eta_beta(); }  // store full
  double q_active() const { return e_a / eta_beta(); }    // can pay active cost
  double q_passive() const { return e_p / eta_beta(); }   // can pay passive cost

  // Throws ConfigError naming the offending field.
  void validate() const;
};

}  // namespace relaylab
