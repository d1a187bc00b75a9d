#pragma once

#include <cstdint>

#include "relaylab/params.hpp"

namespace relaylab {

// Everything observable about one simulated slot, scored counterfactually
// under both forwarding modes so any selection policy can be replayed on the
// same randomness.
struct SlotOutcome {
  double q_r = 0.0;           // incident carrier power at the relay, W
  double e_r = 0.0;           // harvested energy, J (= eta*beta*q_r)
  double nu_r = 0.0;          // S->R SINR
  double p_a_tx = 0.0;        // active-mode transmit power, W
  double nu_d_active = 0.0;   // R->D SINR, active mode
  double nu_d_passive = 0.0;  // R->D SNR, backscatter mode
  bool success_active = false;
  bool success_passive = false;
};

// Energy-constrained active transmit power: full-rate when the store
// saturates, proportional when the harvest covers the circuit cost, zero
// otherwise.
double transmit_power_active(double q_r, const SystemParams& params);

// Backscattered power: reflection coefficient times modulation efficiency
// times the incident power.
double backscatter_power(double q_r, const SystemParams& params);

// Deterministic slot scoring from already-sampled aggregates and fades.
SlotOutcome evaluate_slot(const SystemParams& params, double q_r, double i_r,
                          double i_d, double h_sr, double h_rd,
                          double h_rd_passive);

// Samples fresh carrier and interferer fields plus all fades from streams
// derived off slot_seed, then scores the slot. Carrier positions, interferer
// positions, and link fades live on separate sub-streams, so silencing one
// field leaves the other draws aligned (sample-path comparisons stay exact).
SlotOutcome simulate_slot(const SystemParams& params, std::uint64_t slot_seed);

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

struct SuccessEstimate {
  MeanSe active, passive, optimal;
  // the three disjoint events whose probabilities the closed form adds up
  MeanSe event_pa;  // active succeeds end to end
  MeanSe event_j;   // passive rescues an active D-hop failure, energy high
  MeanSe event_k;   // passive succeeds on the low-energy window
  // success of a fair-coin mode choice, for the random-selection baseline
  MeanSe random;
  std::uint64_t n_slots = 0;
};

// Monte Carlo estimate over n_slots independent slots. Slots are processed
// in fixed-size batches with per-slot derived seeds and integer event counts
// merged in batch order, so the result is identical for any thread count.
SuccessEstimate estimate_success_probs(const SystemParams& params,
                                       std::uint64_t n_slots,
                                       std::uint64_t stream_seed,
                                       int n_threads = 1);

}  // namespace relaylab
