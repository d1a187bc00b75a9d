#include "relaylab/relay_sim.hpp"

#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

#include "relaylab/errors.hpp"
#include "relaylab/geometry.hpp"
#include "relaylab/rng.hpp"

namespace relaylab {

double transmit_power_active(double q_r, const SystemParams& params) {
  if (q_r < 0.0) throw NumericError("incident power must be >= 0");
  const double stored = params.eta_beta() * q_r;
  const double budget = 2.0 / (1.0 - params.eta);
  if (params.saturation == SaturationRule::EnergyHeadroom) {
    // closed-form branch rule: cap net of the circuit cost
    if (stored >= params.e_c)
      return budget * std::max(0.0, params.e_c - params.e_a);
    if (stored >= params.e_a) return budget * (stored - params.e_a);
    return 0.0;
  }
  if (stored >= params.e_a + params.e_c) return budget * params.e_c;
  if (stored >= params.e_a) return budget * (stored - params.e_a);
  return 0.0;
}

double backscatter_power(double q_r, const SystemParams& params) {
  if (q_r < 0.0) throw NumericError("incident power must be >= 0");
  return params.gamma_refl * params.xi * q_r;
}

namespace {

// SINR with the convention that a zero-power numerator is a dead link even
// when the denominator is zero too.
double ratio(double signal, double noise_plus_interference) {
  if (signal <= 0.0) return 0.0;
  return signal / noise_plus_interference;
}

}  // namespace

SlotOutcome evaluate_slot(const SystemParams& params, double q_r, double i_r,
                          double i_d, double h_sr, double h_rd,
                          double h_rd_passive) {
  SlotOutcome out;
  out.q_r = q_r;
  out.e_r = params.eta_beta() * q_r;
  out.p_a_tx = transmit_power_active(q_r, params);
  const double g_sr = inv_pow_from_sq(params.d_sr * params.d_sr, params.alpha);
  const double g_rd = inv_pow_from_sq(params.d_rd * params.d_rd, params.alpha);
  out.nu_r = ratio(params.p_s * h_sr * g_sr, i_r + params.sigma2);
  out.nu_d_active = ratio(out.p_a_tx * h_rd * g_rd, i_d + params.sigma2);
  const double p_p = backscatter_power(q_r, params);
  out.nu_d_passive = ratio(p_p * h_rd_passive * g_rd, params.sigma2_tilde);
  const bool relay_decodes = out.nu_r > params.tau_a;
  out.success_active = out.e_r > params.e_a && relay_decodes &&
                       out.nu_d_active > params.tau_a;
  out.success_passive = out.e_r > params.e_p && relay_decodes &&
                        out.nu_d_passive > params.tau_p;
  return out;
}

SlotOutcome simulate_slot(const SystemParams& params, std::uint64_t slot_seed) {
  // Sub-stream split: 1 = carrier field, 2 = interferer field, 3 = fades.
  Rng carrier_rng(derive_seed(slot_seed, 1));
  Rng interferer_rng(derive_seed(slot_seed, 2));
  Rng fade_rng(derive_seed(slot_seed, 3));

  const Vec2 relay{0.0, 0.0};
  const Vec2 dest{params.d_rd, 0.0};
  const SimulationRegion region{{params.d_rd / 2.0, 0.0}, params.r_max};

  const PointField carriers =
      sample_ppp(params.zeta_tilde, region, carrier_rng, FieldClass::CarrierEmitter);
  const double q_r =
      shot_noise(carriers, relay, params.ptilde_t, params.alpha_tilde);

  PointField interferers =
      sample_ppp(params.zeta, region, interferer_rng, FieldClass::Interferer);
  const double i_r = shot_noise(interferers, relay, params.p_t, params.alpha);
  // same interferer positions, fresh fades toward the destination
  resample_marks(interferers, interferer_rng);
  const double i_d = shot_noise(interferers, dest, params.p_t, params.alpha);

  const double h_sr = fade_rng.exponential();
  const double h_rd = fade_rng.exponential();
  const double h_rd_passive = fade_rng.exponential();
  return evaluate_slot(params, q_r, i_r, i_d, h_sr, h_rd, h_rd_passive);
}

namespace {

struct BatchCounts {
  std::uint64_t active = 0, passive = 0, optimal = 0;
  std::uint64_t pa = 0, j = 0, k = 0;
  std::uint64_t random = 0;
};

constexpr std::uint64_t kBatchSize = 4096;

BatchCounts run_batch(const SystemParams& params, std::uint64_t stream_seed,
                      std::uint64_t first_slot, std::uint64_t count) {
  BatchCounts c;
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint64_t t = first_slot + i;
    const SlotOutcome slot = simulate_slot(params, derive_seed(stream_seed, t));
    const bool a = slot.success_active;
    const bool p = slot.success_passive;
    c.active += a;
    c.passive += p;
    c.optimal += a || p;
    c.pa += a;
    c.j += !a && p && slot.e_r > params.e_a && slot.nu_r > params.tau_a;
    c.k += p && slot.e_r <= params.e_a;
    // independent fair coin for the random-selection baseline
    Rng coin(derive_seed(stream_seed, t, 4));
    c.random += coin.bernoulli(0.5) ? a : p;
  }
  return c;
}

MeanSe to_mean_se(std::uint64_t count, std::uint64_t n) {
  MeanSe m;
  m.mean = static_cast<double>(count) / static_cast<double>(n);
  m.se = std::sqrt(m.mean * (1.0 - m.mean) / static_cast<double>(n));
  return m;
}

}  // namespace

SuccessEstimate estimate_success_probs(const SystemParams& params,
                                       std::uint64_t n_slots,
                                       std::uint64_t stream_seed, int n_threads) {
  params.validate();
  if (n_slots < 1) throw ConfigError("n_slots must be >= 1");
  if (n_threads < 1) n_threads = 1;

  const std::uint64_t n_batches = (n_slots + kBatchSize - 1) / kBatchSize;
  std::vector<BatchCounts> per_batch(n_batches);

  // Work is claimed by batch index; the merge below runs in index order, so
  // the totals (integer counts) are independent of the thread count.
  std::atomic<std::uint64_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::uint64_t b = next.fetch_add(1);
      if (b >= n_batches) return;
      const std::uint64_t first = b * kBatchSize;
      const std::uint64_t count = std::min(kBatchSize, n_slots - first);
      per_batch[b] = run_batch(params, stream_seed, first, count);
    }
  };
  if (n_threads == 1 || n_batches == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    const int used = static_cast<int>(
        std::min<std::uint64_t>(n_batches, static_cast<std::uint64_t>(n_threads)));
    pool.reserve(used);
    for (int i = 0; i < used; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  BatchCounts total;
  for (const BatchCounts& c : per_batch) {
    total.active += c.active;
    total.passive += c.passive;
    total.optimal += c.optimal;
    total.pa += c.pa;
    total.j += c.j;
    total.k += c.k;
    total.random += c.random;
  }

  SuccessEstimate est;
  est.n_slots = n_slots;
  est.active = to_mean_se(total.active, n_slots);
  est.passive = to_mean_se(total.passive, n_slots);
  est.optimal = to_mean_se(total.optimal, n_slots);
  est.event_pa = to_mean_se(total.pa, n_slots);
  est.event_j = to_mean_se(total.j, n_slots);
  est.event_k = to_mean_se(total.k, n_slots);
  est.random = to_mean_se(total.random, n_slots);
  return est;
}

}  // namespace relaylab
