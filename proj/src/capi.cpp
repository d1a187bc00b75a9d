#include "relaylab.h"

#include <new>
#include <string>

#include "relaylab/analytic.hpp"
#include "relaylab/config.hpp"
#include "relaylab/errors.hpp"
#include "relaylab/harness.hpp"
#include "relaylab/relay_sim.hpp"

struct rl_config {
  relaylab::ExperimentConfig cfg;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
rl_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return RL_OK;
  } catch (const relaylab::ConfigError& e) {
    g_last_error = e.what();
    return RL_ERR_CONFIG;
  } catch (const relaylab::NumericError& e) {
    g_last_error = e.what();
    return RL_ERR_NUMERIC;
  } catch (const relaylab::IoError& e) {
    g_last_error = e.what();
    return RL_ERR_IO;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return RL_ERR_NUMERIC;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return RL_ERR_NUMERIC;
  }
}

}  // namespace

extern "C" {

const char* rl_version(void) { return "relaylab 1.0.0"; }

const char* rl_last_error(void) { return g_last_error.c_str(); }

rl_config* rl_config_create(const char* experiment) {
  rl_config* handle = nullptr;
  const rl_status st = guarded([&] {
    if (!experiment) throw relaylab::ConfigError("experiment name is null");
    const relaylab::ExperimentId id = relaylab::experiment_from_name(experiment);
    handle = new rl_config{relaylab::default_config(id)};
  });
  return st == RL_OK ? handle : nullptr;
}

void rl_config_destroy(rl_config* cfg) { delete cfg; }

rl_status rl_config_load_file(rl_config* cfg, const char* path) {
  return guarded([&] {
    if (!cfg) throw relaylab::ConfigError("config handle is null");
    if (!path) throw relaylab::ConfigError("config path is null");
    relaylab::load_config_file(cfg->cfg, path);
  });
}

rl_status rl_config_set(rl_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    if (!cfg) throw relaylab::ConfigError("config handle is null");
    if (!key || !value) throw relaylab::ConfigError("key/value is null");
    relaylab::apply_key(cfg->cfg, key, value);
  });
}

rl_status rl_analytic_eval(const rl_config* cfg, int rule, rl_terms* out) {
  return guarded([&] {
    if (!cfg) throw relaylab::ConfigError("config handle is null");
    if (!out) throw relaylab::ConfigError("output pointer is null");
    relaylab::AnalyticOptions opts;
    opts.quad = cfg->cfg.quad;
    if (rule < 0)
      opts.saturation = cfg->cfg.system.saturation;
    else
      opts.saturation = rule == 0 ? relaylab::SaturationRule::TransmitPower
                                  : relaylab::SaturationRule::EnergyHeadroom;
    const relaylab::SuccessTerms t =
        relaylab::evaluate_terms(cfg->cfg.system, opts);
    out->pa = t.pa;
    out->j = t.j;
    out->k = t.k;
    out->total = t.total;
    out->clamped = t.clamped ? 1 : 0;
  });
}

rl_status rl_simulate_eval(const rl_config* cfg, rl_estimate* out) {
  return guarded([&] {
    if (!cfg) throw relaylab::ConfigError("config handle is null");
    if (!out) throw relaylab::ConfigError("output pointer is null");
    cfg->cfg.validate();
    const relaylab::SuccessEstimate est = relaylab::estimate_success_probs(
        cfg->cfg.system, static_cast<std::uint64_t>(cfg->cfg.n_slots),
        relaylab::mc_stream_seed(cfg->cfg, 0), cfg->cfg.threads);
    out->active = est.active.mean;
    out->active_se = est.active.se;
    out->passive = est.passive.mean;
    out->passive_se = est.passive.se;
    out->optimal = est.optimal.mean;
    out->optimal_se = est.optimal.se;
    out->random_sel = est.random.mean;
    out->random_se = est.random.se;
    out->n_slots = est.n_slots;
  });
}

rl_status rl_run(const rl_config* cfg) {
  return guarded([&] {
    if (!cfg) throw relaylab::ConfigError("config handle is null");
    relaylab::run_experiment(cfg->cfg);
  });
}

}  // extern "C"
