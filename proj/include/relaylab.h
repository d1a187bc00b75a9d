/* C interface to the relay laboratory: opaque config handles, status codes,
 * and entry points for the closed-form evaluator, the Monte Carlo engine,
 * and the canned experiments. All functions are thread-safe as long as each
 * rl_config handle is used by one thread at a time. */
#ifndef RELAYLAB_H
#define RELAYLAB_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define RL_API __declspec(dllexport)
#else
#define RL_API __attribute__((visibility("default")))
#endif

/* Status codes double as process exit codes. */
typedef enum rl_status {
  RL_OK = 0,
  RL_ERR_CONFIG = 2,  /* bad configuration value or key */
  RL_ERR_NUMERIC = 3, /* quadrature / inversion did not converge */
  RL_ERR_IO = 4       /* file system failure */
} rl_status;

typedef struct rl_config rl_config;

/* Library version string, static storage. */
RL_API const char* rl_version(void);

/* Message for the calling thread's most recent failure; empty after any
 * successful call. Storage is thread-local; do not free. */
RL_API const char* rl_last_error(void);

/* experiment: "fig2" | "fig3" | "fig4" | "custom". Returns NULL on an
 * unknown name (message via rl_last_error). Free with rl_config_destroy. */
RL_API rl_config* rl_config_create(const char* experiment);
RL_API void rl_config_destroy(rl_config* cfg);

/* Applies an INI-style file (sections [system], [quadrature], [experiment])
 * on top of the current values. */
RL_API rl_status rl_config_load_file(rl_config* cfg, const char* path);

/* Sets one "section.field" key, e.g. ("system.zeta", "0.005"). */
RL_API rl_status rl_config_set(rl_config* cfg, const char* key, const char* value);

/* Closed-form end-to-end success probability, split into the three disjoint
 * event terms. */
typedef struct rl_terms {
  double pa;    /* active mode succeeds end to end */
  double j;     /* passive rescues an active-mode D-hop failure */
  double k;     /* passive succeeds on the low-energy window */
  double total; /* clamped sum */
  int clamped;  /* 1 if the raw sum left [0,1] by more than numerical slack */
} rl_terms;

/* rule < 0: the config's saturation rule; 0: the simulator's transmit-power
 * rule; 1: the closed form's saturation branch. */
RL_API rl_status rl_analytic_eval(const rl_config* cfg, int rule, rl_terms* out);

/* Monte Carlo estimates with standard errors, over experiment.n_slots slots
 * seeded from experiment.master_seed. */
typedef struct rl_estimate {
  double active, active_se;
  double passive, passive_se;
  double optimal, optimal_se;
  double random_sel, random_se; /* fair-coin mode choice */
  uint64_t n_slots;
} rl_estimate;

RL_API rl_status rl_simulate_eval(const rl_config* cfg, rl_estimate* out);

/* Runs the configured fig2/fig3/fig4 experiment and writes its CSV and SVG
 * outputs under experiment.out_dir. */
RL_API rl_status rl_run(const rl_config* cfg);

#ifdef __cplusplus
}
#endif

#endif /* RELAYLAB_H */
