// Command-line front end; talks to the library through the C interface only.
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "relaylab.h"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  long long replications = 0;
  long long slots = 0;
  double gamma = 0.0;
  bool canonical_discount = false;
  int threads = 0;
  std::vector<std::string> sets;

  CLI::Option* config_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* reps_opt = nullptr;
  CLI::Option* slots_opt = nullptr;
  CLI::Option* gamma_opt = nullptr;
  CLI::Option* threads_opt = nullptr;
};

void add_common_flags(CLI::App* sub, CommonFlags& f) {
  f.config_opt = sub->add_option("--config", f.config_path,
                                 "configuration file (key = value sections)");
  f.seed_opt = sub->add_option("--seed", f.seed, "master seed");
  f.out_opt = sub->add_option("--out", f.out_dir, "output directory");
  f.reps_opt = sub->add_option("--replications", f.replications,
                               "bandit episodes per grid point");
  f.slots_opt = sub->add_option("--slots", f.slots, "Monte Carlo slots per point");
  f.gamma_opt = sub->add_option("--gamma", f.gamma,
                                "discount factor for discounted policies");
  sub->add_flag("--canonical-discount", f.canonical_discount,
                "use discounted counts inside the confidence budget");
  f.threads_opt = sub->add_option("--threads", f.threads, "worker threads");
  sub->add_option("--set", f.sets,
                  "override one section.field=value; repeatable, applied last");
}

using ConfigHandle = std::unique_ptr<rl_config, decltype(&rl_config_destroy)>;

int fail(rl_status st) {
  std::fprintf(stderr, "error: %s\n", rl_last_error());
  return static_cast<int>(st);
}

// Builds the handle from defaults -> file -> flags -> --set overrides.
// Returns RL_OK and fills out on success.
rl_status build_config(const char* experiment, const CommonFlags& f,
                       ConfigHandle& out) {
  ConfigHandle cfg(rl_config_create(experiment), &rl_config_destroy);
  if (!cfg) return RL_ERR_CONFIG;
  rl_status st = RL_OK;
  auto set = [&](const char* key, const std::string& value) {
    if (st == RL_OK) st = rl_config_set(cfg.get(), key, value.c_str());
  };
  if (*f.config_opt) {
    st = rl_config_load_file(cfg.get(), f.config_path.c_str());
    if (st != RL_OK) return st;
  }
  if (*f.seed_opt) set("experiment.master_seed", std::to_string(f.seed));
  if (*f.out_opt) set("experiment.out_dir", f.out_dir);
  if (*f.reps_opt) set("experiment.replications", std::to_string(f.replications));
  if (*f.slots_opt) set("experiment.n_slots", std::to_string(f.slots));
  if (*f.gamma_opt) set("experiment.gamma", std::to_string(f.gamma));
  if (f.canonical_discount) set("experiment.canonical_discount", "true");
  if (*f.threads_opt) set("experiment.threads", std::to_string(f.threads));
  for (const std::string& kv : f.sets) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::fprintf(stderr, "error: --set needs section.field=value, got '%s'\n",
                   kv.c_str());
      return RL_ERR_CONFIG;
    }
    set(kv.substr(0, eq).c_str(), kv.substr(eq + 1));
  }
  if (st != RL_OK) return st;
  out = std::move(cfg);
  return RL_OK;
}

int run_figure(const char* experiment, const CommonFlags& f) {
  ConfigHandle cfg(nullptr, &rl_config_destroy);
  rl_status st = build_config(experiment, f, cfg);
  if (st != RL_OK) return fail(st);
  st = rl_run(cfg.get());
  if (st != RL_OK) return fail(st);
  std::printf("%s outputs written\n", experiment);
  return 0;
}

int run_analytic(const CommonFlags& f) {
  ConfigHandle cfg(nullptr, &rl_config_destroy);
  rl_status st = build_config("custom", f, cfg);
  if (st != RL_OK) return fail(st);
  rl_terms headroom{};
  rl_terms sim_rule{};
  st = rl_analytic_eval(cfg.get(), 1, &headroom);
  if (st != RL_OK) return fail(st);
  st = rl_analytic_eval(cfg.get(), 0, &sim_rule);
  if (st != RL_OK) return fail(st);
  std::printf("closed-form success split (saturation branch rule):\n");
  std::printf("  pa    = %.9f\n", headroom.pa);
  std::printf("  j     = %.9f\n", headroom.j);
  std::printf("  k     = %.9f\n", headroom.k);
  std::printf("  total = %.9f%s\n", headroom.total,
              headroom.clamped ? "  [clamped]" : "");
  std::printf("with the simulator's transmit-power rule:\n");
  std::printf("  total = %.9f  (difference %+.2e)\n", sim_rule.total,
              sim_rule.total - headroom.total);
  return 0;
}

int run_simulate(const CommonFlags& f) {
  ConfigHandle cfg(nullptr, &rl_config_destroy);
  rl_status st = build_config("custom", f, cfg);
  if (st != RL_OK) return fail(st);
  rl_estimate est{};
  st = rl_simulate_eval(cfg.get(), &est);
  if (st != RL_OK) return fail(st);
  std::printf("monte carlo estimates over %" PRIu64 " slots:\n", est.n_slots);
  std::printf("  active  = %.5f  (se %.5f)\n", est.active, est.active_se);
  std::printf("  passive = %.5f  (se %.5f)\n", est.passive, est.passive_se);
  std::printf("  optimal = %.5f  (se %.5f)\n", est.optimal, est.optimal_se);
  std::printf("  random  = %.5f  (se %.5f)\n", est.random_sel, est.random_se);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("hybrid relay laboratory (") + rl_version() +
               "): closed-form success analysis, Monte Carlo simulation, "
               "and online mode selection"};
  app.require_subcommand(1);

  CommonFlags fig2_f, fig3_f, fig4_f, analytic_f, simulate_f;
  CLI::App* fig2 = app.add_subcommand("fig2", "success probability vs interferer density");
  add_common_flags(fig2, fig2_f);
  CLI::App* fig3 = app.add_subcommand("fig3", "success probability vs storage capacity");
  add_common_flags(fig3, fig3_f);
  CLI::App* fig4 = app.add_subcommand("fig4", "bandit policy race on a shifting schedule");
  add_common_flags(fig4, fig4_f);
  CLI::App* analytic = app.add_subcommand("analytic", "print the closed-form success split");
  add_common_flags(analytic, analytic_f);
  CLI::App* simulate = app.add_subcommand("simulate", "print Monte Carlo estimates");
  add_common_flags(simulate, simulate_f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(RL_ERR_CONFIG);
  }

  if (fig2->parsed()) return run_figure("fig2", fig2_f);
  if (fig3->parsed()) return run_figure("fig3", fig3_f);
  if (fig4->parsed()) return run_figure("fig4", fig4_f);
  if (analytic->parsed()) return run_analytic(analytic_f);
  if (simulate->parsed()) return run_simulate(simulate_f);
  return static_cast<int>(RL_ERR_CONFIG);
}
