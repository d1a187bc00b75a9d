#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relaylab/analytic.hpp"
#include "relaylab/bandit.hpp"
#include "relaylab/params.hpp"

namespace relaylab {

enum class ExperimentId { Fig2, Fig3, Fig4, Custom };

const char* experiment_name(ExperimentId id);
ExperimentId experiment_from_name(const std::string& name);

// Everything a run needs, resolvable from defaults + INI file + key overrides.
struct ExperimentConfig {
  ExperimentId experiment = ExperimentId::Custom;
  SystemParams system;
  QuadratureSpec quad;

  // Swept parameter ("zeta", "e_c", or "none") and its grid: interferer
  // densities for fig2, storage capacities in joules for fig3.
  std::string sweep = "none";
  std::vector<double> grid;

  long long n_slots = 200000;       // Monte Carlo slots per grid point
  int n_replications = 20;          // independent bandit episodes per point
  long long horizon = 10000;        // bandit rounds per episode
  int segments = 10;                // reward-mean segments for the fig4 race
  std::vector<PolicyKind> policies; // fig4 contenders / fig2-3 bandit column
  double gamma = 0.9;               // discount factor for discounted policies
  int etc_m = 100;                  // per-arm exploration length for etc
  bool canonical_discount = false;  // discounted counts inside the klucb budget
  double tail_fraction = 0.5;       // trailing share of rounds scored as the
                                    // bandit's achieved success rate
  RegretBaseline baseline = RegretBaseline::Dynamic;

  std::uint64_t master_seed = 1;
  std::uint64_t schedule_seed = kDefaultScheduleSeed;
  std::string out_dir = "out";
  int threads = 1;

  void validate() const;
};

ExperimentConfig default_config(ExperimentId id);

// "section.key" setter shared by the INI loader and the CLI --set flag.
// Throws ConfigError naming the key on any unknown key or malformed value.
void apply_key(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// Applies an INI file (sections [system], [quadrature], [experiment]) on top
// of cfg. Errors carry "path:line:" prefixes.
void load_config_file(ExperimentConfig& cfg, const std::string& path);

}  // namespace relaylab
