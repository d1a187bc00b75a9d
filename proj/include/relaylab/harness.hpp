#pragma once

#include <string>
#include <vector>

#include "relaylab/config.hpp"

namespace relaylab {

struct ResultRow {
  double sweep_value = 0.0;
  std::string estimator;
  double estimate = 0.0;
  double std_error = 0.0;      // 0 for closed-form entries
  long long replications = 0;  // slots for MC rows, episodes for bandit rows
};

// One fig4 row per (policy, round); schedule columns repeat per policy.
struct RegretRow {
  std::string policy;
  long long round = 0;
  double cum_regret = 0.0;  // averaged over replications
  double mean_arm0 = 0.0;
  double mean_arm1 = 0.0;
  double best_mean = 0.0;
};

struct FigTables {
  ExperimentId experiment = ExperimentId::Custom;
  std::vector<ResultRow> rows;         // fig2 / fig3
  std::vector<RegretRow> regret_rows;  // fig4
};

std::vector<ResultRow> run_fig2(const ExperimentConfig& config);
std::vector<ResultRow> run_fig3(const ExperimentConfig& config);
std::vector<RegretRow> run_fig4(const ExperimentConfig& config);

// Writes <out_dir>/<experiment>_seed<seed>.csv and .svg; every output is
// rendered before the first byte lands on disk.
void emit_outputs(const FigTables& tables, const ExperimentConfig& config);

// Dispatches on config.experiment and emits the outputs.
void run_experiment(const ExperimentConfig& config);

// Seed derivation shared by the harness and the tests: master seed ->
// per-purpose stream -> per-point/per-replication substream.
std::uint64_t mc_stream_seed(const ExperimentConfig& config, int point);
std::uint64_t env_stream_seed(const ExperimentConfig& config, int point, int rep);
std::uint64_t policy_stream_seed(const ExperimentConfig& config, int point, int rep,
                                 int policy_index);

}  // namespace relaylab
