#include "relaylab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>

#include "relaylab/analytic.hpp"
#include "relaylab/errors.hpp"
#include "relaylab/io.hpp"
#include "relaylab/relay_sim.hpp"

namespace relaylab {

namespace {

// Purpose tags for the master-seed split; documented in FORMATS.md.
constexpr std::uint64_t kMcStream = 1;
constexpr std::uint64_t kEnvStream = 2;
constexpr std::uint64_t kPolicyStream = 3;

// Claims job indices from an atomic counter; results must be stored into
// index-addressed slots so the reduce order never depends on timing.
template <typename Fn>
void parallel_for(long long jobs, int threads, Fn&& fn) {
  if (jobs <= 0) return;
  const int workers = static_cast<int>(std::min<long long>(std::max(threads, 1), jobs));
  if (workers <= 1) {
    for (long long i = 0; i < jobs; ++i) fn(i);
    return;
  }
  std::atomic<long long> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const long long i = next.fetch_add(1);
      if (i >= jobs) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

MeanSe sample_mean_se(const std::vector<double>& xs) {
  MeanSe out;
  if (xs.empty()) return out;
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    const double var = ss / static_cast<double>(xs.size() - 1);
    out.se = std::sqrt(std::max(0.0, var) / static_cast<double>(xs.size()));
  }
  return out;
}

double tail_success_rate(const RegretTrace& trace, double tail_fraction) {
  const long long n = static_cast<long long>(trace.reward.size());
  long long tail = static_cast<long long>(std::llround(tail_fraction * static_cast<double>(n)));
  tail = std::min(n, std::max<long long>(1, tail));
  double sum = 0.0;
  for (long long t = n - tail; t < n; ++t)
    sum += trace.reward[static_cast<std::size_t>(t)];
  return sum / static_cast<double>(tail);
}

std::vector<ResultRow> run_sweep(const ExperimentConfig& config) {
  config.validate();
  const bool density_sweep = config.experiment == ExperimentId::Fig2;
  std::vector<ResultRow> rows;
  for (int point = 0; point < static_cast<int>(config.grid.size()); ++point) {
    const double value = config.grid[static_cast<std::size_t>(point)];
    SystemParams params = config.system;
    if (density_sweep)
      params.zeta = value;
    else
      params.e_c = value;
    params.validate();

    const SuccessEstimate est = estimate_success_probs(
        params, static_cast<std::uint64_t>(config.n_slots),
        mc_stream_seed(config, point), config.threads);
    const long long slots = config.n_slots;
    rows.push_back({value, "active_mc", est.active.mean, est.active.se, slots});
    rows.push_back({value, "passive_mc", est.passive.mean, est.passive.se, slots});
    rows.push_back({value, "optimal_mc", est.optimal.mean, est.optimal.se, slots});
    rows.push_back({value, "random_mc", est.random.mean, est.random.se, slots});

    AnalyticOptions opts;
    opts.quad = config.quad;
    opts.saturation = params.saturation;  // apples-to-apples with the MC rows
    rows.push_back({value, "optimal_analytic", success_prob_optimal(params, opts),
                    0.0, 0});

    for (int j = 0; j < static_cast<int>(config.policies.size()); ++j) {
      Policy policy;
      policy.kind = config.policies[static_cast<std::size_t>(j)];
      policy.gamma = config.gamma;
      policy.etc_m = config.etc_m;
      policy.canonical_discount = config.canonical_discount;
      std::vector<double> tails(static_cast<std::size_t>(config.n_replications), 0.0);
      parallel_for(config.n_replications, config.threads, [&](long long rep) {
        const RelaySlotEnv env(params,
                               env_stream_seed(config, point, static_cast<int>(rep)));
        const RegretTrace trace = run_episode(
            policy, env, config.horizon,
            policy_stream_seed(config, point, static_cast<int>(rep), j),
            config.baseline);
        tails[static_cast<std::size_t>(rep)] = tail_success_rate(trace, config.tail_fraction);
      });
      const MeanSe stat = sample_mean_se(tails);
      rows.push_back({value, std::string("bandit_") + policy_name(policy.kind),
                      stat.mean, stat.se, config.n_replications});
    }
  }
  return rows;
}

}  // namespace

std::uint64_t mc_stream_seed(const ExperimentConfig& config, int point) {
  return derive_seed(config.master_seed, kMcStream, static_cast<std::uint64_t>(point));
}

std::uint64_t env_stream_seed(const ExperimentConfig& config, int point, int rep) {
  return derive_seed(config.master_seed, kEnvStream, static_cast<std::uint64_t>(point),
                     static_cast<std::uint64_t>(rep));
}

std::uint64_t policy_stream_seed(const ExperimentConfig& config, int point, int rep,
                                 int policy_index) {
  return derive_seed(derive_seed(config.master_seed, kPolicyStream,
                                 static_cast<std::uint64_t>(point),
                                 static_cast<std::uint64_t>(rep)),
                     static_cast<std::uint64_t>(policy_index));
}

std::vector<ResultRow> run_fig2(const ExperimentConfig& config) {
  if (config.experiment != ExperimentId::Fig2)
    throw ConfigError("experiment: run_fig2 needs a fig2 config");
  return run_sweep(config);
}

std::vector<ResultRow> run_fig3(const ExperimentConfig& config) {
  if (config.experiment != ExperimentId::Fig3)
    throw ConfigError("experiment: run_fig3 needs a fig3 config");
  return run_sweep(config);
}

std::vector<RegretRow> run_fig4(const ExperimentConfig& config) {
  if (config.experiment != ExperimentId::Fig4)
    throw ConfigError("experiment: run_fig4 needs a fig4 config");
  config.validate();
  const ArmSchedule schedule =
      nonstationary_schedule(config.horizon, config.segments, config.schedule_seed);

  const std::size_t n_pol = config.policies.size();
  const std::size_t n_rep = static_cast<std::size_t>(config.n_replications);
  // results[rep][policy] = per-round cumulative regret of that episode
  std::vector<std::vector<std::vector<double>>> results(
      n_rep, std::vector<std::vector<double>>(n_pol));

  parallel_for(config.n_replications, config.threads, [&](long long rep) {
    const BernoulliEnv env(schedule,
                           env_stream_seed(config, 0, static_cast<int>(rep)));
    for (std::size_t j = 0; j < n_pol; ++j) {
      Policy policy;
      policy.kind = config.policies[j];
      policy.gamma = config.gamma;
      policy.etc_m = config.etc_m;
      policy.canonical_discount = config.canonical_discount;
      RegretTrace trace = run_episode(
          policy, env, config.horizon,
          policy_stream_seed(config, 0, static_cast<int>(rep), static_cast<int>(j)),
          config.baseline);
      results[static_cast<std::size_t>(rep)][j] = std::move(trace.cum_regret);
    }
  });

  std::vector<RegretRow> rows;
  rows.reserve(n_pol * static_cast<std::size_t>(config.horizon));
  for (std::size_t j = 0; j < n_pol; ++j) {
    for (long long t = 1; t <= config.horizon; ++t) {
      double sum = 0.0;
      for (std::size_t rep = 0; rep < n_rep; ++rep)
        sum += results[rep][j][static_cast<std::size_t>(t - 1)];
      RegretRow row;
      row.policy = policy_name(config.policies[j]);
      row.round = t;
      row.cum_regret = sum / static_cast<double>(n_rep);
      row.mean_arm0 = schedule.mean(t, 0);
      row.mean_arm1 = schedule.mean(t, 1);
      row.best_mean = std::max(row.mean_arm0, row.mean_arm1);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void emit_outputs(const FigTables& tables, const ExperimentConfig& config) {
  const bool swept = tables.experiment == ExperimentId::Fig2 ||
                     tables.experiment == ExperimentId::Fig3;
  if (swept && tables.rows.empty())
    throw ConfigError("no result rows to emit");
  if (tables.experiment == ExperimentId::Fig4 && tables.regret_rows.empty())
    throw ConfigError("no regret rows to emit");
  if (!swept && tables.experiment != ExperimentId::Fig4)
    throw ConfigError("only fig2, fig3, and fig4 emit file outputs");

  const std::string base = config.out_dir + "/" + experiment_name(tables.experiment) +
                           "_seed" + std::to_string(config.master_seed);

  CsvTable csv;
  std::vector<Series> chart;
  std::string title, x_label, y_label;
  bool log_x = false;

  if (swept) {
    csv.header = {config.sweep, "estimator", "estimate", "std_error", "replications"};
    for (const ResultRow& r : tables.rows) {
      csv.rows.push_back({format_double(r.sweep_value), r.estimator,
                          format_double(r.estimate), format_double(r.std_error),
                          std::to_string(r.replications)});
      auto it = std::find_if(chart.begin(), chart.end(),
                             [&](const Series& s) { return s.name == r.estimator; });
      if (it == chart.end()) {
        chart.push_back({r.estimator, {}, {}});
        it = std::prev(chart.end());
      }
      it->x.push_back(r.sweep_value);
      it->y.push_back(r.estimate);
    }
    title = "Success probability vs " + config.sweep;
    x_label = config.sweep;
    y_label = "success probability";
    log_x = tables.experiment == ExperimentId::Fig2;
  } else {
    csv.header = {"policy", "round", "cum_regret", "mean_arm0", "mean_arm1",
                  "best_mean"};
    for (const RegretRow& r : tables.regret_rows) {
      csv.rows.push_back({r.policy, std::to_string(r.round),
                          format_double(r.cum_regret), format_double(r.mean_arm0),
                          format_double(r.mean_arm1), format_double(r.best_mean)});
      auto it = std::find_if(chart.begin(), chart.end(),
                             [&](const Series& s) { return s.name == r.policy; });
      if (it == chart.end()) {
        chart.push_back({r.policy, {}, {}});
        it = std::prev(chart.end());
      }
      it->x.push_back(static_cast<double>(r.round));
      it->y.push_back(r.cum_regret);
    }
    title = "Average cumulative regret";
    x_label = "round";
    y_label = "cumulative regret";
  }

  // Render everything before the first write so failures leave no partials.
  const std::string csv_text = csv.to_string();
  const std::string svg_text =
      render_line_chart(title, x_label, y_label, chart, log_x);
  ensure_dir(config.out_dir);
  write_file_atomic(base + ".csv", csv_text);
  write_file_atomic(base + ".svg", svg_text);
}

void run_experiment(const ExperimentConfig& config) {
  FigTables tables;
  tables.experiment = config.experiment;
  switch (config.experiment) {
    case ExperimentId::Fig2:
      tables.rows = run_fig2(config);
      break;
    case ExperimentId::Fig3:
      tables.rows = run_fig3(config);
      break;
    case ExperimentId::Fig4:
      tables.regret_rows = run_fig4(config);
      break;
    case ExperimentId::Custom:
      throw ConfigError(
          "experiment: 'custom' has no canned sweep; use the analytic or "
          "simulate commands");
  }
  emit_outputs(tables, config);
}

}  // namespace relaylab
