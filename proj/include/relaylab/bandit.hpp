#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relaylab/params.hpp"
#include "relaylab/relay_sim.hpp"
#include "relaylab/rng.hpp"

namespace relaylab {

// Bernoulli KL divergence d(p, q) with the conventions 0*log 0 = 0 and
// x*log(x/0) = +inf for x > 0.
double kl_divergence_bernoulli(double p, double q);

// Largest q in [mean, 1] with d(mean, q) <= log(t)/n, by bisection.
double kl_ucb_index(double mean, double n, double t);

// Per-arm sufficient statistics for every policy: raw counts/sums plus the
// geometrically discounted pair, updated recursively in O(arms).
struct PolicyState {
  std::vector<std::uint64_t> pulls;
  std::vector<double> reward_sum;
  std::vector<double> disc_pulls;
  std::vector<double> disc_reward_sum;
  std::uint64_t round = 0;  // completed rounds
  double gamma = 1.0;
  int committed = -1;  // explore-then-commit's post-exploration choice

  PolicyState(std::size_t arms, double gamma_);
  std::size_t arms() const { return pulls.size(); }
};

// S~[arm]/N~[arm]; throws NumericError("unplayed arm") when N~ is zero.
double discounted_mean(const PolicyState& state, std::size_t arm);

// Applies one observed reward: decays every arm's discounted pair by gamma,
// then adds (reward, 1) to the played arm and bumps the raw counters.
void update(PolicyState& state, std::size_t arm, double reward);

enum class PolicyKind {
  KlUcb,
  DiscountedKlUcb,
  Ucb,
  DiscountedUcb,
  ExploreThenCommit,
  Random,
  Oracle,
};

const char* policy_name(PolicyKind kind);
bool policy_from_name(const std::string& name, PolicyKind& out);

struct Policy {
  PolicyKind kind = PolicyKind::DiscountedKlUcb;
  double gamma = 0.9;        // discounted variants
  std::uint64_t etc_m = 100; // exploration pulls per arm
  // The discounted KL index as published divides log(t) by the raw pull
  // count; the canonical variant uses discounted counts and the log of the
  // total discounted count.
  bool canonical_discount = false;
};

// One selection step after both arms are initialized. true_means is consulted
// only by Oracle (empty otherwise); rng only by Random. May stash the
// explore-then-commit decision in state.
std::size_t select_arm(const Policy& policy, PolicyState& state,
                       const std::vector<double>& true_means, Rng& rng);

// Piecewise-constant Bernoulli means: segment s covers rounds
// [segment_starts[s], segment_starts[s+1]).
struct ArmSchedule {
  std::vector<std::uint64_t> segment_starts;  // first is round 1
  std::vector<std::vector<double>> means;     // [segment][arm]

  std::size_t arms() const { return means.empty() ? 0 : means[0].size(); }
  std::size_t segment_at(std::uint64_t round) const;
  double mean(std::uint64_t round, std::size_t arm) const;
  void validate() const;
};

ArmSchedule stationary_schedule(std::vector<double> means);

// The canonical nonstationary benchmark: `segments` equal segments over
// `horizon` rounds, two arms, means uniform on [0.1, 0.9] with a gap of at
// least 0.1 and the best arm alternating between segments, all drawn from a
// fixed seed so every run races on the same landscape.
inline constexpr std::uint64_t kDefaultScheduleSeed = 0x52454c41594c4142ull;
ArmSchedule nonstationary_schedule(std::uint64_t horizon = 10000,
                                   std::size_t segments = 10,
                                   std::uint64_t seed = kDefaultScheduleSeed);

enum class RegretBaseline { Dynamic, Static };

struct RegretTrace {
  std::vector<std::uint8_t> chosen;
  std::vector<double> reward;
  std::vector<double> oracle_mean;  // per-round baseline mean
  std::vector<double> cum_regret;
};

// Scheduled Bernoulli rewards with random access by (round, arm): every
// policy replayed on the same environment seed sees identical draws.
class BernoulliEnv {
 public:
  BernoulliEnv(ArmSchedule schedule, std::uint64_t stream_seed);
  std::size_t arms() const { return schedule_.arms(); }
  std::vector<double> rewards(std::uint64_t round) const;
  std::vector<double> true_means(std::uint64_t round) const;
  const ArmSchedule& schedule() const { return schedule_; }

 private:
  ArmSchedule schedule_;
  std::uint64_t seed_;
};

// Physical-simulator environment: arm 0 transmits actively, arm 1
// backscatters; the reward is the chosen mode's success boolean. True means
// are unknown, so regret is not accounted (oracle_mean = NaN).
class RelaySlotEnv {
 public:
  RelaySlotEnv(const SystemParams& params, std::uint64_t stream_seed);
  std::size_t arms() const { return 2; }
  std::vector<double> rewards(std::uint64_t round) const;
  std::vector<double> true_means(std::uint64_t round) const;  // empty

 private:
  SystemParams params_;
  std::uint64_t seed_;
};

// Algorithm loop: rounds 1..arms play each arm once, then select/observe/
// update. Regret increments are measured against the per-round best true
// mean (Dynamic) or the best whole-horizon fixed arm (Static); environments
// without true means produce zero regret entries.
template <typename Env>
RegretTrace run_episode(const Policy& policy, const Env& env,
                        std::uint64_t horizon, std::uint64_t policy_seed,
                        RegretBaseline baseline = RegretBaseline::Dynamic);

extern template RegretTrace run_episode<BernoulliEnv>(const Policy&,
                                                      const BernoulliEnv&,
                                                      std::uint64_t,
                                                      std::uint64_t,
                                                      RegretBaseline);
extern template RegretTrace run_episode<RelaySlotEnv>(const Policy&,
                                                      const RelaySlotEnv&,
                                                      std::uint64_t,
                                                      std::uint64_t,
                                                      RegretBaseline);

}  // namespace relaylab
