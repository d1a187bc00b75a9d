#include "relaylab/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "relaylab/errors.hpp"
#include "relaylab/relay_sim.hpp"

namespace relaylab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// An arm whose discounted pull count has decayed below a millionth of a single
// pull carries no usable evidence: its discounted mean is a frozen ratio of two
// vanishing sums. Treat it as unplayed so it gets re-probed instead of judged
// by that stale value forever; this is what lets the discounted policies react
// when a long-ignored arm improves.
constexpr double kCountFloor = 1e-6;

double xlogxy(double x, double y) {
  if (x <= 0.0) return 0.0;
  if (y <= 0.0) return kInf;
  return x * std::log(x / y);
}

}  // namespace

double kl_divergence_bernoulli(double p, double q) {
  if (p < 0.0 || p > 1.0 || q < 0.0 || q > 1.0)
    throw NumericError("bernoulli divergence arguments must lie in [0, 1]");
  return xlogxy(p, q) + xlogxy(1.0 - p, 1.0 - q);
}

double kl_ucb_index(double mean, double n, double t) {
  if (!(n > 0.0)) throw NumericError("confidence index needs a positive play count");
  if (!(t > 0.0)) throw NumericError("confidence index needs a positive round number");
  mean = std::min(1.0, std::max(0.0, mean));
  const double budget = std::log(t) / n;
  if (budget <= 0.0) return mean;
  if (mean >= 1.0) return 1.0;
  // Largest q in [mean, 1] with d(mean, q) <= budget; d increases in q there.
  // Bisect until the bracket collapses to adjacent doubles: the divergence
  // is steep enough near 1 that any fixed q-width leaves a visible residual.
  double lo = mean;
  double hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (kl_divergence_bernoulli(mean, mid) <= budget)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

PolicyState::PolicyState(std::size_t arms, double gamma_) : gamma(gamma_) {
  if (arms < 1) throw ConfigError("policy state needs at least one arm");
  if (!(gamma_ > 0.0) || gamma_ > 1.0)
    throw ConfigError("discount factor must lie in (0, 1]");
  pulls.assign(arms, 0);
  reward_sum.assign(arms, 0.0);
  disc_pulls.assign(arms, 0.0);
  disc_reward_sum.assign(arms, 0.0);
}

double discounted_mean(const PolicyState& state, std::size_t arm) {
  if (arm >= state.arms()) throw ConfigError("arm index out of range");
  if (state.disc_pulls[arm] < kCountFloor) throw NumericError("unplayed arm");
  return state.disc_reward_sum[arm] / state.disc_pulls[arm];
}

void update(PolicyState& state, std::size_t arm, double reward) {
  if (arm >= state.arms()) throw ConfigError("arm index out of range");
  if (reward < 0.0 || reward > 1.0)
    throw NumericError("rewards must lie in [0, 1]");
  for (std::size_t i = 0; i < state.arms(); ++i) {
    state.disc_pulls[i] *= state.gamma;
    state.disc_reward_sum[i] *= state.gamma;
  }
  state.pulls[arm] += 1;
  state.reward_sum[arm] += reward;
  state.disc_pulls[arm] += 1.0;
  state.disc_reward_sum[arm] += reward;
  state.round += 1;
}

const char* policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::KlUcb: return "klucb";
    case PolicyKind::DiscountedKlUcb: return "dklucb";
    case PolicyKind::Ucb: return "ucb";
    case PolicyKind::DiscountedUcb: return "ducb";
    case PolicyKind::ExploreThenCommit: return "etc";
    case PolicyKind::Random: return "random";
    case PolicyKind::Oracle: return "oracle";
  }
  return "unknown";
}

bool policy_from_name(const std::string& name, PolicyKind& out) {
  for (PolicyKind k : {PolicyKind::KlUcb, PolicyKind::DiscountedKlUcb,
                       PolicyKind::Ucb, PolicyKind::DiscountedUcb,
                       PolicyKind::ExploreThenCommit, PolicyKind::Random,
                       PolicyKind::Oracle}) {
    if (name == policy_name(k)) {
      out = k;
      return true;
    }
  }
  return false;
}

namespace {

// Ties resolve to the lowest index: deterministic and replayable.
std::size_t argmax_lowest(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

}  // namespace

std::size_t select_arm(const Policy& policy, PolicyState& state,
                       const std::vector<double>& true_means, Rng& rng) {
  const std::size_t arms = state.arms();
  const double t = static_cast<double>(state.round) + 1.0;
  std::vector<double> index(arms, 0.0);

  switch (policy.kind) {
    case PolicyKind::KlUcb: {
      for (std::size_t i = 0; i < arms; ++i) {
        const double n = static_cast<double>(state.pulls[i]);
        index[i] = n > 0.0 ? kl_ucb_index(state.reward_sum[i] / n, n, t) : kInf;
      }
      return argmax_lowest(index);
    }
    case PolicyKind::DiscountedKlUcb: {
      double count_total = 0.0;
      for (double c : state.disc_pulls) count_total += c;
      for (std::size_t i = 0; i < arms; ++i) {
        if (state.pulls[i] == 0 || state.disc_pulls[i] < kCountFloor) {
          index[i] = kInf;
          continue;
        }
        const double mean = discounted_mean(state, i);
        if (policy.canonical_discount)
          index[i] = kl_ucb_index(mean, state.disc_pulls[i],
                                  std::max(count_total, 1.0));
        else
          index[i] =
              kl_ucb_index(mean, static_cast<double>(state.pulls[i]), t);
      }
      return argmax_lowest(index);
    }
    case PolicyKind::Ucb: {
      for (std::size_t i = 0; i < arms; ++i) {
        const double n = static_cast<double>(state.pulls[i]);
        index[i] = n > 0.0 ? state.reward_sum[i] / n +
                                 std::sqrt(2.0 * std::log(std::max(t, 1.0)) / n)
                           : kInf;
      }
      return argmax_lowest(index);
    }
    case PolicyKind::DiscountedUcb: {
      for (std::size_t i = 0; i < arms; ++i) {
        if (state.pulls[i] == 0 || state.disc_pulls[i] < kCountFloor) {
          index[i] = kInf;
          continue;
        }
        index[i] = discounted_mean(state, i) +
                   std::sqrt(2.0 * std::log(std::max(t, 1.0)) /
                             state.disc_pulls[i]);
      }
      return argmax_lowest(index);
    }
    case PolicyKind::ExploreThenCommit: {
      if (policy.etc_m < 1) throw ConfigError("exploration length must be >= 1");
      const std::uint64_t explore_rounds = policy.etc_m * arms;
      if (state.round < explore_rounds)
        return static_cast<std::size_t>(state.round % arms);
      if (state.committed < 0) {
        for (std::size_t i = 0; i < arms; ++i)
          index[i] = state.pulls[i] > 0
                         ? state.reward_sum[i] / static_cast<double>(state.pulls[i])
                         : -kInf;
        state.committed = static_cast<int>(argmax_lowest(index));
      }
      return static_cast<std::size_t>(state.committed);
    }
    case PolicyKind::Random:
      return static_cast<std::size_t>(rng.below(arms));
    case PolicyKind::Oracle: {
      if (true_means.size() != arms)
        throw ConfigError("oracle policy needs the per-round means");
      return argmax_lowest(true_means);
    }
  }
  throw ConfigError("unknown policy kind");
}

std::size_t ArmSchedule::segment_at(std::uint64_t round) const {
  if (round < 1) throw ConfigError("rounds are 1-based");
  std::size_t lo = 0;
  std::size_t hi = segment_starts.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi + 1) / 2;
    if (segment_starts[mid] <= round)
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

double ArmSchedule::mean(std::uint64_t round, std::size_t arm) const {
  if (arm >= arms()) throw ConfigError("arm index out of range");
  return means[segment_at(round)][arm];
}

void ArmSchedule::validate() const {
  if (segment_starts.empty() || means.empty())
    throw ConfigError("schedule needs at least one segment");
  if (segment_starts.size() != means.size())
    throw ConfigError("schedule segment lists disagree in length");
  if (segment_starts.front() != 1)
    throw ConfigError("schedule must start at round 1");
  for (std::size_t s = 1; s < segment_starts.size(); ++s)
    if (segment_starts[s] <= segment_starts[s - 1])
      throw ConfigError("schedule segment starts must increase");
  const std::size_t n_arms = means.front().size();
  if (n_arms < 1) throw ConfigError("schedule needs at least one arm");
  for (const auto& seg : means) {
    if (seg.size() != n_arms)
      throw ConfigError("schedule segments disagree on the arm count");
    for (double m : seg)
      if (!(m >= 0.0) || !(m <= 1.0))
        throw ConfigError("schedule means must lie in [0, 1]");
  }
}

ArmSchedule stationary_schedule(std::vector<double> means) {
  ArmSchedule s;
  s.segment_starts = {1};
  s.means.push_back(std::move(means));
  s.validate();
  return s;
}

ArmSchedule nonstationary_schedule(std::uint64_t horizon, std::size_t segments,
                                   std::uint64_t seed) {
  if (segments < 1 || horizon < segments)
    throw ConfigError("horizon must cover at least one round per segment");
  const std::uint64_t seg_len = horizon / segments;
  Rng rng(seed);
  ArmSchedule s;
  for (std::size_t seg = 0; seg < segments; ++seg) {
    double u1 = 0.0;
    double u2 = 0.0;
    do {
      u1 = rng.uniform(0.1, 0.9);
      u2 = rng.uniform(0.1, 0.9);
    } while (std::fabs(u1 - u2) < 0.1);
    const double hi = std::max(u1, u2);
    const double lo = std::min(u1, u2);
    // The better arm alternates between segments to force re-learning.
    const std::size_t best = seg % 2;
    std::vector<double> m(2, lo);
    m[best] = hi;
    s.segment_starts.push_back(1 + static_cast<std::uint64_t>(seg) * seg_len);
    s.means.push_back(std::move(m));
  }
  s.validate();
  return s;
}

BernoulliEnv::BernoulliEnv(ArmSchedule schedule, std::uint64_t stream_seed)
    : schedule_(std::move(schedule)), seed_(stream_seed) {
  schedule_.validate();
}

std::vector<double> BernoulliEnv::rewards(std::uint64_t round) const {
  std::vector<double> r(arms(), 0.0);
  for (std::size_t i = 0; i < arms(); ++i) {
    // Counter-style draw: one mixed word per (round, arm) cell, so every
    // policy replaying this environment seed sees identical reward tables.
    const std::uint64_t word =
        derive_seed(seed_, round, static_cast<std::uint64_t>(i));
    const double u = static_cast<double>(word >> 11) * 0x1.0p-53;
    r[i] = u < schedule_.mean(round, i) ? 1.0 : 0.0;
  }
  return r;
}

std::vector<double> BernoulliEnv::true_means(std::uint64_t round) const {
  std::vector<double> m(arms(), 0.0);
  for (std::size_t i = 0; i < arms(); ++i) m[i] = schedule_.mean(round, i);
  return m;
}

RelaySlotEnv::RelaySlotEnv(const SystemParams& params, std::uint64_t stream_seed)
    : params_(params), seed_(stream_seed) {
  params_.validate();
}

std::vector<double> RelaySlotEnv::rewards(std::uint64_t round) const {
  const SlotOutcome slot = simulate_slot(params_, derive_seed(seed_, round));
  return {slot.success_active ? 1.0 : 0.0, slot.success_passive ? 1.0 : 0.0};
}

std::vector<double> RelaySlotEnv::true_means(std::uint64_t) const { return {}; }

template <typename Env>
RegretTrace run_episode(const Policy& policy, const Env& env,
                        std::uint64_t horizon, std::uint64_t policy_seed,
                        RegretBaseline baseline) {
  const std::size_t arms = env.arms();
  if (arms < 1) throw ConfigError("environment has no arms");
  if (horizon < arms) throw ConfigError("horizon shorter than the arm count");

  PolicyState state(arms, policy.gamma);
  Rng rng(policy_seed);
  RegretTrace trace;
  trace.chosen.reserve(horizon);
  trace.reward.reserve(horizon);
  trace.oracle_mean.reserve(horizon);
  trace.cum_regret.reserve(horizon);

  std::size_t static_best = 0;
  if (baseline == RegretBaseline::Static) {
    std::vector<double> totals(arms, 0.0);
    bool have_means = true;
    for (std::uint64_t t = 1; t <= horizon && have_means; ++t) {
      const std::vector<double> m = env.true_means(t);
      if (m.empty()) {
        have_means = false;
        break;
      }
      for (std::size_t i = 0; i < arms; ++i) totals[i] += m[i];
    }
    static_best = have_means ? argmax_lowest(totals) : 0;
  }

  double cum = 0.0;
  for (std::uint64_t t = 1; t <= horizon; ++t) {
    const std::vector<double> means = env.true_means(t);
    std::size_t arm = 0;
    if (t <= arms)
      arm = static_cast<std::size_t>(t - 1);  // play every arm once first
    else
      arm = select_arm(policy, state, means, rng);
    const std::vector<double> rewards = env.rewards(t);
    const double r = rewards[arm];
    update(state, arm, r);

    double baseline_mean = std::numeric_limits<double>::quiet_NaN();
    double increment = 0.0;
    if (!means.empty()) {
      baseline_mean = baseline == RegretBaseline::Static
                          ? means[static_best]
                          : *std::max_element(means.begin(), means.end());
      increment = baseline_mean - means[arm];
    }
    cum += increment;
    trace.chosen.push_back(static_cast<std::uint8_t>(arm));
    trace.reward.push_back(r);
    trace.oracle_mean.push_back(baseline_mean);
    trace.cum_regret.push_back(cum);
  }
  return trace;
}

template RegretTrace run_episode<BernoulliEnv>(const Policy&, const BernoulliEnv&,
                                               std::uint64_t, std::uint64_t,
                                               RegretBaseline);
template RegretTrace run_episode<RelaySlotEnv>(const Policy&, const RelaySlotEnv&,
                                               std::uint64_t, std::uint64_t,
                                               RegretBaseline);

}  // namespace relaylab
