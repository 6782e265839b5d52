#include "lpacrl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lpacrl/environments.hpp"
#include "lpacrl/learner.hpp"
#include "lpacrl/rng.hpp"
#include "lpacrl/task_space.hpp"

namespace lpacrl::metrics {

double tracking_error(std::span<const double> commanded, std::span<const double> actual,
                      int fall_step, double v_ref) {
  if (fall_step < 0) throw std::invalid_argument("tracking_error: negative fall_step");
  if (fall_step == 0) return 0.0;
  const auto n = static_cast<std::size_t>(fall_step);
  if (commanded.size() < n || actual.size() < n)
    throw std::invalid_argument("tracking_error: series shorter than fall_step");
  double sum = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double denom = std::max(std::abs(commanded[t]), v_ref);
    sum += std::min(1.0, std::abs(commanded[t] - actual[t]) / denom);
  }
  return sum / static_cast<double>(fall_step);
}

double epte_sp(double epsilon, int fall_step, int length) {
  if (length < 1) throw std::invalid_argument("epte_sp: length must be >= 1");
  if (fall_step < 0 || fall_step > length)
    throw std::invalid_argument("epte_sp: fall_step must lie in [0, length]");
  if (epsilon < 0.0 || epsilon > 1.0)
    throw std::invalid_argument("epte_sp: epsilon must lie in [0, 1]");
  return (epsilon * fall_step + (length - fall_step)) / static_cast<double>(length);
}

EpisodeMetrics make_episode_metrics(double epsilon, int fall_step, int length) {
  EpisodeMetrics m;
  m.length = length;
  m.fall_step = fall_step;
  m.epsilon = epsilon;
  m.epte_sp = epte_sp(epsilon, fall_step, length);
  return m;
}

bool classify_success(const EpisodeMetrics& m, double alive_ratio, double err_threshold) {
  return m.fall_step >= alive_ratio * m.length && m.epte_sp < err_threshold;
}

bool classify_success(std::span<const double> epte_per_channel, int fall_step, int length,
                      double alive_ratio, double err_threshold) {
  if (fall_step < alive_ratio * length) return false;
  for (double e : epte_per_channel)
    if (!(e < err_threshold)) return false;
  return true;
}

SuccessReport evaluate_policy(const Policy& policy, const Preset& preset,
                              std::shared_ptr<ChainBanditState> bandit_state,
                              int n_eval_per_task, const Rng& rng, double alive_ratio,
                              double err_threshold) {
  if (n_eval_per_task < 1)
    throw std::invalid_argument("evaluate_policy: n_eval_per_task must be >= 1");
  const std::int64_t size = preset.space.size();
  SuccessReport report;
  report.success.assign(static_cast<std::size_t>(size), 0);
  report.mean_reward.assign(static_cast<std::size_t>(size), 0.0);
  report.mean_epte_sp.assign(static_cast<std::size_t>(size), 0.0);
  report.n_episodes_per_task = n_eval_per_task;

  // Evaluation freezes any shared environment state so it never advances the
  // training dynamics.
  std::shared_ptr<ChainBanditState> bandit = bandit_state;
  if (!bandit && preset.env_kind == Preset::EnvKind::chain_bandit)
    bandit = preset.make_bandit_state();

  for (std::int64_t task = 0; task < size; ++task) {
    int successes = 0;
    double reward_sum = 0.0;
    double epte_sum = 0.0;
    for (int e = 0; e < n_eval_per_task; ++e) {
      Rng ep_rng = rng.derive(0x6576616cULL, static_cast<std::uint64_t>(task),
                              static_cast<std::uint64_t>(e));
      auto env = preset.make_env(bandit, /*frozen=*/true);
      const TaskParams params = preset.space.draw_params(task, ep_rng);
      std::vector<double> obs = env->reset(params, ep_rng);
      bool done = false;
      while (!done) {
        const std::vector<double> action = policy.mean_action(obs);
        StepResult step = env->step(action);
        done = step.done;
        obs = std::move(step.observation);
      }
      const EpisodeSummary s = env->summary();
      reward_sum += s.episodic_reward;
      double worst = 0.0;
      for (double v : s.epte_per_channel) worst = std::max(worst, v);
      epte_sum += worst;
      if (classify_success(s.epte_per_channel, s.fall_step, s.length, alive_ratio,
                           err_threshold))
        ++successes;
    }
    const auto i = static_cast<std::size_t>(task);
    report.mean_reward[i] = reward_sum / n_eval_per_task;
    report.mean_epte_sp[i] = epte_sum / n_eval_per_task;
    report.success[i] = (2 * successes > n_eval_per_task) ? 1 : 0;
    if (report.success[i])
      report.mastered.push_back(task);
    else
      report.unmastered.push_back(task);
  }
  report.success_rate =
      static_cast<double>(report.mastered.size()) / static_cast<double>(size);
  return report;
}

double mean_over_subset(std::span<const double> per_task, std::span<const std::int64_t> subset) {
  if (subset.empty()) return 0.0;
  double sum = 0.0;
  for (std::int64_t task : subset) {
    if (task < 0 || static_cast<std::size_t>(task) >= per_task.size())
      throw std::out_of_range("mean_over_subset: task index out of range");
    sum += per_task[static_cast<std::size_t>(task)];
  }
  return sum / static_cast<double>(subset.size());
}

SeriesAggregate aggregate_seeds(const std::vector<std::vector<double>>& series) {
  if (series.empty()) throw std::invalid_argument("aggregate_seeds: no series");
  const std::size_t n = series.front().size();
  for (const auto& s : series)
    if (s.size() != n) throw std::invalid_argument("aggregate_seeds: length mismatch");
  SeriesAggregate out;
  out.mean.assign(n, 0.0);
  out.min.assign(n, std::numeric_limits<double>::infinity());
  out.max.assign(n, -std::numeric_limits<double>::infinity());
  for (const auto& s : series) {
    for (std::size_t i = 0; i < n; ++i) {
      out.mean[i] += s[i];
      out.min[i] = std::min(out.min[i], s[i]);
      out.max[i] = std::max(out.max[i], s[i]);
    }
  }
  for (std::size_t i = 0; i < n; ++i) out.mean[i] /= static_cast<double>(series.size());
  return out;
}

}  // namespace lpacrl::metrics
