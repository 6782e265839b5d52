#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace lpacrl {

class TaskSpace;
class Policy;
class Rng;
class ChainBanditState;
struct Preset;

namespace metrics {

/// Percentage tracking error over the alive portion of an episode:
/// mean over steps t < fall_step of min(1, |v*_t - v_t| / max(|v*_t|, v_ref)).
/// Returns 0 when fall_step == 0 (the fall term then carries the full charge).
double tracking_error(std::span<const double> commanded, std::span<const double> actual,
                      int fall_step, double v_ref = 0.1);

/// Episodic percentage tracking error with stability penalty:
/// (epsilon * fall_step + (length - fall_step)) / length.
/// Alive steps are charged the tracking error, fallen steps the worst case.
double epte_sp(double epsilon, int fall_step, int length);

struct EpisodeMetrics {
  int length = 0;     // K
  int fall_step = 0;  // k_f, = K when no fall
  double epsilon = 0.0;
  double epte_sp = 0.0;
};

EpisodeMetrics make_episode_metrics(double epsilon, int fall_step, int length);

/// An episode succeeds when it stays alive for at least alive_ratio of its
/// length and every tracked command channel keeps its penalized error below
/// err_threshold.
bool classify_success(const EpisodeMetrics& m, double alive_ratio = 0.9,
                      double err_threshold = 0.30);
bool classify_success(std::span<const double> epte_per_channel, int fall_step, int length,
                      double alive_ratio = 0.9, double err_threshold = 0.30);

/// Mastered/unmastered partition of a task space under a fixed policy.
struct SuccessReport {
  std::vector<std::uint8_t> success;   // per task
  std::vector<double> mean_reward;     // per task
  std::vector<double> mean_epte_sp;    // per task, worst channel
  std::vector<std::int64_t> mastered;
  std::vector<std::int64_t> unmastered;
  double success_rate = 0.0;
  int n_episodes_per_task = 0;
};

/// Runs n_eval deterministic-seeded evaluation episodes per task (majority
/// vote decides task success) and reports the mastered partition together
/// with per-task mean reward and mean penalized tracking error. For bandit
/// presets, pass the run's shared state; evaluation reads it without
/// advancing competence.
SuccessReport evaluate_policy(const Policy& policy, const Preset& preset,
                              std::shared_ptr<ChainBanditState> bandit_state,
                              int n_eval_per_task, const Rng& rng,
                              double alive_ratio = 0.9, double err_threshold = 0.30);

/// Mean of per-task values over a caller-supplied task subset; 0 on empty.
double mean_over_subset(std::span<const double> per_task, std::span<const std::int64_t> subset);

struct SeriesAggregate {
  std::vector<double> mean;
  std::vector<double> min;
  std::vector<double> max;
};

/// Pointwise mean/min/max over equal-length per-seed series.
SeriesAggregate aggregate_seeds(const std::vector<std::vector<double>>& series);

}  // namespace metrics
}  // namespace lpacrl
