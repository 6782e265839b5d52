#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "lpacrl/rng.hpp"
#include "lpacrl/task_space.hpp"

namespace lpacrl {

/// Task-sampling strategies: learning-progress curriculum plus five baselines.
enum class SchedulerKind { lp_acrl, alp, plr, lrpc, sc, uniform };

const char* to_string(SchedulerKind kind);
std::optional<SchedulerKind> scheduler_kind_from(std::string_view name);

/// Sigmoid command-range schedule constants (hand-crafted curriculum).
struct ScParams {
  double base = 1.0;
  double span = 3.0;
  double rate = 0.002;
  double midpoint = 1000.0;
};

struct SchedulerConfig {
  SchedulerKind kind = SchedulerKind::lp_acrl;
  double beta = 0.1;        // softmax temperature
  double floor_mix = 0.05;  // uniform mixing weight, keeps every task sampleable
  int stage_len = 10;       // policy updates per curriculum stage
  double ema_alpha = 0.2;   // within-stage reward EMA coefficient
  double stale_decay = 0.9; // LP decay per stage without samples
  bool normalize_lp = true; // divide scores by max |score| before the softmax
  ScParams sc;

  void validate() const;  // throws std::invalid_argument
};

/// Per-task bookkeeping across curriculum stages.
struct TaskStats {
  double reward_current = 0.0;     // reward EMA over the current stage
  double reward_prev_stage = 0.0;  // reward estimate frozen at the last boundary
  double lp = 0.0;                 // signed learning progress
  double alp = 0.0;                // |lp|
  double plr_score = 0.0;          // EMA of per-episode mean |advantage|
  int episode_count_stage = 0;
  int episode_count_total = 0;
  int staleness = 0;               // stages since last sample
};

/// Episode summary consumed by the scheduler.
struct EpisodeRecord {
  std::int64_t task_index = 0;
  double episodic_reward = 0.0;    // undiscounted reward sum
  int length = 0;                  // nominal episode length K
  int fall_step = 0;               // = length when no fall
  double tracking_error = 0.0;     // in [0, 1]
  double value_error_score = 0.0;  // mean |GAE| over the episode
};

struct SamplingDistribution {
  std::vector<double> probs;
  int stage = 0;
};

/// Temperature softmax with max-subtraction. Throws on NaN scores or beta <= 0.
std::vector<double> softmax(std::span<const double> scores, double beta);

/// Sigmoid command-range limit: base + span / (1 + exp(-rate * (k - midpoint))).
double sc_velocity_max(const ScParams& p, double k);

/// Stage-wise task-sampling scheduler.
///
/// Within a stage, record_episode() folds episodic rewards into per-task
/// estimates. At each stage boundary, advance_stage() recomputes learning
/// progress, turns per-task scores into a softmax distribution with a uniform
/// floor, and publishes it as an immutable snapshot.
///
/// record_episode calls must be serialized (the rollout collector is the
/// single writer); advance_stage requires exclusive access. The published
/// distribution is safe to read from any thread.
class Scheduler {
 public:
  Scheduler(const TaskSpace& space, SchedulerConfig cfg);

  void record_episode(const EpisodeRecord& rec);

  /// Closes the current stage and publishes the next distribution.
  SamplingDistribution advance_stage();

  /// Hand-crafted schedule at training iteration k: uniform over the bins of
  /// the primary continuous dimension whose lower edge lies below
  /// sc_velocity_max(k), zero elsewhere, other dimensions uniform.
  SamplingDistribution sc_distribution(double iteration) const;

  std::int64_t sample_task(Rng& rng) const;

  const SamplingDistribution& distribution() const { return dist_; }
  const TaskStats& stats(std::int64_t task) const;
  double last_score(std::int64_t task) const;
  const SchedulerConfig& config() const { return cfg_; }
  const TaskSpace& space() const { return space_; }
  int stage() const { return dist_.stage; }
  std::int64_t size() const { return space_.size(); }

 private:
  TaskSpace space_;
  SchedulerConfig cfg_;
  std::vector<TaskStats> stats_;
  std::vector<double> scores_;
  SamplingDistribution dist_;
};

}  // namespace lpacrl
