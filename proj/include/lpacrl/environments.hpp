#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lpacrl/rng.hpp"
#include "lpacrl/task_space.hpp"

namespace lpacrl {

struct StepResult {
  std::vector<double> observation;
  double reward = 0.0;
  bool done = false;
  std::optional<int> fall_step;
};

/// Per-episode summary used for scheduling and evaluation. `length` is the
/// nominal episode length K (the metric base); a fall truncates the steps
/// actually taken but not K.
struct EpisodeSummary {
  int length = 0;
  int steps_taken = 0;
  int fall_step = 0;  // = length when no fall
  double episodic_reward = 0.0;
  std::vector<double> tracking_error_per_channel;
  std::vector<double> epte_per_channel;
};

class Environment {
 public:
  virtual ~Environment() = default;
  virtual int observation_dim() const = 0;
  virtual int action_dim() const = 0;
  virtual bool discrete_actions() const = 0;
  virtual std::vector<double> reset(const TaskParams& params, Rng& rng) = 0;
  virtual StepResult step(std::span<const double> action) = 0;
  virtual EpisodeSummary summary() const = 0;
};

// ---------------------------------------------------------------------------
// Prerequisite-chain bandit: a scripted, optionally noise-free learning curve
// per task, gated by competence on the task's prerequisite. Used as a
// deterministic oracle for scheduler dynamics.
// ---------------------------------------------------------------------------

enum class GateKind { step, linear };

struct ChainBanditConfig {
  int n_tasks = 8;
  double learn_rate = 0.05;  // eta
  double noise_sd = 0.0;
  GateKind gate = GateKind::step;
  double gate_threshold = 0.5;
  std::vector<int> prereq;  // per task, -1 = none; empty = linear chain

  void validate() const;
};

/// Shared competence state. One pull = one episode; competence only grows.
class ChainBanditState {
 public:
  explicit ChainBanditState(ChainBanditConfig cfg);

  /// Applies the gated competence update and returns the noisy reward.
  double pull(int task, Rng& rng);
  /// Reward without mutating competence (evaluation mode).
  double peek(int task, Rng& rng) const;

  double competence(int task) const { return m_[static_cast<std::size_t>(task)]; }
  const std::vector<double>& competences() const { return m_; }
  int size() const { return cfg_.n_tasks; }
  const ChainBanditConfig& config() const { return cfg_; }

 private:
  double gate_multiplier(int task) const;
  double reward_from(double m, Rng& rng) const;

  ChainBanditConfig cfg_;
  std::vector<double> m_;
};

/// Single-step MDP wrapper so the same learner drives bandit runs: the
/// observation is the task one-hot, the discrete action is ignored by the
/// reward, and the episode ends after one step.
class ChainBanditEnv final : public Environment {
 public:
  ChainBanditEnv(std::shared_ptr<ChainBanditState> state, bool frozen);

  int observation_dim() const override { return state_->size(); }
  int action_dim() const override { return 2; }
  bool discrete_actions() const override { return true; }
  std::vector<double> reset(const TaskParams& params, Rng& rng) override;
  StepResult step(std::span<const double> action) override;
  EpisodeSummary summary() const override;

 private:
  std::shared_ptr<ChainBanditState> state_;
  bool frozen_ = false;
  int task_ = 0;
  Rng rng_{0};
  bool done_ = true;
  EpisodeSummary summary_;
};

// ---------------------------------------------------------------------------
// Point-mass velocity tracking: C independent velocity channels with bounded
// acceleration, velocity-proportional drag, a Gaussian tracking kernel and a
// per-step fall hazard that grows with the commanded speed. Difficulty levels
// select the (a_max, drag, hazard) triple.
// ---------------------------------------------------------------------------

struct PointMassLevel {
  std::string name;
  double a_max = 8.0;
  double drag = 0.6;
  double hazard_base = 0.0;
  double hazard_vel_gain = 0.0;
  double hazard_vel_floor = 0.0;  // hazard = base + gain * max(0, |v*| - floor)
};

struct PointMassConfig {
  double dt = 0.05;
  int horizon = 400;  // K
  double v_fail = 8.0;
  double phi_scale = 0.25;          // tracking kernel exp(-|x|^2 / phi_scale)
  double action_rate_weight = 0.01; // w_a
  std::vector<PointMassLevel> levels;

  void validate() const;
};

/// Maps task-space dimensions onto environment inputs.
struct PointMassBinding {
  std::vector<int> command_dims;  // continuous dims, one per velocity channel
  int level_dim = -1;             // categorical dim selecting the level, -1 = level 0
};

class PointMassEnv final : public Environment {
 public:
  PointMassEnv(PointMassConfig cfg, PointMassBinding binding);

  int observation_dim() const override { return 3 * channels(); }
  int action_dim() const override { return channels(); }
  bool discrete_actions() const override { return false; }
  std::vector<double> reset(const TaskParams& params, Rng& rng) override;
  StepResult step(std::span<const double> action) override;
  EpisodeSummary summary() const override;

  int channels() const { return static_cast<int>(binding_.command_dims.size()); }
  double hazard() const;  // current per-step fall probability

 private:
  std::vector<double> observe() const;

  PointMassConfig cfg_;
  PointMassBinding binding_;
  PointMassLevel level_;
  std::vector<double> v_;
  std::vector<double> v_cmd_;
  std::vector<double> last_action_;
  std::vector<std::vector<double>> actual_series_;  // per channel, alive steps only
  Rng rng_{0};
  int t_ = 0;
  bool done_ = true;
  bool fallen_ = false;
  int fall_step_ = 0;
  double reward_sum_ = 0.0;
};

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

/// A named experiment setup: the task space plus, when runnable, the bound
/// environment. `space600` has no surrogate dynamics and exists for
/// task-space arithmetic and schedule inspection only.
struct Preset {
  enum class EnvKind { chain_bandit, point_mass, none };

  std::string name;
  TaskSpace space;
  EnvKind env_kind = EnvKind::none;
  ChainBanditConfig bandit;
  PointMassConfig pm;
  PointMassBinding binding;

  bool runnable() const { return env_kind != EnvKind::none; }
  /// Bandit state shared by every episode of a run; null for other kinds.
  std::shared_ptr<ChainBanditState> make_bandit_state() const;
  /// Environment factory. For the bandit, all envs share `state`; pass
  /// frozen=true for evaluation so competence is not advanced.
  std::unique_ptr<Environment> make_env(std::shared_ptr<ChainBanditState> state,
                                        bool frozen = false) const;
  /// Episodes may run on parallel workers only when they share no state.
  bool parallel_safe() const { return env_kind != EnvKind::chain_bandit; }
};

/// Known presets: chain8, pm_flat8, pm_scaled, space600.
Preset make_preset(std::string_view name, int horizon_override = 0);
std::vector<std::string> preset_names();

}  // namespace lpacrl
