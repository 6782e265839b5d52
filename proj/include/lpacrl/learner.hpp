#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpacrl/curriculum.hpp"
#include "lpacrl/environments.hpp"
#include "lpacrl/rng.hpp"
#include "lpacrl/task_space.hpp"

namespace lpacrl {

/// Raised when a policy update produces a non-finite loss or gradient.
struct NanDivergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Minimal dense network: linear -> tanh -> linear, or a single linear layer
/// when hidden == 0. Parameters live in one flat vector; backward accumulates
/// into a caller-provided gradient of the same layout.
class Mlp {
 public:
  Mlp() = default;
  Mlp(int in, int hidden, int out);

  void init(Rng& rng, double scale);

  int in_dim() const { return in_; }
  int out_dim() const { return out_; }
  int hidden_dim() const { return hidden_; }
  int param_count() const { return static_cast<int>(w_.size()); }
  std::span<double> params() { return w_; }
  std::span<const double> params() const { return w_; }

  struct Trace {
    std::vector<double> x;
    std::vector<double> h;  // post-tanh activations; empty for linear nets
  };

  std::vector<double> forward(std::span<const double> x, Trace* trace = nullptr) const;
  /// Accumulates d(dy . y)/dparams into grad (same layout as params()).
  void backward(const Trace& trace, std::span<const double> dy, std::span<double> grad) const;

  struct TensorView {
    std::string name;
    int rows = 0;
    int cols = 0;
    std::size_t offset = 0;
  };
  std::vector<TensorView> tensors(const std::string& prefix) const;

 private:
  int in_ = 0, hidden_ = 0, out_ = 0;
  std::vector<double> w_;
};

struct LearnerConfig {
  double gamma = 0.99;
  double lambda = 0.95;
  double clip = 0.2;
  double lr = 3e-4;
  int epochs = 4;
  int minibatch = 256;
  int hidden = 64;
  double value_coef = 0.5;
  double entropy_coef = 0.01;
  double log_std_init = -0.5;

  void validate() const;
};

/// Stochastic policy: Gaussian with a state-independent log-std for continuous
/// actions, categorical over network logits for discrete ones. The log-std is
/// clamped to [-5, 2].
class Policy {
 public:
  Policy() = default;
  Policy(int obs_dim, int action_dim, bool discrete, int hidden, double log_std_init, Rng& rng);

  int obs_dim() const { return net_.in_dim(); }
  int action_dim() const { return action_dim_; }
  bool discrete() const { return discrete_; }

  int param_count() const;
  double& param(int i);
  double param(int i) const;

  /// Draws an action and reports its log-probability.
  std::vector<double> sample_action(std::span<const double> obs, Rng& rng, double* logp) const;
  /// Deterministic action: the Gaussian mean, or the argmax class.
  std::vector<double> mean_action(std::span<const double> obs) const;

  double log_prob(std::span<const double> obs, std::span<const double> action) const;
  double entropy(std::span<const double> obs) const;
  /// Accumulates d(logp_coef * log pi(a|s) + ent_coef * H(s)) / dparams.
  void add_grad(std::span<const double> obs, std::span<const double> action, double logp_coef,
                double ent_coef, std::span<double> grad) const;

  void clamp_log_std();
  const Mlp& net() const { return net_; }
  Mlp& net() { return net_; }
  std::span<double> log_std() { return log_std_; }
  std::span<const double> log_std() const { return log_std_; }

 private:
  Mlp net_;
  std::vector<double> log_std_;
  int action_dim_ = 0;
  bool discrete_ = false;
};

/// State-value estimator.
class ValueFn {
 public:
  ValueFn() = default;
  ValueFn(int obs_dim, int hidden, Rng& rng);

  double value(std::span<const double> obs) const;
  /// Accumulates coef * dV(s)/dparams.
  void add_grad(std::span<const double> obs, double coef, std::span<double> grad) const;

  int param_count() const { return net_.param_count(); }
  std::span<double> params() { return net_.params(); }
  std::span<const double> params() const { return net_.params(); }
  const Mlp& net() const { return net_; }
  Mlp& net() { return net_; }

 private:
  Mlp net_;
};

struct Transition {
  std::vector<double> obs;
  std::vector<double> action;
  double reward = 0.0;
  double logp = 0.0;
  bool done = false;
};

struct Trajectory {
  std::int64_t task_index = 0;
  std::vector<Transition> steps;
  std::vector<double> final_obs;
  double episodic_reward = 0.0;
  EpisodeSummary summary;
  std::vector<double> advantages;
  std::vector<double> value_targets;
};

struct RolloutBatch {
  std::vector<Trajectory> trajectories;
};

/// delta_t = r_t + gamma * V(s_{t+1}) * (1 - done_t) - V(s_t);
/// A_t = sum_{l>=0} (gamma*lambda)^l delta_{t+l}, computed by the backward
/// recursion. Returns advantages; value targets are A_t + V(s_t).
struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> value_targets;
};
GaeResult compute_gae(const Trajectory& traj, const ValueFn& value_fn, double gamma,
                      double lambda);

/// Inverse-CDF draw from a probability vector.
std::int64_t sample_index(std::span<const double> probs, Rng& rng);

using EnvFactory = std::function<std::unique_ptr<Environment>()>;

/// Runs n_episodes episodes under the given task distribution. Every episode
/// e draws its own stream iter_rng.derive(e), so results are identical for
/// any worker count; parallel execution is used only when the environment
/// carries no cross-episode state.
RolloutBatch collect_rollouts(const Policy& policy, const SamplingDistribution& dist,
                              const TaskSpace& space, const EnvFactory& factory,
                              bool parallel_safe, int n_episodes, const Rng& iter_rng,
                              int workers);

/// Fills per-trajectory advantages/targets and produces the scheduler records
/// (value_error_score = mean |advantage| over the episode).
std::vector<EpisodeRecord> finalize_batch(RolloutBatch& batch, const ValueFn& value_fn,
                                          double gamma, double lambda);

/// One flattened transition prepared for the update.
struct Sample {
  const Transition* t = nullptr;
  double advantage = 0.0;
  double value_target = 0.0;
};

struct LossStats {
  double total = 0.0;
  double policy = 0.0;
  double value = 0.0;
  double entropy = 0.0;
};

/// Clipped-surrogate loss with value and entropy terms, averaged over the
/// samples. When grad spans are non-empty they are zeroed and filled.
LossStats ppo_loss(const Policy& policy, const ValueFn& value_fn,
                   std::span<const Sample> samples, const LearnerConfig& cfg,
                   std::span<double> grad_policy, std::span<double> grad_value);

/// In-place shift/scale to zero mean and unit variance. No-op for fewer than
/// two samples or constant input.
void normalize_advantages(std::span<double> advantages);

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  int step = 0;
};

struct UpdateStats {
  LossStats last_loss;
  int minibatches = 0;
};

/// Runs cfg.epochs of shuffled minibatch Adam steps on the clipped surrogate.
/// Advantages are normalized once over the whole batch. Throws NanDivergence
/// on a non-finite loss.
UpdateStats update_policy(Policy& policy, ValueFn& value_fn, RolloutBatch& batch,
                          const LearnerConfig& cfg, AdamState& opt_policy,
                          AdamState& opt_value, Rng& rng);

// Checkpoints: named parameter tensors with shapes in a versioned text blob,
// byte-for-byte reproducible for identical state.
std::string checkpoint_to_string(const Policy& policy, const ValueFn& value_fn);
void checkpoint_from_string(const std::string& blob, Policy& policy, ValueFn& value_fn);
void save_checkpoint(const std::string& path, const Policy& policy, const ValueFn& value_fn);
void load_checkpoint(const std::string& path, Policy& policy, ValueFn& value_fn);

}  // namespace lpacrl
