#include "lpacrl/learner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

namespace lpacrl {

namespace {
constexpr double kLogStdMin = -5.0;
constexpr double kLogStdMax = 2.0;
constexpr double kLog2Pi = 1.8378770664093453;
}  // namespace

// ---------------------------------------------------------------------------
// Mlp
// ---------------------------------------------------------------------------

Mlp::Mlp(int in, int hidden, int out) : in_(in), hidden_(hidden), out_(out) {
  if (in < 1 || out < 1 || hidden < 0) throw std::invalid_argument("mlp: bad dimensions");
  const std::size_t n = hidden > 0
                            ? static_cast<std::size_t>(hidden) * in + hidden +
                                  static_cast<std::size_t>(out) * hidden + out
                            : static_cast<std::size_t>(out) * in + out;
  w_.assign(n, 0.0);
}

void Mlp::init(Rng& rng, double scale) {
  // Biases start at zero; weights are scaled by fan-in.
  if (hidden_ > 0) {
    const double s1 = scale / std::sqrt(static_cast<double>(in_));
    const double s2 = scale / std::sqrt(static_cast<double>(hidden_));
    std::size_t k = 0;
    for (int i = 0; i < hidden_ * in_; ++i) w_[k++] = s1 * rng.normal();
    for (int i = 0; i < hidden_; ++i) w_[k++] = 0.0;
    for (int i = 0; i < out_ * hidden_; ++i) w_[k++] = s2 * rng.normal();
    for (int i = 0; i < out_; ++i) w_[k++] = 0.0;
  } else {
    const double s = scale / std::sqrt(static_cast<double>(in_));
    std::size_t k = 0;
    for (int i = 0; i < out_ * in_; ++i) w_[k++] = s * rng.normal();
    for (int i = 0; i < out_; ++i) w_[k++] = 0.0;
  }
}

std::vector<double> Mlp::forward(std::span<const double> x, Trace* trace) const {
  if (static_cast<int>(x.size()) != in_) throw std::invalid_argument("mlp: input size mismatch");
  std::vector<double> y(static_cast<std::size_t>(out_), 0.0);
  if (hidden_ > 0) {
    std::vector<double> h(static_cast<std::size_t>(hidden_), 0.0);
    const double* w1 = w_.data();
    const double* b1 = w1 + static_cast<std::size_t>(hidden_) * in_;
    const double* w2 = b1 + hidden_;
    const double* b2 = w2 + static_cast<std::size_t>(out_) * hidden_;
    for (int j = 0; j < hidden_; ++j) {
      double acc = b1[j];
      const double* row = w1 + static_cast<std::size_t>(j) * in_;
      for (int i = 0; i < in_; ++i) acc += row[i] * x[static_cast<std::size_t>(i)];
      h[static_cast<std::size_t>(j)] = std::tanh(acc);
    }
    for (int o = 0; o < out_; ++o) {
      double acc = b2[o];
      const double* row = w2 + static_cast<std::size_t>(o) * hidden_;
      for (int j = 0; j < hidden_; ++j) acc += row[j] * h[static_cast<std::size_t>(j)];
      y[static_cast<std::size_t>(o)] = acc;
    }
    if (trace) {
      trace->x.assign(x.begin(), x.end());
      trace->h = std::move(h);
    }
  } else {
    const double* w = w_.data();
    const double* b = w + static_cast<std::size_t>(out_) * in_;
    for (int o = 0; o < out_; ++o) {
      double acc = b[o];
      const double* row = w + static_cast<std::size_t>(o) * in_;
      for (int i = 0; i < in_; ++i) acc += row[i] * x[static_cast<std::size_t>(i)];
      y[static_cast<std::size_t>(o)] = acc;
    }
    if (trace) {
      trace->x.assign(x.begin(), x.end());
      trace->h.clear();
    }
  }
  return y;
}

void Mlp::backward(const Trace& trace, std::span<const double> dy, std::span<double> grad) const {
  if (grad.size() != w_.size()) throw std::invalid_argument("mlp: grad size mismatch");
  if (hidden_ > 0) {
    double* g1 = grad.data();
    double* gb1 = g1 + static_cast<std::size_t>(hidden_) * in_;
    double* g2 = gb1 + hidden_;
    double* gb2 = g2 + static_cast<std::size_t>(out_) * hidden_;
    const double* w2 = w_.data() + static_cast<std::size_t>(hidden_) * in_ + hidden_;
    std::vector<double> dh(static_cast<std::size_t>(hidden_), 0.0);
    for (int o = 0; o < out_; ++o) {
      const double d = dy[static_cast<std::size_t>(o)];
      gb2[o] += d;
      double* grow = g2 + static_cast<std::size_t>(o) * hidden_;
      const double* wrow = w2 + static_cast<std::size_t>(o) * hidden_;
      for (int j = 0; j < hidden_; ++j) {
        grow[j] += d * trace.h[static_cast<std::size_t>(j)];
        dh[static_cast<std::size_t>(j)] += d * wrow[j];
      }
    }
    for (int j = 0; j < hidden_; ++j) {
      const double hj = trace.h[static_cast<std::size_t>(j)];
      const double dpre = dh[static_cast<std::size_t>(j)] * (1.0 - hj * hj);
      gb1[j] += dpre;
      double* grow = g1 + static_cast<std::size_t>(j) * in_;
      for (int i = 0; i < in_; ++i) grow[i] += dpre * trace.x[static_cast<std::size_t>(i)];
    }
  } else {
    double* gw = grad.data();
    double* gb = gw + static_cast<std::size_t>(out_) * in_;
    for (int o = 0; o < out_; ++o) {
      const double d = dy[static_cast<std::size_t>(o)];
      gb[o] += d;
      double* grow = gw + static_cast<std::size_t>(o) * in_;
      for (int i = 0; i < in_; ++i) grow[i] += d * trace.x[static_cast<std::size_t>(i)];
    }
  }
}

std::vector<Mlp::TensorView> Mlp::tensors(const std::string& prefix) const {
  std::vector<TensorView> out;
  if (hidden_ > 0) {
    std::size_t off = 0;
    out.push_back({prefix + ".l1.w", hidden_, in_, off});
    off += static_cast<std::size_t>(hidden_) * in_;
    out.push_back({prefix + ".l1.b", 1, hidden_, off});
    off += static_cast<std::size_t>(hidden_);
    out.push_back({prefix + ".l2.w", out_, hidden_, off});
    off += static_cast<std::size_t>(out_) * hidden_;
    out.push_back({prefix + ".l2.b", 1, out_, off});
  } else {
    out.push_back({prefix + ".l1.w", out_, in_, 0});
    out.push_back({prefix + ".l1.b", 1, out_, static_cast<std::size_t>(out_) * in_});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Policy / value function
// ---------------------------------------------------------------------------

void LearnerConfig::validate() const {
  if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("learner: gamma must lie in [0,1]");
  if (lambda < 0.0 || lambda > 1.0)
    throw std::invalid_argument("learner: lambda must lie in [0,1]");
  if (!(clip > 0.0)) throw std::invalid_argument("learner: clip must be > 0");
  if (!(lr > 0.0)) throw std::invalid_argument("learner: lr must be > 0");
  if (epochs < 1 || minibatch < 1 || hidden < 0)
    throw std::invalid_argument("learner: bad epochs/minibatch/hidden");
}

Policy::Policy(int obs_dim, int action_dim, bool discrete, int hidden, double log_std_init,
               Rng& rng)
    : net_(obs_dim, hidden, action_dim), action_dim_(action_dim), discrete_(discrete) {
  net_.init(rng, 0.5);
  if (!discrete_)
    log_std_.assign(static_cast<std::size_t>(action_dim), log_std_init);
  clamp_log_std();
}

int Policy::param_count() const {
  return net_.param_count() + static_cast<int>(log_std_.size());
}

double& Policy::param(int i) {
  const int n = net_.param_count();
  return i < n ? net_.params()[static_cast<std::size_t>(i)]
               : log_std_[static_cast<std::size_t>(i - n)];
}

double Policy::param(int i) const {
  const int n = net_.param_count();
  return i < n ? net_.params()[static_cast<std::size_t>(i)]
               : log_std_[static_cast<std::size_t>(i - n)];
}

void Policy::clamp_log_std() {
  for (double& v : log_std_) v = std::clamp(v, kLogStdMin, kLogStdMax);
}

namespace {

std::vector<double> stable_softmax(std::span<const double> z) {
  double zmax = -std::numeric_limits<double>::infinity();
  for (double v : z) zmax = std::max(zmax, v);
  std::vector<double> p(z.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    p[i] = std::exp(z[i] - zmax);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

}  // namespace

std::vector<double> Policy::sample_action(std::span<const double> obs, Rng& rng,
                                          double* logp) const {
  const std::vector<double> y = net_.forward(obs);
  if (discrete_) {
    const std::vector<double> p = stable_softmax(y);
    const std::int64_t a = sample_index(p, rng);
    if (logp) *logp = std::log(std::max(p[static_cast<std::size_t>(a)], 1e-300));
    return {static_cast<double>(a)};
  }
  std::vector<double> a(y.size());
  double lp = 0.0;
  for (std::size_t d = 0; d < y.size(); ++d) {
    const double sigma = std::exp(log_std_[d]);
    const double z = rng.normal();
    a[d] = y[d] + sigma * z;
    lp += -0.5 * z * z - log_std_[d] - 0.5 * kLog2Pi;
  }
  if (logp) *logp = lp;
  return a;
}

std::vector<double> Policy::mean_action(std::span<const double> obs) const {
  const std::vector<double> y = net_.forward(obs);
  if (!discrete_) return y;
  int best = 0;
  for (std::size_t i = 1; i < y.size(); ++i)
    if (y[i] > y[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
  return {static_cast<double>(best)};
}

double Policy::log_prob(std::span<const double> obs, std::span<const double> action) const {
  const std::vector<double> y = net_.forward(obs);
  if (discrete_) {
    const std::vector<double> p = stable_softmax(y);
    const auto a = static_cast<std::size_t>(action[0]);
    return std::log(std::max(p[a], 1e-300));
  }
  double lp = 0.0;
  for (std::size_t d = 0; d < y.size(); ++d) {
    const double sigma = std::exp(log_std_[d]);
    const double z = (action[d] - y[d]) / sigma;
    lp += -0.5 * z * z - log_std_[d] - 0.5 * kLog2Pi;
  }
  return lp;
}

double Policy::entropy(std::span<const double> obs) const {
  if (!discrete_) {
    double h = 0.0;
    for (double ls : log_std_) h += ls + 0.5 * (1.0 + kLog2Pi);
    return h;
  }
  const std::vector<double> p = stable_softmax(net_.forward(obs));
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log(v);
  return h;
}

void Policy::add_grad(std::span<const double> obs, std::span<const double> action,
                      double logp_coef, double ent_coef, std::span<double> grad) const {
  Mlp::Trace trace;
  const std::vector<double> y = net_.forward(obs, &trace);
  const std::span<double> grad_net = grad.subspan(0, static_cast<std::size_t>(net_.param_count()));

  if (discrete_) {
    const std::vector<double> p = stable_softmax(y);
    const auto a = static_cast<std::size_t>(action[0]);
    double h = 0.0;
    for (double v : p)
      if (v > 0.0) h -= v * std::log(v);
    std::vector<double> dy(y.size(), 0.0);
    for (std::size_t k = 0; k < y.size(); ++k) {
      const double dlogp = (k == a ? 1.0 : 0.0) - p[k];
      const double dent = p[k] > 0.0 ? -p[k] * (std::log(p[k]) + h) : 0.0;
      dy[k] = logp_coef * dlogp + ent_coef * dent;
    }
    net_.backward(trace, dy, grad_net);
    return;
  }

  std::vector<double> dy(y.size(), 0.0);
  std::span<double> grad_ls = grad.subspan(static_cast<std::size_t>(net_.param_count()));
  for (std::size_t d = 0; d < y.size(); ++d) {
    const double sigma = std::exp(log_std_[d]);
    const double z = (action[d] - y[d]) / sigma;
    dy[d] = logp_coef * z / sigma;          // dlogp/dmu
    grad_ls[d] += logp_coef * (z * z - 1.0)  // dlogp/dlog_std
                  + ent_coef;                // dH/dlog_std = 1
  }
  net_.backward(trace, dy, grad_net);
}

ValueFn::ValueFn(int obs_dim, int hidden, Rng& rng) : net_(obs_dim, hidden, 1) {
  net_.init(rng, 0.5);
}

double ValueFn::value(std::span<const double> obs) const { return net_.forward(obs)[0]; }

void ValueFn::add_grad(std::span<const double> obs, double coef, std::span<double> grad) const {
  Mlp::Trace trace;
  net_.forward(obs, &trace);
  const double dy[1] = {coef};
  net_.backward(trace, dy, grad);
}

// ---------------------------------------------------------------------------
// GAE and rollouts
// ---------------------------------------------------------------------------

GaeResult compute_gae(const Trajectory& traj, const ValueFn& value_fn, double gamma,
                      double lambda) {
  const std::size_t n = traj.steps.size();
  GaeResult out;
  out.advantages.assign(n, 0.0);
  out.value_targets.assign(n, 0.0);
  if (n == 0) return out;

  std::vector<double> values(n + 1, 0.0);
  for (std::size_t t = 0; t < n; ++t) values[t] = value_fn.value(traj.steps[t].obs);
  values[n] = value_fn.value(traj.final_obs);

  double running = 0.0;
  for (std::size_t t = n; t-- > 0;) {
    const double not_done = traj.steps[t].done ? 0.0 : 1.0;
    const double delta = traj.steps[t].reward + gamma * values[t + 1] * not_done - values[t];
    running = delta + gamma * lambda * not_done * running;
    out.advantages[t] = running;
    out.value_targets[t] = running + values[t];
  }
  return out;
}

std::int64_t sample_index(std::span<const double> probs, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return static_cast<std::int64_t>(i);
  }
  return static_cast<std::int64_t>(probs.size()) - 1;
}

namespace {

Trajectory run_episode(const Policy& policy, const SamplingDistribution& dist,
                       const TaskSpace& space, Environment& env, Rng rng) {
  Trajectory traj;
  traj.task_index = sample_index(dist.probs, rng);
  const TaskParams params = space.draw_params(traj.task_index, rng);
  std::vector<double> obs = env.reset(params, rng);
  bool done = false;
  while (!done) {
    Transition tr;
    tr.obs = obs;
    tr.action = policy.sample_action(obs, rng, &tr.logp);
    StepResult step = env.step(tr.action);
    tr.reward = step.reward;
    tr.done = step.done;
    done = step.done;
    obs = std::move(step.observation);
    traj.episodic_reward += tr.reward;
    traj.steps.push_back(std::move(tr));
  }
  traj.final_obs = obs;
  traj.summary = env.summary();
  return traj;
}

}  // namespace

RolloutBatch collect_rollouts(const Policy& policy, const SamplingDistribution& dist,
                              const TaskSpace& space, const EnvFactory& factory,
                              bool parallel_safe, int n_episodes, const Rng& iter_rng,
                              int workers) {
  if (n_episodes < 1) throw std::invalid_argument("collect_rollouts: n_episodes must be >= 1");
  RolloutBatch batch;
  batch.trajectories.resize(static_cast<std::size_t>(n_episodes));

  const int pool = parallel_safe ? std::max(1, std::min(workers, n_episodes)) : 1;
  if (pool == 1) {
    for (int e = 0; e < n_episodes; ++e) {
      auto env = factory();
      batch.trajectories[static_cast<std::size_t>(e)] =
          run_episode(policy, dist, space, *env, iter_rng.derive(static_cast<std::uint64_t>(e)));
    }
    return batch;
  }

  std::atomic<int> next{0};
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(pool));
  for (int w = 0; w < pool; ++w) {
    threads.emplace_back([&] {
      for (;;) {
        const int e = next.fetch_add(1);
        if (e >= n_episodes) return;
        auto env = factory();
        batch.trajectories[static_cast<std::size_t>(e)] = run_episode(
            policy, dist, space, *env, iter_rng.derive(static_cast<std::uint64_t>(e)));
      }
    });
  }
  for (auto& t : threads) t.join();
  return batch;
}

std::vector<EpisodeRecord> finalize_batch(RolloutBatch& batch, const ValueFn& value_fn,
                                          double gamma, double lambda) {
  std::vector<EpisodeRecord> records;
  records.reserve(batch.trajectories.size());
  for (Trajectory& traj : batch.trajectories) {
    GaeResult gae = compute_gae(traj, value_fn, gamma, lambda);
    traj.advantages = std::move(gae.advantages);
    traj.value_targets = std::move(gae.value_targets);

    double abs_sum = 0.0;
    for (double a : traj.advantages) abs_sum += std::abs(a);

    EpisodeRecord rec;
    rec.task_index = traj.task_index;
    rec.episodic_reward = traj.episodic_reward;
    rec.length = traj.summary.length;
    rec.fall_step = traj.summary.fall_step;
    double eps = 0.0;
    for (double e : traj.summary.tracking_error_per_channel) eps = std::max(eps, e);
    rec.tracking_error = eps;
    rec.value_error_score =
        traj.advantages.empty() ? 0.0 : abs_sum / static_cast<double>(traj.advantages.size());
    records.push_back(rec);
  }
  return records;
}

// ---------------------------------------------------------------------------
// PPO update
// ---------------------------------------------------------------------------

LossStats ppo_loss(const Policy& policy, const ValueFn& value_fn,
                   std::span<const Sample> samples, const LearnerConfig& cfg,
                   std::span<double> grad_policy, std::span<double> grad_value) {
  if (samples.empty()) throw std::invalid_argument("ppo_loss: empty sample set");
  std::fill(grad_policy.begin(), grad_policy.end(), 0.0);
  std::fill(grad_value.begin(), grad_value.end(), 0.0);

  const double inv_n = 1.0 / static_cast<double>(samples.size());
  LossStats stats;
  for (const Sample& s : samples) {
    const Transition& t = *s.t;
    const double logp = policy.log_prob(t.obs, t.action);
    const double ratio = std::exp(logp - t.logp);
    const double unclipped = ratio * s.advantage;
    const double clipped = std::clamp(ratio, 1.0 - cfg.clip, 1.0 + cfg.clip) * s.advantage;
    const double surrogate = std::min(unclipped, clipped);
    const double h = policy.entropy(t.obs);
    const double v = value_fn.value(t.obs);
    const double verr = v - s.value_target;

    stats.policy += -surrogate * inv_n;
    stats.entropy += h * inv_n;
    stats.value += verr * verr * inv_n;

    if (!grad_policy.empty()) {
      // The clipped branch is constant in theta; only the unclipped branch
      // contributes d surrogate / d logp = ratio * advantage.
      const double dlogp = (unclipped <= clipped) ? -unclipped * inv_n : 0.0;
      policy.add_grad(t.obs, t.action, dlogp, -cfg.entropy_coef * inv_n, grad_policy);
    }
    if (!grad_value.empty())
      value_fn.add_grad(t.obs, 2.0 * cfg.value_coef * verr * inv_n, grad_value);
  }
  stats.total = stats.policy + cfg.value_coef * stats.value - cfg.entropy_coef * stats.entropy;
  return stats;
}

void normalize_advantages(std::span<double> advantages) {
  const std::size_t n = advantages.size();
  if (n < 2) return;
  double mean = 0.0;
  for (double a : advantages) mean += a;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double a : advantages) var += (a - mean) * (a - mean);
  var /= static_cast<double>(n);
  if (var <= 0.0) return;
  const double inv_sd = 1.0 / std::sqrt(var);
  for (double& a : advantages) a = (a - mean) * inv_sd;
}

namespace {

void adam_step(std::span<double> params, std::span<const double> grad, AdamState& state,
               double lr) {
  constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  if (state.m.size() != params.size()) {
    state.m.assign(params.size(), 0.0);
    state.v.assign(params.size(), 0.0);
    state.step = 0;
  }
  ++state.step;
  const double c1 = 1.0 - std::pow(b1, state.step);
  const double c2 = 1.0 - std::pow(b2, state.step);
  for (std::size_t i = 0; i < params.size(); ++i) {
    state.m[i] = b1 * state.m[i] + (1.0 - b1) * grad[i];
    state.v[i] = b2 * state.v[i] + (1.0 - b2) * grad[i] * grad[i];
    params[i] -= lr * (state.m[i] / c1) / (std::sqrt(state.v[i] / c2) + eps);
  }
}

}  // namespace

UpdateStats update_policy(Policy& policy, ValueFn& value_fn, RolloutBatch& batch,
                          const LearnerConfig& cfg, AdamState& opt_policy, AdamState& opt_value,
                          Rng& rng) {
  cfg.validate();
  std::vector<Sample> samples;
  for (const Trajectory& traj : batch.trajectories) {
    if (traj.advantages.size() != traj.steps.size())
      throw std::invalid_argument("update_policy: advantages not computed");
    for (std::size_t t = 0; t < traj.steps.size(); ++t)
      samples.push_back({&traj.steps[t], traj.advantages[t], traj.value_targets[t]});
  }
  if (samples.empty()) throw std::invalid_argument("update_policy: empty dataset");

  {
    std::vector<double> adv(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) adv[i] = samples[i].advantage;
    normalize_advantages(adv);
    for (std::size_t i = 0; i < samples.size(); ++i) samples[i].advantage = adv[i];
  }

  std::vector<double> grad_policy(static_cast<std::size_t>(policy.param_count()));
  std::vector<double> grad_value(static_cast<std::size_t>(value_fn.param_count()));
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  UpdateStats stats;
  std::vector<Sample> mb;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[static_cast<std::size_t>(rng.uniform_int(
                                  static_cast<std::int64_t>(i)))]);
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(cfg.minibatch)) {
      const std::size_t stop =
          std::min(order.size(), start + static_cast<std::size_t>(cfg.minibatch));
      mb.clear();
      for (std::size_t i = start; i < stop; ++i) mb.push_back(samples[order[i]]);

      const LossStats loss = ppo_loss(policy, value_fn, mb, cfg, grad_policy, grad_value);
      if (!std::isfinite(loss.total))
        throw NanDivergence("policy update diverged: non-finite loss (policy=" +
                            std::to_string(loss.policy) +
                            ", value=" + std::to_string(loss.value) + ")");

      std::vector<double> flat_policy(grad_policy.size());
      for (int i = 0; i < policy.param_count(); ++i)
        flat_policy[static_cast<std::size_t>(i)] = policy.param(i);
      adam_step(flat_policy, grad_policy, opt_policy, cfg.lr);
      for (int i = 0; i < policy.param_count(); ++i)
        policy.param(i) = flat_policy[static_cast<std::size_t>(i)];
      policy.clamp_log_std();
      adam_step(value_fn.params(), grad_value, opt_value, cfg.lr);

      for (int i = 0; i < policy.param_count(); ++i)
        if (!std::isfinite(policy.param(i)))
          throw NanDivergence("policy update diverged: non-finite parameter");

      stats.last_loss = loss;
      ++stats.minibatches;
    }
  }
  return stats;
}

// ---------------------------------------------------------------------------
// Checkpoints
// ---------------------------------------------------------------------------

namespace {

void emit_tensor(std::string& out, const Mlp::TensorView& view, std::span<const double> data) {
  char buf[64];
  out += "tensor ";
  out += view.name;
  out += ' ';
  out += std::to_string(view.rows);
  out += ' ';
  out += std::to_string(view.cols);
  out += '\n';
  std::size_t k = view.offset;
  for (int r = 0; r < view.rows; ++r) {
    for (int c = 0; c < view.cols; ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", data[k++]);
      out += buf;
      out += (c + 1 == view.cols) ? '\n' : ' ';
    }
  }
}

}  // namespace

std::string checkpoint_to_string(const Policy& policy, const ValueFn& value_fn) {
  std::string out = "lpacrl-checkpoint 1\n";
  out += "meta obs_dim " + std::to_string(policy.obs_dim()) + " action_dim " +
         std::to_string(policy.action_dim()) + " discrete " +
         (policy.discrete() ? std::string("1") : std::string("0")) + " hidden " +
         std::to_string(policy.net().hidden_dim()) + "\n";
  for (const auto& view : policy.net().tensors("policy"))
    emit_tensor(out, view, policy.net().params());
  if (!policy.discrete()) {
    Mlp::TensorView ls{"policy.log_std", 1, static_cast<int>(policy.log_std().size()), 0};
    emit_tensor(out, ls, policy.log_std());
  }
  for (const auto& view : value_fn.net().tensors("value"))
    emit_tensor(out, view, value_fn.params());
  return out;
}

void checkpoint_from_string(const std::string& blob, Policy& policy, ValueFn& value_fn) {
  std::istringstream in(blob);
  std::string line;
  if (!std::getline(in, line) || line != "lpacrl-checkpoint 1")
    throw std::invalid_argument("checkpoint: bad header");

  std::string word;
  int obs_dim = 0, action_dim = 0, discrete = 0, hidden = 0;
  {
    if (!std::getline(in, line)) throw std::invalid_argument("checkpoint: missing meta");
    std::istringstream meta(line);
    std::string key;
    meta >> word;
    if (word != "meta") throw std::invalid_argument("checkpoint: missing meta");
    while (meta >> key) {
      int value = 0;
      if (!(meta >> value)) throw std::invalid_argument("checkpoint: bad meta");
      if (key == "obs_dim") obs_dim = value;
      else if (key == "action_dim") action_dim = value;
      else if (key == "discrete") discrete = value;
      else if (key == "hidden") hidden = value;
      else throw std::invalid_argument("checkpoint: unknown meta key '" + key + "'");
    }
  }
  if (obs_dim < 1 || action_dim < 1) throw std::invalid_argument("checkpoint: bad dimensions");

  Rng rng(0);
  policy = Policy(obs_dim, action_dim, discrete != 0, hidden, 0.0, rng);
  value_fn = ValueFn(obs_dim, hidden, rng);

  auto read_into = [&](const Mlp::TensorView& view, std::span<double> dst) {
    std::size_t k = view.offset;
    for (int i = 0; i < view.rows * view.cols; ++i) {
      double v = 0.0;
      if (!(in >> v)) throw std::invalid_argument("checkpoint: truncated tensor " + view.name);
      dst[k++] = v;
    }
  };

  auto expect_tensor = [&](const Mlp::TensorView& view, std::span<double> dst) {
    std::string tag, name;
    int rows = 0, cols = 0;
    if (!(in >> tag >> name >> rows >> cols) || tag != "tensor" || name != view.name ||
        rows != view.rows || cols != view.cols)
      throw std::invalid_argument("checkpoint: expected tensor " + view.name);
    read_into(view, dst);
  };

  for (const auto& view : policy.net().tensors("policy"))
    expect_tensor(view, policy.net().params());
  if (!policy.discrete()) {
    Mlp::TensorView ls{"policy.log_std", 1, static_cast<int>(policy.log_std().size()), 0};
    expect_tensor(ls, policy.log_std());
  }
  for (const auto& view : value_fn.net().tensors("value"))
    expect_tensor(view, value_fn.params());
  policy.clamp_log_std();
}

void save_checkpoint(const std::string& path, const Policy& policy, const ValueFn& value_fn) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint '" + path + "'");
  out << checkpoint_to_string(policy, value_fn);
}

void load_checkpoint(const std::string& path, Policy& policy, ValueFn& value_fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read checkpoint '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  checkpoint_from_string(ss.str(), policy, value_fn);
}

}  // namespace lpacrl
