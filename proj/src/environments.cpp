#include "lpacrl/environments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lpacrl/metrics.hpp"

namespace lpacrl {

// ---------------------------------------------------------------------------
// Chain bandit
// ---------------------------------------------------------------------------

void ChainBanditConfig::validate() const {
  if (n_tasks < 1) throw std::invalid_argument("bandit: n_tasks must be >= 1");
  if (!(learn_rate > 0.0)) throw std::invalid_argument("bandit: learn_rate must be > 0");
  if (noise_sd < 0.0) throw std::invalid_argument("bandit: noise_sd must be >= 0");
  if (!prereq.empty() && static_cast<int>(prereq.size()) != n_tasks)
    throw std::invalid_argument("bandit: prereq list size mismatch");
  for (std::size_t i = 0; i < prereq.size(); ++i)
    if (prereq[i] < -1 || prereq[i] >= n_tasks || prereq[i] == static_cast<int>(i))
      throw std::invalid_argument("bandit: invalid prerequisite");
}

ChainBanditState::ChainBanditState(ChainBanditConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  if (cfg_.prereq.empty()) {
    cfg_.prereq.resize(static_cast<std::size_t>(cfg_.n_tasks));
    for (int i = 0; i < cfg_.n_tasks; ++i) cfg_.prereq[static_cast<std::size_t>(i)] = i - 1;
  }
  m_.assign(static_cast<std::size_t>(cfg_.n_tasks), 0.0);
}

double ChainBanditState::gate_multiplier(int task) const {
  const int p = cfg_.prereq[static_cast<std::size_t>(task)];
  if (p < 0) return 1.0;
  const double mp = m_[static_cast<std::size_t>(p)];
  switch (cfg_.gate) {
    case GateKind::step: return mp >= cfg_.gate_threshold ? 1.0 : 0.0;
    case GateKind::linear: return std::clamp(mp, 0.0, 1.0);
  }
  return 0.0;
}

double ChainBanditState::reward_from(double m, Rng& rng) const {
  double r = m;
  if (cfg_.noise_sd > 0.0) r += rng.normal(0.0, cfg_.noise_sd);
  return std::clamp(r, 0.0, 1.0 + 3.0 * cfg_.noise_sd);
}

double ChainBanditState::pull(int task, Rng& rng) {
  if (task < 0 || task >= cfg_.n_tasks) throw std::out_of_range("bandit: task out of range");
  double& m = m_[static_cast<std::size_t>(task)];
  m += cfg_.learn_rate * gate_multiplier(task) * (1.0 - m);
  return reward_from(m, rng);
}

double ChainBanditState::peek(int task, Rng& rng) const {
  if (task < 0 || task >= cfg_.n_tasks) throw std::out_of_range("bandit: task out of range");
  return reward_from(m_[static_cast<std::size_t>(task)], rng);
}

ChainBanditEnv::ChainBanditEnv(std::shared_ptr<ChainBanditState> state, bool frozen)
    : state_(std::move(state)), frozen_(frozen) {
  if (!state_) throw std::invalid_argument("bandit env: null state");
}

std::vector<double> ChainBanditEnv::reset(const TaskParams& params, Rng& rng) {
  task_ = static_cast<int>(params.index);
  if (task_ < 0 || task_ >= state_->size())
    throw std::out_of_range("bandit env: task out of range");
  rng_ = rng.derive(0x62616e64ULL);  // episode-local stream
  done_ = false;
  summary_ = EpisodeSummary{};
  std::vector<double> obs(static_cast<std::size_t>(state_->size()), 0.0);
  obs[static_cast<std::size_t>(task_)] = 1.0;
  return obs;
}

StepResult ChainBanditEnv::step(std::span<const double>) {
  if (done_) throw std::logic_error("bandit env: step after done");
  const double r = frozen_ ? state_->peek(task_, rng_) : state_->pull(task_, rng_);
  done_ = true;

  summary_.length = 1;
  summary_.steps_taken = 1;
  summary_.fall_step = 1;
  summary_.episodic_reward = r;
  // Distance from mastery plays the role of the tracking error.
  const double eps = 1.0 - std::clamp(r, 0.0, 1.0);
  summary_.tracking_error_per_channel = {eps};
  summary_.epte_per_channel = {metrics::epte_sp(eps, 1, 1)};

  StepResult result;
  result.observation.assign(static_cast<std::size_t>(state_->size()), 0.0);
  result.reward = r;
  result.done = true;
  return result;
}

EpisodeSummary ChainBanditEnv::summary() const {
  if (!done_) throw std::logic_error("bandit env: summary before episode end");
  return summary_;
}

// ---------------------------------------------------------------------------
// Point mass
// ---------------------------------------------------------------------------

void PointMassConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("point mass: dt must be > 0");
  if (horizon < 1) throw std::invalid_argument("point mass: horizon must be >= 1");
  if (!(phi_scale > 0.0)) throw std::invalid_argument("point mass: phi_scale must be > 0");
  if (levels.empty()) throw std::invalid_argument("point mass: needs at least one level");
  for (const auto& l : levels) {
    if (!(l.a_max > 0.0)) throw std::invalid_argument("point mass: a_max must be > 0");
    if (l.drag < 0.0) throw std::invalid_argument("point mass: drag must be >= 0");
    if (l.hazard_base < 0.0 || l.hazard_base >= 1.0)
      throw std::invalid_argument("point mass: hazard_base must lie in [0, 1)");
  }
}

PointMassEnv::PointMassEnv(PointMassConfig cfg, PointMassBinding binding)
    : cfg_(std::move(cfg)), binding_(std::move(binding)) {
  cfg_.validate();
  if (binding_.command_dims.empty())
    throw std::invalid_argument("point mass: needs at least one command channel");
}

std::vector<double> PointMassEnv::reset(const TaskParams& params, Rng& rng) {
  const std::size_t c = binding_.command_dims.size();
  v_.assign(c, 0.0);
  v_cmd_.resize(c);
  for (std::size_t i = 0; i < c; ++i) {
    const int dim = binding_.command_dims[i];
    if (dim < 0 || dim >= static_cast<int>(params.values.size()))
      throw std::out_of_range("point mass: command dim out of range");
    v_cmd_[i] = params.values[static_cast<std::size_t>(dim)].value;
  }
  int level_id = 0;
  if (binding_.level_dim >= 0)
    level_id = params.values[static_cast<std::size_t>(binding_.level_dim)].coord;
  if (level_id < 0 || level_id >= static_cast<int>(cfg_.levels.size()))
    throw std::out_of_range("point mass: level out of range");
  level_ = cfg_.levels[static_cast<std::size_t>(level_id)];

  last_action_.assign(c, 0.0);
  actual_series_.assign(c, {});
  rng_ = rng.derive(0x706d656eULL);
  t_ = 0;
  done_ = false;
  fallen_ = false;
  fall_step_ = cfg_.horizon;
  reward_sum_ = 0.0;
  return observe();
}

double PointMassEnv::hazard() const {
  double cmd_norm = 0.0;
  for (double c : v_cmd_) cmd_norm += c * c;
  cmd_norm = std::sqrt(cmd_norm);
  const double h =
      level_.hazard_base + level_.hazard_vel_gain * std::max(0.0, cmd_norm - level_.hazard_vel_floor);
  return std::clamp(h, 0.0, 0.999);
}

StepResult PointMassEnv::step(std::span<const double> action) {
  if (done_) throw std::logic_error("point mass: step after done");
  if (action.size() != v_.size()) throw std::invalid_argument("point mass: action size mismatch");

  const std::size_t c = v_.size();
  double err_sq = 0.0;
  double rate_sq = 0.0;
  for (std::size_t i = 0; i < c; ++i) {
    const double a = std::clamp(action[i], -level_.a_max, level_.a_max);
    rate_sq += (a - last_action_[i]) * (a - last_action_[i]);
    last_action_[i] = a;
    v_[i] += cfg_.dt * (a - level_.drag * v_[i]);
    const double e = v_cmd_[i] - v_[i];
    err_sq += e * e;
  }
  double reward = std::exp(-err_sq / cfg_.phi_scale) - cfg_.action_rate_weight * rate_sq;

  bool fall = false;
  for (double v : v_)
    if (std::abs(v) > cfg_.v_fail) fall = true;
  if (!fall && rng_.bernoulli(hazard())) fall = true;

  StepResult result;
  if (fall) {
    fallen_ = true;
    fall_step_ = t_;  // alive steps completed before the fall
    reward = 0.0;
    done_ = true;
    result.fall_step = fall_step_;
  } else {
    for (std::size_t i = 0; i < c; ++i) actual_series_[i].push_back(v_[i]);
    ++t_;
    if (t_ >= cfg_.horizon) done_ = true;
  }

  reward_sum_ += reward;
  result.observation = observe();
  result.reward = reward;
  result.done = done_;
  return result;
}

std::vector<double> PointMassEnv::observe() const {
  std::vector<double> obs;
  obs.reserve(3 * v_.size());
  obs.insert(obs.end(), v_.begin(), v_.end());
  obs.insert(obs.end(), v_cmd_.begin(), v_cmd_.end());
  obs.insert(obs.end(), last_action_.begin(), last_action_.end());
  return obs;
}

EpisodeSummary PointMassEnv::summary() const {
  if (!done_) throw std::logic_error("point mass: summary before episode end");
  EpisodeSummary s;
  s.length = cfg_.horizon;
  s.steps_taken = fallen_ ? fall_step_ + 1 : t_;
  s.fall_step = fall_step_;
  s.episodic_reward = reward_sum_;
  const std::size_t c = v_.size();
  s.tracking_error_per_channel.resize(c);
  s.epte_per_channel.resize(c);
  for (std::size_t i = 0; i < c; ++i) {
    const std::vector<double> cmd(actual_series_[i].size(), v_cmd_[i]);
    const double eps = metrics::tracking_error(cmd, actual_series_[i], fall_step_);
    s.tracking_error_per_channel[i] = eps;
    s.epte_per_channel[i] = metrics::epte_sp(eps, fall_step_, cfg_.horizon);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

namespace {

Preset make_chain8() {
  Preset p;
  p.name = "chain8";
  p.space = TaskSpace::build({Dimension::categorical(
      "task", {"t0", "t1", "t2", "t3", "t4", "t5", "t6", "t7"})});
  p.env_kind = Preset::EnvKind::chain_bandit;
  p.bandit.n_tasks = 8;
  p.bandit.learn_rate = 0.05;
  p.bandit.noise_sd = 0.0;
  p.bandit.gate = GateKind::step;
  p.bandit.gate_threshold = 0.5;
  return p;
}

Preset make_pm_flat8(int horizon) {
  Preset p;
  p.name = "pm_flat8";
  p.space = TaskSpace::build({Dimension::continuous("vx", 0.0, 4.0, 8, true),
                              Dimension::categorical("level", {"flat"})});
  p.env_kind = Preset::EnvKind::point_mass;
  p.pm.dt = 0.05;
  p.pm.horizon = horizon > 0 ? horizon : 1000;
  p.pm.v_fail = 8.0;
  p.pm.levels = {{"flat", 12.0, 0.5, 0.0, 0.0, 0.0}};
  p.binding.command_dims = {0};
  p.binding.level_dim = 1;
  return p;
}

Preset make_pm_scaled(int horizon) {
  Preset p;
  p.name = "pm_scaled";
  p.space = TaskSpace::build({Dimension::continuous("vx", 0.0, 2.5, 5, true),
                              Dimension::continuous("wz", 0.0, 3.0, 4, true),
                              Dimension::categorical("mode", {"flat", "rough"})});
  p.env_kind = Preset::EnvKind::point_mass;
  p.pm.dt = 0.05;
  p.pm.horizon = horizon > 0 ? horizon : 1000;
  p.pm.v_fail = 8.0;
  // The rough mode is hazard-dominated at high commanded speed, which leaves
  // a designed-unmasterable corner of the grid.
  p.pm.levels = {{"flat", 8.0, 0.6, 0.0, 0.0, 0.0},
                 {"rough", 5.0, 1.0, 0.0, 0.012, 2.0}};
  p.binding.command_dims = {0, 1};
  p.binding.level_dim = 2;
  return p;
}

Preset make_space600() {
  Preset p;
  p.name = "space600";
  p.space = TaskSpace::build(
      {Dimension::continuous("vx", 0.0, 2.5, 5, true),
       Dimension::continuous("wz", 0.0, 3.0, 6, true),
       Dimension::categorical("terrain", {"ascending_stairs", "descending_stairs",
                                          "random_rough", "uphill_slope", "downhill_slope"}),
       Dimension::categorical("terrain_level", {"0", "1", "2", "3"})});
  p.env_kind = Preset::EnvKind::none;
  return p;
}

}  // namespace

std::shared_ptr<ChainBanditState> Preset::make_bandit_state() const {
  if (env_kind != EnvKind::chain_bandit) return nullptr;
  return std::make_shared<ChainBanditState>(bandit);
}

std::unique_ptr<Environment> Preset::make_env(std::shared_ptr<ChainBanditState> state,
                                              bool frozen) const {
  switch (env_kind) {
    case EnvKind::chain_bandit:
      return std::make_unique<ChainBanditEnv>(std::move(state), frozen);
    case EnvKind::point_mass:
      return std::make_unique<PointMassEnv>(pm, binding);
    case EnvKind::none:
      break;
  }
  throw std::invalid_argument("preset '" + name + "' has no runnable environment");
}

Preset make_preset(std::string_view name, int horizon_override) {
  if (name == "chain8") return make_chain8();
  if (name == "pm_flat8") return make_pm_flat8(horizon_override);
  if (name == "pm_scaled") return make_pm_scaled(horizon_override);
  if (name == "space600") return make_space600();
  throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> preset_names() {
  return {"chain8", "pm_flat8", "pm_scaled", "space600"};
}

}  // namespace lpacrl
