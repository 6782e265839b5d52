#include "lpacrl/curriculum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace lpacrl {

const char* to_string(SchedulerKind kind) {
  switch (kind) {
    case SchedulerKind::lp_acrl: return "lp_acrl";
    case SchedulerKind::alp: return "alp";
    case SchedulerKind::plr: return "plr";
    case SchedulerKind::lrpc: return "lrpc";
    case SchedulerKind::sc: return "sc";
    case SchedulerKind::uniform: return "uniform";
  }
  return "?";
}

std::optional<SchedulerKind> scheduler_kind_from(std::string_view name) {
  if (name == "lp_acrl") return SchedulerKind::lp_acrl;
  if (name == "alp") return SchedulerKind::alp;
  if (name == "plr") return SchedulerKind::plr;
  if (name == "lrpc") return SchedulerKind::lrpc;
  if (name == "sc") return SchedulerKind::sc;
  if (name == "uniform") return SchedulerKind::uniform;
  return std::nullopt;
}

void SchedulerConfig::validate() const {
  if (!(beta > 0.0)) throw std::invalid_argument("scheduler: beta must be > 0");
  if (stage_len < 1) throw std::invalid_argument("scheduler: stage_len must be >= 1");
  if (floor_mix < 0.0 || floor_mix >= 1.0)
    throw std::invalid_argument("scheduler: floor_mix must lie in [0, 1)");
  if (!(ema_alpha > 0.0) || ema_alpha > 1.0)
    throw std::invalid_argument("scheduler: ema_alpha must lie in (0, 1]");
  if (stale_decay < 0.0 || stale_decay > 1.0)
    throw std::invalid_argument("scheduler: stale_decay must lie in [0, 1]");
}

std::vector<double> softmax(std::span<const double> scores, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("softmax: beta must be > 0");
  if (scores.empty()) throw std::invalid_argument("softmax: empty score vector");
  double max_scaled = -std::numeric_limits<double>::infinity();
  for (double s : scores) {
    if (std::isnan(s)) throw std::invalid_argument("softmax: NaN score");
    max_scaled = std::max(max_scaled, s / beta);
  }
  std::vector<double> out(scores.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out[i] = std::exp(scores[i] / beta - max_scaled);
    sum += out[i];
  }
  for (double& p : out) p /= sum;
  return out;
}

double sc_velocity_max(const ScParams& p, double k) {
  return p.base + p.span / (1.0 + std::exp(-p.rate * (k - p.midpoint)));
}

Scheduler::Scheduler(const TaskSpace& space, SchedulerConfig cfg)
    : space_(space), cfg_(cfg) {
  cfg_.validate();
  if (space_.size() <= 0) throw std::invalid_argument("scheduler: empty task space");
  if (cfg_.kind == SchedulerKind::sc && space_.first_continuous_dimension() < 0)
    throw std::invalid_argument("scheduler: sc needs a continuous dimension");
  stats_.assign(static_cast<std::size_t>(space_.size()), TaskStats{});
  scores_.assign(stats_.size(), 0.0);
  dist_.stage = 0;
  dist_.probs.assign(stats_.size(), 1.0 / static_cast<double>(stats_.size()));
}

void Scheduler::record_episode(const EpisodeRecord& rec) {
  if (rec.task_index < 0 || rec.task_index >= size())
    throw std::out_of_range("record_episode: task index out of range");
  TaskStats& s = stats_[static_cast<std::size_t>(rec.task_index)];
  if (s.episode_count_stage == 0) {
    s.reward_current = rec.episodic_reward;  // first episode of a stage seeds the EMA
  } else {
    s.reward_current += cfg_.ema_alpha * (rec.episodic_reward - s.reward_current);
  }
  if (s.episode_count_total == 0) {
    s.plr_score = rec.value_error_score;
  } else {
    s.plr_score += cfg_.ema_alpha * (rec.value_error_score - s.plr_score);
  }
  ++s.episode_count_stage;
  ++s.episode_count_total;
}

SamplingDistribution Scheduler::advance_stage() {
  for (TaskStats& s : stats_) {
    if (s.episode_count_stage > 0) {
      s.lp = s.reward_current - s.reward_prev_stage;
      s.alp = std::abs(s.lp);
      s.reward_prev_stage = s.reward_current;
      s.staleness = 0;
    } else {
      // No samples this stage: keep the reward estimate, fade old progress.
      s.lp *= cfg_.stale_decay;
      s.alp = std::abs(s.lp);
      ++s.staleness;
    }
    s.episode_count_stage = 0;
  }

  const int next_stage = dist_.stage + 1;

  if (cfg_.kind == SchedulerKind::sc) {
    SamplingDistribution d = sc_distribution(static_cast<double>(next_stage) * cfg_.stage_len);
    d.stage = next_stage;
    dist_ = d;
    return dist_;
  }

  for (std::size_t i = 0; i < stats_.size(); ++i) {
    switch (cfg_.kind) {
      case SchedulerKind::lp_acrl: scores_[i] = stats_[i].lp; break;
      case SchedulerKind::alp: scores_[i] = stats_[i].alp; break;
      case SchedulerKind::plr: scores_[i] = stats_[i].plr_score; break;
      case SchedulerKind::lrpc: scores_[i] = -stats_[i].reward_prev_stage; break;
      case SchedulerKind::uniform: scores_[i] = 0.0; break;
      case SchedulerKind::sc: break;  // handled above
    }
  }

  if (cfg_.normalize_lp) {
    double max_abs = 0.0;
    for (double s : scores_) max_abs = std::max(max_abs, std::abs(s));
    if (max_abs > 0.0)
      for (double& s : scores_) s /= max_abs;
  }

  std::vector<double> probs = softmax(scores_, cfg_.beta);
  const double u = 1.0 / static_cast<double>(probs.size());
  for (double& p : probs) p = (1.0 - cfg_.floor_mix) * p + cfg_.floor_mix * u;

  dist_.probs = std::move(probs);
  dist_.stage = next_stage;
  return dist_;
}

SamplingDistribution Scheduler::sc_distribution(double iteration) const {
  const int dim = space_.first_continuous_dimension();
  if (dim < 0)
    throw std::invalid_argument("sc_distribution: space has no continuous dimension");

  const double v_max = sc_velocity_max(cfg_.sc, iteration);
  const Dimension& d = space_.dimensions()[static_cast<std::size_t>(dim)];
  int active = 0;
  for (int b = 0; b < d.bins; ++b)
    if (space_.bin_interval(static_cast<std::size_t>(dim), b).lo < v_max) ++active;
  active = std::max(active, 1);

  const std::int64_t cells_per_bin = space_.size() / d.bins;
  const double p_active = 1.0 / (static_cast<double>(active) * static_cast<double>(cells_per_bin));

  SamplingDistribution out;
  out.stage = dist_.stage;
  out.probs.assign(static_cast<std::size_t>(space_.size()), 0.0);
  for (std::int64_t i = 0; i < space_.size(); ++i) {
    const auto coords = space_.coords_of(i);
    if (coords[static_cast<std::size_t>(dim)] < active)
      out.probs[static_cast<std::size_t>(i)] = p_active;
  }
  return out;
}

std::int64_t Scheduler::sample_task(Rng& rng) const {
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < dist_.probs.size(); ++i) {
    acc += dist_.probs[i];
    if (u < acc) return static_cast<std::int64_t>(i);
  }
  return static_cast<std::int64_t>(dist_.probs.size()) - 1;
}

const TaskStats& Scheduler::stats(std::int64_t task) const {
  if (task < 0 || task >= size()) throw std::out_of_range("stats: task index out of range");
  return stats_[static_cast<std::size_t>(task)];
}

double Scheduler::last_score(std::int64_t task) const {
  if (task < 0 || task >= size()) throw std::out_of_range("score: task index out of range");
  return scores_[static_cast<std::size_t>(task)];
}

}  // namespace lpacrl
