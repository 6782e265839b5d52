// Acceptance suite: one check per shipped guarantee, one PASS/FAIL line each.
// Run via ctest (test name "acceptance") or directly; exits non-zero on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "lpacrl/config.hpp"
#include "lpacrl/curriculum.hpp"
#include "lpacrl/environments.hpp"
#include "lpacrl/learner.hpp"
#include "lpacrl/metrics.hpp"
#include "lpacrl/runner.hpp"
#include "lpacrl/task_space.hpp"
#include "test_util.hpp"

using namespace lpacrl;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& name, const std::string& detail,
            double seconds) {
  std::printf("[%s] %2d. %-38s %s (%.2fs)\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

void run_criterion(int id, const std::string& name,
                   const std::function<std::pair<bool, std::string>()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = false;
  std::string detail;
  try {
    const auto [p, d] = body();
    pass = p;
    detail = d;
  } catch (const std::exception& e) {
    pass = false;
    detail = std::string("exception: ") + e.what();
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(id, pass, name, detail, seconds);
}

std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "lpacrl_acceptance" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("missing " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --------------------------------------------------------------------------
// 1. Penalized tracking error: closed form vs step accumulator.
// --------------------------------------------------------------------------
std::pair<bool, std::string> criterion_epte() {
  Rng rng(101);
  double max_err = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const int length = 1 + static_cast<int>(rng.uniform_int(2000));
    const int fall = static_cast<int>(rng.uniform_int(length + 1));
    const double eps = rng.uniform();
    max_err = std::max(max_err, std::abs(metrics::epte_sp(eps, fall, length) -
                                         testutil::epte_accumulator(eps, fall, length)));
  }
  const bool oracle_ok = max_err < 1e-12;
  const bool ex1 = std::abs(metrics::epte_sp(0.2, 1000, 1000) - 0.2) <= 1e-15;
  const bool ex2 = std::abs(metrics::epte_sp(0.9, 0, 777) - 1.0) <= 1e-15;
  const bool ex3 = std::abs(metrics::epte_sp(0.1, 600, 1000) - 0.46) <= 1e-15;
  return {oracle_ok && ex1 && ex2 && ex3,
          "max |closed-form - accumulator| = " + fmt3(max_err) + ", worked examples " +
              (ex1 && ex2 && ex3 ? "exact" : "WRONG")};
}

// --------------------------------------------------------------------------
// 2. Softmax: normalization, shift invariance, argmax invariance, high-T.
// --------------------------------------------------------------------------
std::pair<bool, std::string> criterion_softmax() {
  Rng rng(102);
  bool ok = true;
  std::string why = "all churn clean";

  for (int trial = 0; trial < 200 && ok; ++trial) {
    std::vector<double> s(2 + rng.uniform_int(20));
    for (double& v : s) v = rng.uniform(-5.0, 5.0);
    const double beta = std::pow(10.0, rng.uniform(-3.0, 3.0));
    const std::vector<double> p = softmax(s, beta);
    double sum = 0.0;
    for (double v : p) sum += v;
    if (std::abs(sum - 1.0) >= 1e-9) {
      ok = false;
      why = "normalization off by " + fmt3(std::abs(sum - 1.0));
    }
    std::vector<double> shifted = s;
    for (double& v : shifted) v += 42.0;
    const std::vector<double> q = softmax(shifted, beta);
    for (std::size_t i = 0; i < p.size(); ++i)
      if (std::abs(p[i] - q[i]) >= 1e-12) {
        ok = false;
        why = "shift invariance violated by " + fmt3(std::abs(p[i] - q[i]));
      }
  }

  for (double beta : {1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3}) {
    for (int trial = 0; trial < 50 && ok; ++trial) {
      std::vector<double> s(8);
      for (double& v : s) v = rng.uniform(-1.0, 1.0);
      const std::vector<double> p = softmax(s, beta);
      if (testutil::argmax_lowest(p) != testutil::argmax_lowest(s)) {
        ok = false;
        why = "argmax changed at beta=" + fmt3(beta);
      }
    }
  }

  std::vector<double> s(8);
  for (double& v : s) v = rng.uniform(-1.0, 1.0);
  const std::vector<double> p = softmax(s, 1e6);
  double dev = 0.0;
  for (double v : p) dev = std::max(dev, std::abs(v - 0.125));
  if (dev >= 1e-3) {
    ok = false;
    why = "high-temperature deviation " + fmt3(dev);
  }
  return {ok, why};
}

// --------------------------------------------------------------------------
// 3. Sigmoid command-range schedule.
// --------------------------------------------------------------------------
std::pair<bool, std::string> criterion_sc() {
  const ScParams sc;
  const bool midpoint_exact = sc_velocity_max(sc, 1000.0) == 2.5;
  const bool at_zero =
      std::abs(sc_velocity_max(sc, 0.0) - (1.0 + 3.0 / (1.0 + std::exp(2.0)))) < 1e-9;

  bool monotone = true;
  double last = -1.0;
  for (int k = 0; k <= 5000; ++k) {
    const double v = sc_velocity_max(sc, k);
    if (v < last) monotone = false;
    last = v;
  }

  const Preset preset = make_preset("pm_flat8");
  SchedulerConfig cfg;
  cfg.kind = SchedulerKind::sc;
  Scheduler sched(preset.space, cfg);
  bool bins_monotone = true;
  int last_active = 0;
  for (int k = 0; k <= 5000; k += 10) {
    int active = 0;
    for (double p : sched.sc_distribution(k).probs)
      if (p > 0.0) ++active;
    if (active < last_active) bins_monotone = false;
    last_active = active;
  }

  return {midpoint_exact && at_zero && monotone && bins_monotone,
          std::string("v_max(1000)=") + fmt3(sc_velocity_max(sc, 1000.0)) + ", v_max(0)=" +
              fmt3(sc_velocity_max(sc, 0.0)) + ", monotone=" + (monotone ? "yes" : "NO") +
              ", bins monotone=" + (bins_monotone ? "yes" : "NO")};
}

// --------------------------------------------------------------------------
// 4. Advantage estimator vs brute-force double sum.
// --------------------------------------------------------------------------
std::pair<bool, std::string> criterion_gae() {
  Rng rng(104);
  double max_err = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int len = 1 + static_cast<int>(rng.uniform_int(50));
    ValueFn value(2, 4, rng);
    Trajectory traj;
    for (int t = 0; t < len; ++t) {
      Transition tr;
      tr.obs = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
      tr.reward = rng.uniform(-1.0, 1.0);
      tr.done = (t == len - 1) && rng.bernoulli(0.5);
      traj.steps.push_back(std::move(tr));
    }
    traj.final_obs = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    const double gamma = rng.uniform(0.0, 1.0);
    const double lambda = rng.uniform(0.0, 1.0);
    const GaeResult g = compute_gae(traj, value, gamma, lambda);

    std::vector<double> rewards, values;
    std::vector<char> dones;
    for (const Transition& tr : traj.steps) {
      rewards.push_back(tr.reward);
      values.push_back(value.value(tr.obs));
      dones.push_back(tr.done ? 1 : 0);
    }
    values.push_back(value.value(traj.final_obs));
    const std::vector<double> oracle =
        testutil::gae_bruteforce(rewards, values, dones, gamma, lambda);
    for (std::size_t t = 0; t < oracle.size(); ++t)
      max_err = std::max(max_err, std::abs(oracle[t] - g.advantages[t]));
  }

  // reductions: lambda = 0 -> one-step TD; gamma = lambda = 1, V = 0 -> reward-to-go
  double red_err = 0.0;
  {
    ValueFn value(1, 4, rng);
    ValueFn zero(1, 0, rng);
    for (double& w : zero.params()) w = 0.0;
    Trajectory traj;
    for (int t = 0; t < 20; ++t) {
      Transition tr;
      tr.obs = {rng.uniform(-1.0, 1.0)};
      tr.reward = rng.uniform(-1.0, 1.0);
      tr.done = t == 19;
      traj.steps.push_back(std::move(tr));
    }
    traj.final_obs = {0.0};
    const GaeResult td = compute_gae(traj, value, 0.8, 0.0);
    for (std::size_t t = 0; t < traj.steps.size(); ++t) {
      const double v_next = t + 1 < traj.steps.size() ? value.value(traj.steps[t + 1].obs)
                                                      : value.value(traj.final_obs);
      const double not_done = traj.steps[t].done ? 0.0 : 1.0;
      const double delta =
          traj.steps[t].reward + 0.8 * v_next * not_done - value.value(traj.steps[t].obs);
      red_err = std::max(red_err, std::abs(td.advantages[t] - delta));
    }
    const GaeResult mc = compute_gae(traj, zero, 1.0, 1.0);
    double tail = 0.0;
    for (std::size_t t = traj.steps.size(); t-- > 0;) {
      tail += traj.steps[t].reward;
      red_err = std::max(red_err, std::abs(mc.advantages[t] - tail));
    }
  }
  return {max_err < 1e-10 && red_err < 1e-12,
          "max oracle gap " + fmt3(max_err) + ", reduction gap " + fmt3(red_err)};
}

// --------------------------------------------------------------------------
// 5. Clipped-surrogate gradient vs central finite differences.
// --------------------------------------------------------------------------
std::pair<bool, std::string> criterion_gradient() {
  LearnerConfig cfg;
  cfg.hidden = 8;
  cfg.entropy_coef = 0.013;
  cfg.value_coef = 0.4;
  Rng rng(105);

  Policy policy(3, 2, false, cfg.hidden, -0.4, rng);
  ValueFn value(3, cfg.hidden, rng);

  Trajectory traj;
  for (int t = 0; t < 8; ++t) {
    Transition tr;
    tr.obs = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    tr.action = policy.sample_action(tr.obs, rng, &tr.logp);
    tr.reward = rng.uniform(-1.0, 1.0);
    tr.done = t == 7;
    traj.steps.push_back(std::move(tr));
  }
  traj.final_obs = {0.1, -0.2, 0.3};
  const GaeResult g = compute_gae(traj, value, cfg.gamma, cfg.lambda);
  traj.advantages = g.advantages;
  traj.value_targets = g.value_targets;
  std::vector<Sample> samples;
  for (std::size_t t = 0; t < traj.steps.size(); ++t)
    samples.push_back({&traj.steps[t], traj.advantages[t], traj.value_targets[t]});

  double worst_rel = 0.0;
  for (int point = 0; point < 3; ++point) {
    for (int i = 0; i < policy.param_count(); ++i) policy.param(i) += 0.05 * rng.normal();
    policy.clamp_log_std();
    for (double& w : value.params()) w += 0.05 * rng.normal();

    std::vector<double> grad_p(static_cast<std::size_t>(policy.param_count()));
    std::vector<double> grad_v(static_cast<std::size_t>(value.param_count()));
    ppo_loss(policy, value, samples, cfg, grad_p, grad_v);

    const double h = 1e-5;
    double num = 0.0, den_a = 0.0, den_f = 0.0;
    auto loss_at = [&] { return ppo_loss(policy, value, samples, cfg, {}, {}).total; };
    for (int i = 0; i < policy.param_count(); ++i) {
      const double saved = policy.param(i);
      policy.param(i) = saved + h;
      const double up = loss_at();
      policy.param(i) = saved - h;
      const double dn = loss_at();
      policy.param(i) = saved;
      const double fd = (up - dn) / (2.0 * h);
      num += (grad_p[static_cast<std::size_t>(i)] - fd) * (grad_p[static_cast<std::size_t>(i)] - fd);
      den_a += grad_p[static_cast<std::size_t>(i)] * grad_p[static_cast<std::size_t>(i)];
      den_f += fd * fd;
    }
    for (std::size_t i = 0; i < grad_v.size(); ++i) {
      const double saved = value.params()[i];
      value.params()[i] = saved + h;
      const double up = loss_at();
      value.params()[i] = saved - h;
      const double dn = loss_at();
      value.params()[i] = saved;
      const double fd = (up - dn) / (2.0 * h);
      num += (grad_v[i] - fd) * (grad_v[i] - fd);
      den_a += grad_v[i] * grad_v[i];
      den_f += fd * fd;
    }
    worst_rel = std::max(worst_rel,
                         std::sqrt(num) / std::max({std::sqrt(den_a), std::sqrt(den_f), 1e-12}));
  }
  return {worst_rel < 1e-4, "worst relative gradient error " + fmt3(worst_rel)};
}

// --------------------------------------------------------------------------
// 6. Chain oracle: the learning-progress curriculum sweeps the chain and
//    masters it on a budget where uniform sampling cannot.
//    Budget and floor weight frozen from the pre-registered reference run
//    (60x16, floor 0.25: curriculum min competence >= 0.94 and uniform min
//    <= 0.80 on every probe seed; see ledger).
// --------------------------------------------------------------------------
constexpr int kChainStages = 60;
constexpr int kChainEpisodesPerStage = 16;
constexpr double kChainFloorMix = 0.25;

struct ChainOutcome {
  std::vector<std::vector<double>> dist_rows;
  std::vector<double> competence;
};

ChainOutcome run_chain(SchedulerKind kind, std::uint64_t seed) {
  const Preset preset = make_preset("chain8");
  SchedulerConfig cfg;
  cfg.kind = kind;
  cfg.stage_len = 1;
  cfg.floor_mix = kChainFloorMix;
  Scheduler sched(preset.space, cfg);
  ChainBanditState bandit(preset.bandit);
  Rng root(seed);

  ChainOutcome out;
  out.dist_rows.push_back(sched.distribution().probs);
  for (int stage = 0; stage < kChainStages; ++stage) {
    for (int e = 0; e < kChainEpisodesPerStage; ++e) {
      Rng rng = root.derive(static_cast<std::uint64_t>(stage), static_cast<std::uint64_t>(e));
      const std::int64_t task = sched.sample_task(rng);
      EpisodeRecord rec;
      rec.task_index = task;
      rec.episodic_reward = bandit.pull(static_cast<int>(task), rng);
      rec.length = 1;
      rec.fall_step = 1;
      sched.record_episode(rec);
    }
    out.dist_rows.push_back(sched.advance_stage().probs);
  }
  out.competence = bandit.competences();
  return out;
}

std::pair<bool, std::string> criterion_chain() {
  const ChainOutcome lp = run_chain(SchedulerKind::lp_acrl, 1);
  const ChainOutcome uni = run_chain(SchedulerKind::uniform, 1);

  // (a) the stage of peak sampling is non-decreasing along the chain
  bool sweep_ok = true;
  int last_peak = 0;
  for (int t = 0; t < 8; ++t) {
    int peak = 0;
    double best = -1.0;
    for (std::size_t s = 0; s < lp.dist_rows.size(); ++s)
      if (lp.dist_rows[s][static_cast<std::size_t>(t)] > best) {
        best = lp.dist_rows[s][static_cast<std::size_t>(t)];
        peak = static_cast<int>(s);
      }
    if (peak < last_peak) sweep_ok = false;
    last_peak = peak;
  }

  // (b) full mastery under the curriculum, (c) a gap left by uniform sampling
  double lp_min = 1.0, uni_min = 1.0;
  for (double m : lp.competence) lp_min = std::min(lp_min, m);
  for (double m : uni.competence) uni_min = std::min(uni_min, m);

  const bool pass = sweep_ok && lp_min >= 0.9 && uni_min < 0.9;
  return {pass, std::string("sweep=") + (sweep_ok ? "ordered" : "OUT-OF-ORDER") +
                    ", lp min competence " + fmt3(lp_min) + ", uniform min competence " +
                    fmt3(uni_min) + " @" + std::to_string(kChainStages) + "x" +
                    std::to_string(kChainEpisodesPerStage)};
}

// --------------------------------------------------------------------------
// 7. Oscillation discrimination: ALP keeps sampling a reward-oscillating
//    task, the signed-progress curriculum averages it away.
// --------------------------------------------------------------------------
std::pair<bool, std::string> criterion_oscillation() {
  auto steady_share = [](SchedulerKind kind, std::uint64_t seed) {
    const TaskSpace space =
        TaskSpace::build({Dimension::categorical("task", {"osc", "flat"})});
    SchedulerConfig cfg;
    cfg.kind = kind;
    cfg.stage_len = 1;
    Scheduler sched(space, cfg);
    Rng rng(seed);
    double sum = 0.0;
    int counted = 0;
    for (int stage = 0; stage < 60; ++stage) {
      EpisodeRecord osc;
      osc.task_index = 0;
      osc.episodic_reward = (stage % 2 == 0 ? 1.0 : -1.0) + rng.normal(0.0, 0.01);
      osc.length = osc.fall_step = 1;
      sched.record_episode(osc);
      EpisodeRecord flat;
      flat.task_index = 1;
      flat.episodic_reward = 0.5 + rng.normal(0.0, 0.01);
      flat.length = flat.fall_step = 1;
      sched.record_episode(flat);
      const SamplingDistribution d = sched.advance_stage();
      if (stage >= 40) {
        sum += d.probs[0];
        ++counted;
      }
    }
    return sum / counted;
  };

  double alp_mean = 0.0, lp_mean = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    alp_mean += steady_share(SchedulerKind::alp, seed) / 5.0;
    lp_mean += steady_share(SchedulerKind::lp_acrl, seed) / 5.0;
  }
  return {alp_mean > lp_mean, "oscillating-task share: alp " + fmt3(alp_mean) + " vs lp " +
                                  fmt3(lp_mean) + " (mean of last 20 stages, 5 seeds)"};
}

// --------------------------------------------------------------------------
// 8. Scaled success analog: on the 40-instance point-mass grid with
//    designed-unmasterable cells, the curriculum beats uniform and
//    low-reward-prioritized sampling at equal budget.
//    Budget frozen from the pre-registered reference run (see ledger).
// --------------------------------------------------------------------------
RunConfig scaled_config(SchedulerKind kind, const fs::path& out) {
  RunConfig cfg;
  cfg.env_preset = "pm_scaled";
  cfg.env_horizon = 300;
  cfg.scheduler.kind = kind;
  cfg.scheduler.stage_len = 5;
  cfg.learner.hidden = 32;
  cfg.learner.minibatch = 512;
  cfg.learner.entropy_coef = 0.003;
  cfg.iterations = 150;
  cfg.episodes_per_iteration = 24;
  cfg.seeds = {0, 1, 2};
  cfg.eval_every = 0;
  cfg.eval_episodes_per_task = 5;
  cfg.workers = 3;
  cfg.output_dir = (out / to_string(kind)).string();
  return cfg;
}

std::pair<bool, std::string> criterion_scaled() {
  const fs::path out = scratch_dir("scaled");
  RunLog lp_log, uni_log, lrpc_log;
  for (auto [kind, log] :
       {std::pair<SchedulerKind, RunLog*>{SchedulerKind::lp_acrl, &lp_log},
        std::pair<SchedulerKind, RunLog*>{SchedulerKind::uniform, &uni_log},
        std::pair<SchedulerKind, RunLog*>{SchedulerKind::lrpc, &lrpc_log}}) {
    const RunResult r = run_experiment(scaled_config(kind, out), log);
    if (!r.ok()) return {false, "run failed: " + r.message};
  }

  auto mean_rate = [](const RunLog& log) {
    double sum = 0.0;
    for (const SeedLog& sl : log.seeds) sum += sl.evals.back().success_rate;
    return sum / static_cast<double>(log.seeds.size());
  };
  const double lp_rate = mean_rate(lp_log);
  const double uni_rate = mean_rate(uni_log);
  const double lrpc_rate = mean_rate(lrpc_log);

  // rewards on the curriculum's own final success set, matched per seed
  double lp_reward = 0.0, uni_reward = 0.0, lrpc_reward = 0.0;
  for (std::size_t s = 0; s < lp_log.seeds.size(); ++s) {
    const auto& lp_set = lp_log.seeds[s].evals.back().mastered;
    lp_reward +=
        metrics::mean_over_subset(lp_log.seeds[s].evals.back().mean_reward, lp_set) / 3.0;
    uni_reward +=
        metrics::mean_over_subset(uni_log.seeds[s].evals.back().mean_reward, lp_set) / 3.0;
    lrpc_reward +=
        metrics::mean_over_subset(lrpc_log.seeds[s].evals.back().mean_reward, lp_set) / 3.0;
  }

  const bool rates_ok = lp_rate >= uni_rate && lp_rate >= lrpc_rate;
  const bool rewards_ok = lp_reward >= uni_reward && lp_reward >= lrpc_reward;
  return {rates_ok && rewards_ok,
          "success rate lp " + fmt3(lp_rate) + " / uniform " + fmt3(uni_rate) + " / lrpc " +
              fmt3(lrpc_rate) + "; reward on lp set " + fmt3(lp_reward) + " / " +
              fmt3(uni_reward) + " / " + fmt3(lrpc_reward)};
}

// --------------------------------------------------------------------------
// 9. Determinism of the runner: identical bytes across repeats and worker
//    counts.
// --------------------------------------------------------------------------
std::pair<bool, std::string> criterion_determinism() {
  const fs::path base = scratch_dir("determinism");
  RunConfig cfg;
  cfg.env_preset = "pm_flat8";
  cfg.env_horizon = 60;
  cfg.scheduler.kind = SchedulerKind::lp_acrl;
  cfg.scheduler.stage_len = 2;
  cfg.learner.hidden = 8;
  cfg.learner.minibatch = 64;
  cfg.iterations = 6;
  cfg.episodes_per_iteration = 8;
  cfg.seeds = {0, 1};
  cfg.eval_episodes_per_task = 2;

  cfg.output_dir = (base / "a").string();
  if (!run_experiment(cfg).ok()) return {false, "run a failed"};
  cfg.output_dir = (base / "b").string();
  if (!run_experiment(cfg).ok()) return {false, "run b failed"};
  cfg.output_dir = (base / "c").string();
  cfg.workers = 4;
  if (!run_experiment(cfg).ok()) return {false, "run c failed"};

  const std::vector<std::string> files = {
      "seed_0/distributions.csv", "seed_0/rewards.csv",     "seed_0/eval.csv",
      "seed_0/success_rate.csv",  "seed_0/policy.ckpt",     "seed_1/distributions.csv",
      "seed_1/rewards.csv",       "seed_1/eval.csv",        "seed_1/policy.ckpt",
      "plot/heatmap.csv",         "plot/reward_curves.csv", "plot/success_rate.csv"};
  for (const std::string& name : files) {
    const std::string a = slurp(base / "a" / name);
    if (a != slurp(base / "b" / name)) return {false, "repeat changed " + name};
    if (a != slurp(base / "c" / name)) return {false, "worker count changed " + name};
  }
  return {true, std::to_string(files.size()) + " log files byte-identical across repeats and workers 1->4"};
}

// --------------------------------------------------------------------------
// 10. Task-space arithmetic on the documented presets.
// --------------------------------------------------------------------------
std::pair<bool, std::string> criterion_spaces() {
  const TaskSpace flat8 = make_preset("pm_flat8").space;
  const TaskSpace big = make_preset("space600").space;
  bool ok = flat8.size() == 8 && big.size() == 600;

  for (std::int64_t i = 0; ok && i < big.size(); ++i)
    if (big.index_of(big.coords_of(i)) != i) ok = false;

  // a synthetic product space keeps the exhaustive check near the 10^4 scale
  const TaskSpace synth = TaskSpace::build(
      {Dimension::continuous("a", 0.0, 1.0, 6, false),
       Dimension::categorical("b", {"x", "y", "z", "w", "v", "u", "t"}),
       Dimension::continuous("c", -3.0, 9.0, 8, true),
       Dimension::categorical("d", {"p", "q", "r"})});
  ok = ok && synth.size() == 6 * 7 * 8 * 3;
  for (std::int64_t i = 0; ok && i < synth.size(); ++i)
    if (synth.index_of(synth.coords_of(i)) != i) ok = false;

  return {ok, "pm_flat8 size 8, space600 size 600, bijection exhaustive on " +
                  std::to_string(big.size() + synth.size()) + " cells"};
}

}  // namespace

int main() {
  std::printf("lpacrl acceptance suite\n");
  run_criterion(1, "penalized tracking error exactness", criterion_epte);
  run_criterion(2, "softmax distribution suite", criterion_softmax);
  run_criterion(3, "command-range schedule", criterion_sc);
  run_criterion(4, "advantage estimator oracle", criterion_gae);
  run_criterion(5, "surrogate gradient check", criterion_gradient);
  run_criterion(6, "chain curriculum vs uniform", criterion_chain);
  run_criterion(7, "oscillation discrimination", criterion_oscillation);
  run_criterion(8, "scaled success-rate comparison", criterion_scaled);
  run_criterion(9, "runner determinism", criterion_determinism);
  run_criterion(10, "task-space arithmetic", criterion_spaces);

  if (g_failures == 0) {
    std::printf("all criteria passed\n");
    return 0;
  }
  std::printf("%d criteria FAILED\n", g_failures);
  return 1;
}
