#include "lpacrl/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "lpacrl/environments.hpp"
#include "lpacrl/learner.hpp"

namespace fs = std::filesystem;

namespace lpacrl {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
  // create_directories succeeds silently on an existing path; probe writability.
  const fs::path probe = dir / ".write_probe";
  {
    std::ofstream f(probe, std::ios::binary);
    if (!f) throw IoError("output directory '" + dir.string() + "' is not writable");
  }
  fs::remove(probe, ec);
}

StageSnapshot snapshot_of(const Scheduler& sched) {
  StageSnapshot snap;
  snap.stage = sched.stage();
  snap.probs = sched.distribution().probs;
  const std::int64_t n = sched.size();
  snap.reward_est.resize(static_cast<std::size_t>(n));
  snap.lp.resize(static_cast<std::size_t>(n));
  snap.score.resize(static_cast<std::size_t>(n));
  for (std::int64_t t = 0; t < n; ++t) {
    const TaskStats& s = sched.stats(t);
    snap.reward_est[static_cast<std::size_t>(t)] = s.reward_prev_stage;
    snap.lp[static_cast<std::size_t>(t)] = s.lp;
    snap.score[static_cast<std::size_t>(t)] = sched.last_score(t);
  }
  return snap;
}

struct SeedRun {
  Policy policy;
  ValueFn value;
  std::shared_ptr<ChainBanditState> bandit;
};

/// Trains one seed. Fills `log` incrementally so partial state survives a
/// NaN abort.
SeedRun run_seed(const RunConfig& cfg, const Preset& preset, std::uint64_t seed, SeedLog& log,
                 int workers) {
  log.seed = seed;
  log.partial = true;

  Scheduler scheduler(preset.space, cfg.scheduler);
  Rng seed_rng(seed);

  SeedRun run;
  run.bandit = preset.make_bandit_state();
  const EnvFactory factory = [&preset, &run] { return preset.make_env(run.bandit); };

  int obs_dim = 0, action_dim = 0;
  bool discrete = false;
  {
    const auto probe = factory();
    obs_dim = probe->observation_dim();
    action_dim = probe->action_dim();
    discrete = probe->discrete_actions();
  }
  {
    Rng init_rng = seed_rng.derive(0x696e6974ULL);
    run.policy = Policy(obs_dim, action_dim, discrete, cfg.learner.hidden,
                        cfg.learner.log_std_init, init_rng);
    Rng vinit_rng = seed_rng.derive(0x76696e69ULL);
    run.value = ValueFn(obs_dim, cfg.learner.hidden, vinit_rng);
  }

  AdamState opt_policy, opt_value;
  log.stages.push_back(snapshot_of(scheduler));

  auto evaluate = [&](int iteration) {
    const Rng eval_rng = seed_rng.derive(0x6576616cULL, static_cast<std::uint64_t>(iteration));
    log.eval_iterations.push_back(iteration);
    log.evals.push_back(metrics::evaluate_policy(run.policy, preset, run.bandit,
                                                 cfg.eval_episodes_per_task, eval_rng));
  };

  for (int k = 1; k <= cfg.iterations; ++k) {
    const Rng iter_rng = seed_rng.derive(0x69746572ULL, static_cast<std::uint64_t>(k));
    RolloutBatch batch =
        collect_rollouts(run.policy, scheduler.distribution(), preset.space, factory,
                         preset.parallel_safe(), cfg.episodes_per_iteration, iter_rng, workers);
    const std::vector<EpisodeRecord> records =
        finalize_batch(batch, run.value, cfg.learner.gamma, cfg.learner.lambda);
    for (const EpisodeRecord& rec : records) scheduler.record_episode(rec);

    std::vector<double> ema(static_cast<std::size_t>(scheduler.size()));
    for (std::int64_t t = 0; t < scheduler.size(); ++t)
      ema[static_cast<std::size_t>(t)] = scheduler.stats(t).reward_current;
    log.reward_ema.push_back(std::move(ema));

    Rng update_rng = iter_rng.derive(0x75706474ULL);
    update_policy(run.policy, run.value, batch, cfg.learner, opt_policy, opt_value, update_rng);

    if (k % cfg.scheduler.stage_len == 0) {
      scheduler.advance_stage();
      log.stages.push_back(snapshot_of(scheduler));
    }
    if (cfg.eval_every > 0 && k % cfg.eval_every == 0 && k != cfg.iterations) evaluate(k);
  }
  evaluate(cfg.iterations);

  if (run.bandit) log.final_competence = run.bandit->competences();
  log.partial = false;
  return run;
}

void write_seed_csvs(const fs::path& dir, const SeedLog& log) {
  ensure_dir(dir);
  {
    auto out = open_out(dir / "distributions.csv");
    out << "stage,task_index,prob,reward_est,lp,score\n";
    for (const StageSnapshot& snap : log.stages)
      for (std::size_t t = 0; t < snap.probs.size(); ++t)
        out << snap.stage << ',' << t << ',' << fmt(snap.probs[t]) << ','
            << fmt(snap.reward_est[t]) << ',' << fmt(snap.lp[t]) << ',' << fmt(snap.score[t])
            << '\n';
  }
  {
    auto out = open_out(dir / "rewards.csv");
    out << "iteration,task_index,reward_est\n";
    for (std::size_t k = 0; k < log.reward_ema.size(); ++k)
      for (std::size_t t = 0; t < log.reward_ema[k].size(); ++t)
        out << (k + 1) << ',' << t << ',' << fmt(log.reward_ema[k][t]) << '\n';
  }
  if (!log.evals.empty()) {
    const metrics::SuccessReport& final_eval = log.evals.back();
    {
      auto out = open_out(dir / "eval.csv");
      out << "task_index,success,mean_reward,mean_epte_sp,n_episodes\n";
      for (std::size_t t = 0; t < final_eval.success.size(); ++t)
        out << t << ',' << int(final_eval.success[t]) << ',' << fmt(final_eval.mean_reward[t])
            << ',' << fmt(final_eval.mean_epte_sp[t]) << ',' << final_eval.n_episodes_per_task
            << '\n';
    }
    {
      // Rewards on the final success set follow the end-of-run protocol: the
      // set is fixed by the last evaluation and applied retroactively.
      auto out = open_out(dir / "success_rate.csv");
      out << "iteration,success_rate,mean_reward_on_final_set\n";
      for (std::size_t i = 0; i < log.evals.size(); ++i)
        out << log.eval_iterations[i] << ',' << fmt(log.evals[i].success_rate) << ','
            << fmt(metrics::mean_over_subset(log.evals[i].mean_reward, final_eval.mastered))
            << '\n';
    }
  }
  if (!log.final_competence.empty()) {
    auto out = open_out(dir / "competence.csv");
    out << "task_index,competence\n";
    for (std::size_t t = 0; t < log.final_competence.size(); ++t)
      out << t << ',' << fmt(log.final_competence[t]) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Plot data
// ---------------------------------------------------------------------------

void write_heatmap_csv(const fs::path& path, const SeedLog& log) {
  auto out = open_out(path);
  for (const StageSnapshot& snap : log.stages) {
    for (std::size_t t = 0; t < snap.probs.size(); ++t)
      out << (t ? "," : "") << fmt(snap.probs[t]);
    out << '\n';
  }
}

std::string svg_header(int w, int h) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w) +
         "\" height=\"" + std::to_string(h) + "\" viewBox=\"0 0 " + std::to_string(w) + " " +
         std::to_string(h) + "\">\n";
}

void write_heatmap_svg(const fs::path& path, const SeedLog& log) {
  if (log.stages.empty()) return;
  const int rows = static_cast<int>(log.stages.size());
  const int cols = static_cast<int>(log.stages.front().probs.size());
  const int cell = std::max(2, 600 / std::max(rows, cols));
  const int w = cols * cell + 40, h = rows * cell + 40;
  double pmax = 0.0;
  for (const auto& s : log.stages)
    for (double p : s.probs) pmax = std::max(pmax, p);
  if (pmax <= 0.0) pmax = 1.0;

  auto out = open_out(path);
  out << svg_header(w, h);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const double v = log.stages[static_cast<std::size_t>(r)].probs[static_cast<std::size_t>(c)] / pmax;
      const int red = static_cast<int>(255 * (1.0 - v));
      const int green = static_cast<int>(255 * (1.0 - 0.6 * v));
      out << "<rect x=\"" << (20 + c * cell) << "\" y=\"" << (20 + r * cell) << "\" width=\""
          << cell << "\" height=\"" << cell << "\" fill=\"rgb(" << red << ',' << green
          << ",255)\"/>\n";
    }
  }
  out << "<text x=\"4\" y=\"14\" font-size=\"10\">stages " << rows << " x tasks " << cols
      << " (row-normalized sampling probability)</text>\n";
  out << "</svg>\n";
}

void write_curves_svg(const fs::path& path, const std::vector<std::vector<double>>& series,
                      const std::string& title) {
  const int w = 640, h = 360, pad = 30;
  double lo = 0.0, hi = 1e-12;
  std::size_t len = 0;
  for (const auto& s : series) {
    len = std::max(len, s.size());
    for (double v : s) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (len < 2) len = 2;
  auto out = open_out(path);
  out << svg_header(w, h);
  out << "<rect x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const int hue = static_cast<int>((i * 360) / std::max<std::size_t>(series.size(), 1));
    out << "<polyline fill=\"none\" stroke=\"hsl(" << hue << ",70%,45%)\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < series[i].size(); ++k) {
      const double x = pad + (w - 2.0 * pad) * static_cast<double>(k) / static_cast<double>(len - 1);
      const double y = h - pad - (h - 2.0 * pad) * (series[i][k] - lo) / (hi - lo);
      out << fmt(x) << ',' << fmt(y) << ' ';
    }
    out << "\"/>\n";
  }
  out << "<text x=\"8\" y=\"16\" font-size=\"11\">" << title << "</text>\n";
  out << "</svg>\n";
}

void emit_plot_files(const fs::path& dir, const RunLog& log, bool svg) {
  ensure_dir(dir);
  for (std::size_t s = 0; s < log.seeds.size(); ++s) {
    const fs::path base =
        s == 0 ? dir / "heatmap.csv"
               : dir / ("heatmap_seed" + std::to_string(log.seeds[s].seed) + ".csv");
    write_heatmap_csv(base, log.seeds[s]);
    if (svg) {
      const fs::path svg_path =
          s == 0 ? dir / "heatmap.svg"
                 : dir / ("heatmap_seed" + std::to_string(log.seeds[s].seed) + ".svg");
      write_heatmap_svg(svg_path, log.seeds[s]);
    }
  }

  // Per-task reward curves aggregated across seeds.
  const std::size_t iters = log.seeds.empty() ? 0 : log.seeds.front().reward_ema.size();
  const std::size_t ntasks =
      iters == 0 ? 0 : log.seeds.front().reward_ema.front().size();
  std::vector<std::vector<double>> task_means(ntasks);
  {
    auto out = open_out(dir / "reward_curves.csv");
    out << "iteration,task_index,mean,min,max\n";
    for (std::size_t t = 0; t < ntasks; ++t) {
      std::vector<std::vector<double>> per_seed;
      for (const SeedLog& sl : log.seeds) {
        std::vector<double> series(iters);
        for (std::size_t k = 0; k < iters; ++k) series[k] = sl.reward_ema[k][t];
        per_seed.push_back(std::move(series));
      }
      const metrics::SeriesAggregate agg = metrics::aggregate_seeds(per_seed);
      task_means[t] = agg.mean;
      for (std::size_t k = 0; k < iters; ++k)
        out << (k + 1) << ',' << t << ',' << fmt(agg.mean[k]) << ',' << fmt(agg.min[k]) << ','
            << fmt(agg.max[k]) << '\n';
    }
  }
  if (svg) write_curves_svg(dir / "reward_curves.svg", task_means, "per-task episodic reward (seed mean)");

  // Success-rate curve aggregated across seeds.
  if (!log.seeds.empty() && !log.seeds.front().evals.empty()) {
    std::vector<std::vector<double>> per_seed;
    for (const SeedLog& sl : log.seeds) {
      std::vector<double> series;
      for (const auto& report : sl.evals) series.push_back(report.success_rate);
      per_seed.push_back(std::move(series));
    }
    const metrics::SeriesAggregate agg = metrics::aggregate_seeds(per_seed);
    auto out = open_out(dir / "success_rate.csv");
    out << "iteration,mean,min,max\n";
    for (std::size_t i = 0; i < agg.mean.size(); ++i)
      out << log.seeds.front().eval_iterations[i] << ',' << fmt(agg.mean[i]) << ','
          << fmt(agg.min[i]) << ',' << fmt(agg.max[i]) << '\n';
    if (svg)
      write_curves_svg(dir / "success_rate.svg", {agg.mean, agg.min, agg.max},
                       "success rate (mean/min/max over seeds)");
  }
}

/// Carries an already-classified status through stack unwinding.
struct StatusError : std::runtime_error {
  StatusError(RunStatus s, const std::string& msg) : std::runtime_error(msg), status(s) {}
  RunStatus status;
};

RunResult guard(const std::function<void()>& body) {
  try {
    body();
    return {RunStatus::ok, ""};
  } catch (const StatusError& e) {
    return {e.status, e.what()};
  } catch (const ConfigError& e) {
    return {RunStatus::config_error, e.what()};
  } catch (const NanDivergence& e) {
    return {RunStatus::nan_divergence, e.what()};
  } catch (const IoError& e) {
    return {RunStatus::io_error, e.what()};
  } catch (const std::exception& e) {
    return {RunStatus::internal_error, e.what()};
  }
}

}  // namespace

std::string resolve_output_dir(const std::string& dir) {
  if (!dir.empty() && fs::path(dir).is_absolute()) return dir;
  const char* root = std::getenv("LPACRL_OUT_ROOT");
  if (root && *root) return (fs::path(root) / dir).string();
  return dir;
}

RunResult run_experiment(const RunConfig& cfg, RunLog* log_out) {
  RunLog local;
  RunLog& log = log_out ? *log_out : local;
  log = RunLog{};
  log.config = cfg;

  RunResult result = guard([&] {
    cfg.validate();

    Preset preset;
    try {
      preset = make_preset(cfg.env_preset, cfg.env_horizon);
      if (!preset.runnable())
        throw ConfigError("config: preset '" + cfg.env_preset + "' is task-space only");
      Scheduler probe(preset.space, cfg.scheduler);  // fail fast on bad combos
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }

    const fs::path out_dir = resolve_output_dir(cfg.output_dir);
    ensure_dir(out_dir);
    log.seeds.assign(cfg.seeds.size(), SeedLog{});

    // Seeds are independent jobs; worker threads left over are given to each
    // seed's rollout collection. Results never depend on either pool size.
    const int seed_jobs = std::min<int>(cfg.workers, static_cast<int>(cfg.seeds.size()));
    const int inner_workers = std::max(1, cfg.workers / std::max(1, seed_jobs));

    std::vector<SeedRun> runs(cfg.seeds.size());
    std::exception_ptr failure;
    std::mutex failure_mu;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= cfg.seeds.size()) return;
        try {
          runs[i] = run_seed(cfg, preset, cfg.seeds[i], log.seeds[i], inner_workers);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      }
    };
    if (seed_jobs <= 1) {
      worker();
    } else {
      std::vector<std::thread> threads;
      for (int j = 0; j < seed_jobs; ++j) threads.emplace_back(worker);
      for (auto& t : threads) t.join();
    }

    // Flush whatever was logged, then surface any failure.
    {
      auto out = open_out(out_dir / "config.txt");
      out << render_config(cfg);
    }
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i)
      write_seed_csvs(out_dir / ("seed_" + std::to_string(cfg.seeds[i])), log.seeds[i]);
    if (failure) std::rethrow_exception(failure);

    // Checkpoints and plot data only exist for complete runs.
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
      const fs::path seed_dir = out_dir / ("seed_" + std::to_string(cfg.seeds[i]));
      save_checkpoint((seed_dir / "policy.ckpt").string(), runs[i].policy, runs[i].value);
    }
    emit_plot_files(out_dir / "plot", log, cfg.emit_plots);
  });
  return result;
}

RunResult compare_experiments(const std::vector<RunConfig>& cfgs, const std::string& out_dir,
                              std::vector<RunLog>* logs_out) {
  return guard([&] {
    if (cfgs.empty()) throw ConfigError("compare: no configs");
    for (const RunConfig& c : cfgs) c.validate();
    for (std::size_t i = 1; i < cfgs.size(); ++i) {
      if (cfgs[i].env_preset != cfgs.front().env_preset)
        throw ConfigError("compare: env.preset mismatch across configs");
      if (cfgs[i].env_horizon != cfgs.front().env_horizon)
        throw ConfigError("compare: env.horizon mismatch across configs");
      if (cfgs[i].iterations != cfgs.front().iterations ||
          cfgs[i].episodes_per_iteration != cfgs.front().episodes_per_iteration ||
          cfgs[i].seeds != cfgs.front().seeds)
        throw ConfigError("compare: training budget mismatch across configs");
    }
    {
      std::vector<std::string> labels;
      for (const RunConfig& c : cfgs) labels.push_back(c.effective_label());
      for (std::size_t i = 0; i < labels.size(); ++i)
        for (std::size_t j = i + 1; j < labels.size(); ++j)
          if (labels[i] == labels[j])
            throw ConfigError("compare: duplicate label '" + labels[i] + "' (set run.label)");
    }

    const fs::path base = resolve_output_dir(out_dir);
    ensure_dir(base);

    std::vector<RunLog> local;
    std::vector<RunLog>& logs = logs_out ? *logs_out : local;
    logs.assign(cfgs.size(), RunLog{});

    for (std::size_t i = 0; i < cfgs.size(); ++i) {
      RunConfig cfg = cfgs[i];
      cfg.output_dir = (base / cfg.effective_label()).string();
      const RunResult r = run_experiment(cfg, &logs[i]);
      if (!r.ok())
        throw StatusError(r.status,
                          "compare: run '" + cfg.effective_label() + "' failed: " + r.message);
    }

    {
      auto out = open_out(base / "compare_epte.csv");
      out << "label,task_index,mean,min,max\n";
      for (std::size_t i = 0; i < cfgs.size(); ++i) {
        const std::size_t ntasks = logs[i].seeds.front().evals.back().mean_epte_sp.size();
        std::vector<std::vector<double>> per_seed;
        for (const SeedLog& sl : logs[i].seeds) per_seed.push_back(sl.evals.back().mean_epte_sp);
        const metrics::SeriesAggregate agg = metrics::aggregate_seeds(per_seed);
        for (std::size_t t = 0; t < ntasks; ++t)
          out << cfgs[i].effective_label() << ',' << t << ',' << fmt(agg.mean[t]) << ','
              << fmt(agg.min[t]) << ',' << fmt(agg.max[t]) << '\n';
      }
    }
    {
      auto out = open_out(base / "compare_success_rate.csv");
      out << "iteration,label,mean,min,max\n";
      for (std::size_t i = 0; i < cfgs.size(); ++i) {
        std::vector<std::vector<double>> per_seed;
        for (const SeedLog& sl : logs[i].seeds) {
          std::vector<double> series;
          for (const auto& report : sl.evals) series.push_back(report.success_rate);
          per_seed.push_back(std::move(series));
        }
        const metrics::SeriesAggregate agg = metrics::aggregate_seeds(per_seed);
        for (std::size_t k = 0; k < agg.mean.size(); ++k)
          out << logs[i].seeds.front().eval_iterations[k] << ',' << cfgs[i].effective_label()
              << ',' << fmt(agg.mean[k]) << ',' << fmt(agg.min[k]) << ',' << fmt(agg.max[k])
              << '\n';
      }
    }
    {
      auto out = open_out(base / "compare_final_eval.csv");
      out << "label,seed,task_index,success,mean_reward,mean_epte_sp\n";
      for (std::size_t i = 0; i < cfgs.size(); ++i)
        for (const SeedLog& sl : logs[i].seeds) {
          const metrics::SuccessReport& report = sl.evals.back();
          for (std::size_t t = 0; t < report.success.size(); ++t)
            out << cfgs[i].effective_label() << ',' << sl.seed << ',' << t << ','
                << int(report.success[t]) << ',' << fmt(report.mean_reward[t]) << ','
                << fmt(report.mean_epte_sp[t]) << '\n';
        }
    }
  });
}

RunResult evaluate_checkpoint_cmd(const std::string& checkpoint_path, const RunConfig& cfg) {
  return guard([&] {
    cfg.validate();
    Preset preset;
    try {
      preset = make_preset(cfg.env_preset, cfg.env_horizon);
      if (!preset.runnable())
        throw ConfigError("config: preset '" + cfg.env_preset + "' is task-space only");
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }

    Policy policy;
    ValueFn value;
    try {
      load_checkpoint(checkpoint_path, policy, value);
    } catch (const std::exception& e) {
      throw IoError(std::string("eval: ") + e.what());
    }

    const fs::path out_dir = resolve_output_dir(cfg.output_dir);
    ensure_dir(out_dir);
    const Rng rng(cfg.seeds.front());
    const metrics::SuccessReport report = metrics::evaluate_policy(
        policy, preset, nullptr, cfg.eval_episodes_per_task, rng);
    auto out = open_out(out_dir / "eval.csv");
    out << "task_index,success,mean_reward,mean_epte_sp,n_episodes\n";
    for (std::size_t t = 0; t < report.success.size(); ++t)
      out << t << ',' << int(report.success[t]) << ',' << fmt(report.mean_reward[t]) << ','
          << fmt(report.mean_epte_sp[t]) << ',' << report.n_episodes_per_task << '\n';
  });
}

RunResult plot_logdir(const std::string& logdir) {
  return guard([&] {
    const fs::path dir = logdir;
    if (!fs::exists(dir / "config.txt"))
      throw IoError("plot: '" + logdir + "' has no config.txt (not a run directory)");
    RunConfig cfg;
    {
      std::ifstream in(dir / "config.txt", std::ios::binary);
      std::ostringstream ss;
      ss << in.rdbuf();
      cfg = parse_config(ss.str());
    }

    RunLog log;
    log.config = cfg;
    for (std::uint64_t seed : cfg.seeds) {
      const fs::path seed_dir = dir / ("seed_" + std::to_string(seed));
      SeedLog sl;
      sl.seed = seed;
      {
        std::ifstream in(seed_dir / "distributions.csv");
        if (!in) throw IoError("plot: missing " + (seed_dir / "distributions.csv").string());
        std::string line;
        std::getline(in, line);  // header
        int stage = 0;
        std::int64_t task = 0;
        double prob = 0, reward = 0, lp = 0, score = 0;
        char comma = 0;
        StageSnapshot snap;
        int current = -1;
        while (std::getline(in, line)) {
          std::istringstream row(line);
          row >> stage >> comma >> task >> comma >> prob >> comma >> reward >> comma >> lp >>
              comma >> score;
          if (stage != current) {
            if (current >= 0) sl.stages.push_back(snap);
            snap = StageSnapshot{};
            snap.stage = stage;
            current = stage;
          }
          snap.probs.push_back(prob);
          snap.reward_est.push_back(reward);
          snap.lp.push_back(lp);
          snap.score.push_back(score);
        }
        if (current >= 0) sl.stages.push_back(snap);
      }
      {
        std::ifstream in(seed_dir / "rewards.csv");
        if (!in) throw IoError("plot: missing " + (seed_dir / "rewards.csv").string());
        std::string line;
        std::getline(in, line);
        std::size_t iteration = 0;
        std::int64_t task = 0;
        double est = 0;
        char comma = 0;
        while (std::getline(in, line)) {
          std::istringstream row(line);
          row >> iteration >> comma >> task >> comma >> est;
          if (sl.reward_ema.size() < iteration) sl.reward_ema.resize(iteration);
          auto& row_vec = sl.reward_ema[iteration - 1];
          if (row_vec.size() <= static_cast<std::size_t>(task))
            row_vec.resize(static_cast<std::size_t>(task) + 1);
          row_vec[static_cast<std::size_t>(task)] = est;
        }
      }
      {
        std::ifstream in(seed_dir / "success_rate.csv");
        if (in) {
          std::string line;
          std::getline(in, line);
          int iteration = 0;
          double rate = 0, mean_reward = 0;
          char comma = 0;
          while (std::getline(in, line)) {
            std::istringstream row(line);
            row >> iteration >> comma >> rate >> comma >> mean_reward;
            sl.eval_iterations.push_back(iteration);
            metrics::SuccessReport report;
            report.success_rate = rate;
            sl.evals.push_back(std::move(report));
          }
        }
      }
      log.seeds.push_back(std::move(sl));
    }
    emit_plot_files(dir / "plot", log, /*svg=*/true);
  });
}

}  // namespace lpacrl
