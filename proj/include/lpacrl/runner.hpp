#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpacrl/config.hpp"
#include "lpacrl/curriculum.hpp"
#include "lpacrl/metrics.hpp"

namespace lpacrl {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Process-level outcome; values double as CLI exit codes.
enum class RunStatus : int {
  ok = 0,
  internal_error = 1,
  config_error = 2,
  nan_divergence = 3,
  io_error = 4,
};

struct RunResult {
  RunStatus status = RunStatus::ok;
  std::string message;
  bool ok() const { return status == RunStatus::ok; }
};

/// Scheduler state captured at one stage boundary.
struct StageSnapshot {
  int stage = 0;
  std::vector<double> probs;
  std::vector<double> reward_est;
  std::vector<double> lp;
  std::vector<double> score;
};

struct SeedLog {
  std::uint64_t seed = 0;
  std::vector<StageSnapshot> stages;                // stage 0 plus every boundary
  std::vector<std::vector<double>> reward_ema;      // [iteration][task]
  std::vector<int> eval_iterations;
  std::vector<metrics::SuccessReport> evals;
  std::vector<double> final_competence;             // chain bandit only
  bool partial = false;                             // true when the run aborted
};

struct RunLog {
  RunConfig config;
  std::vector<SeedLog> seeds;
};

/// Applies $LPACRL_OUT_ROOT to relative output directories.
std::string resolve_output_dir(const std::string& dir);

/// Multi-seed training run. Writes per-seed CSV logs and checkpoints under
/// the resolved output directory; identical config and seeds give
/// byte-identical files. On NaN divergence, partial logs are flushed and the
/// status is nan_divergence.
RunResult run_experiment(const RunConfig& cfg, RunLog* log_out = nullptr);

/// Runs each config (same preset, budget and seeds required) and emits
/// aligned comparison tables under out_dir.
RunResult compare_experiments(const std::vector<RunConfig>& cfgs, const std::string& out_dir,
                              std::vector<RunLog>* logs_out = nullptr);

/// Evaluates a saved checkpoint on the config's preset and writes eval.csv.
RunResult evaluate_checkpoint_cmd(const std::string& checkpoint_path, const RunConfig& cfg);

/// Regenerates figure-ready data (heatmap.csv, reward_curves.csv,
/// success_rate.csv and SVG renderings) from a run's log directory.
RunResult plot_logdir(const std::string& logdir);

}  // namespace lpacrl
