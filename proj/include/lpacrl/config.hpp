#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "lpacrl/curriculum.hpp"
#include "lpacrl/learner.hpp"

namespace lpacrl {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Full experiment description. The on-disk form is flat `section.key = value`
/// text; unknown keys are hard errors.
struct RunConfig {
  std::string env_preset = "chain8";
  int env_horizon = 0;  // 0 = preset default

  SchedulerConfig scheduler;
  LearnerConfig learner;

  int iterations = 200;
  int episodes_per_iteration = 64;
  std::vector<std::uint64_t> seeds = {0};
  int eval_every = 0;  // 0 = final evaluation only
  int eval_episodes_per_task = 5;
  std::string output_dir = "out";
  bool emit_plots = false;
  int workers = 1;
  std::string label;  // defaults to the scheduler kind

  std::string effective_label() const {
    return label.empty() ? to_string(scheduler.kind) : label;
  }
  void validate() const;  // throws ConfigError
};

/// Parses config text; throws ConfigError with a line diagnostic.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Canonical rendering: every key, documented order, parse(render(c)) == c.
std::string render_config(const RunConfig& cfg);

/// Applies a single `key = value` override.
void set_config_key(RunConfig& cfg, const std::string& key, const std::string& value);
std::string get_config_key(const RunConfig& cfg, const std::string& key);

/// One line per key: "key  default  description" (for --help and docs).
std::vector<std::string> config_key_docs();

bool operator==(const RunConfig& a, const RunConfig& b);

}  // namespace lpacrl
