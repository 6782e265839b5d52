#include "lpacrl/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace lpacrl {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// Shortest representation that parses back to the same double.
std::string fmt_double(double v) {
  char buf[48];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return d;
  } catch (...) {
    throw ConfigError("config: bad number for '" + key + "': '" + v + "'");
  }
}

int parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long d = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return static_cast<int>(d);
  } catch (...) {
    throw ConfigError("config: bad integer for '" + key + "': '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("config: bad boolean for '" + key + "': '" + v + "'");
}

std::vector<std::uint64_t> parse_seed_list(const std::string& key, const std::string& v) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      seeds.push_back(std::stoull(item));
    } catch (...) {
      throw ConfigError("config: bad seed list for '" + key + "': '" + v + "'");
    }
  }
  if (seeds.empty()) throw ConfigError("config: empty seed list for '" + key + "'");
  return seeds;
}

std::string render_seed_list(const std::vector<std::uint64_t>& seeds) {
  std::string out;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(seeds[i]);
  }
  return out;
}

struct Key {
  const char* name;
  const char* doc;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

const std::vector<Key>& key_table() {
  static const std::vector<Key> keys = {
      {"env.preset", "environment/task-space preset: chain8, pm_flat8, pm_scaled, space600",
       [](RunConfig& c, const std::string& v) { c.env_preset = v; },
       [](const RunConfig& c) { return c.env_preset; }},
      {"env.horizon", "episode length override for point-mass presets (0 = preset default)",
       [](RunConfig& c, const std::string& v) { c.env_horizon = parse_int("env.horizon", v); },
       [](const RunConfig& c) { return std::to_string(c.env_horizon); }},

      {"scheduler.kind", "task scheduler: lp_acrl, alp, plr, lrpc, sc, uniform",
       [](RunConfig& c, const std::string& v) {
         auto kind = scheduler_kind_from(v);
         if (!kind) throw ConfigError("config: unknown scheduler.kind '" + v + "'");
         c.scheduler.kind = *kind;
       },
       [](const RunConfig& c) { return std::string(to_string(c.scheduler.kind)); }},
      {"scheduler.beta", "softmax temperature (default 0.1)",
       [](RunConfig& c, const std::string& v) {
         c.scheduler.beta = parse_double("scheduler.beta", v);
       },
       [](const RunConfig& c) { return fmt_double(c.scheduler.beta); }},
      {"scheduler.floor_mix", "uniform mixing weight in [0,1) (default 0.05)",
       [](RunConfig& c, const std::string& v) {
         c.scheduler.floor_mix = parse_double("scheduler.floor_mix", v);
       },
       [](const RunConfig& c) { return fmt_double(c.scheduler.floor_mix); }},
      {"scheduler.stage_len", "policy updates per curriculum stage (default 10)",
       [](RunConfig& c, const std::string& v) {
         c.scheduler.stage_len = parse_int("scheduler.stage_len", v);
       },
       [](const RunConfig& c) { return std::to_string(c.scheduler.stage_len); }},
      {"scheduler.ema_alpha", "within-stage reward EMA coefficient in (0,1] (default 0.2)",
       [](RunConfig& c, const std::string& v) {
         c.scheduler.ema_alpha = parse_double("scheduler.ema_alpha", v);
       },
       [](const RunConfig& c) { return fmt_double(c.scheduler.ema_alpha); }},
      {"scheduler.stale_decay", "LP decay per stage without samples (default 0.9)",
       [](RunConfig& c, const std::string& v) {
         c.scheduler.stale_decay = parse_double("scheduler.stale_decay", v);
       },
       [](const RunConfig& c) { return fmt_double(c.scheduler.stale_decay); }},
      {"scheduler.normalize_lp", "divide scores by max |score| before the softmax (default true)",
       [](RunConfig& c, const std::string& v) {
         c.scheduler.normalize_lp = parse_bool("scheduler.normalize_lp", v);
       },
       [](const RunConfig& c) { return c.scheduler.normalize_lp ? "true" : "false"; }},
      {"scheduler.sc_base", "sc schedule: base command limit (default 1)",
       [](RunConfig& c, const std::string& v) {
         c.scheduler.sc.base = parse_double("scheduler.sc_base", v);
       },
       [](const RunConfig& c) { return fmt_double(c.scheduler.sc.base); }},
      {"scheduler.sc_span", "sc schedule: sigmoid span (default 3)",
       [](RunConfig& c, const std::string& v) {
         c.scheduler.sc.span = parse_double("scheduler.sc_span", v);
       },
       [](const RunConfig& c) { return fmt_double(c.scheduler.sc.span); }},
      {"scheduler.sc_rate", "sc schedule: sigmoid rate (default 0.002)",
       [](RunConfig& c, const std::string& v) {
         c.scheduler.sc.rate = parse_double("scheduler.sc_rate", v);
       },
       [](const RunConfig& c) { return fmt_double(c.scheduler.sc.rate); }},
      {"scheduler.sc_midpoint", "sc schedule: sigmoid midpoint iteration (default 1000)",
       [](RunConfig& c, const std::string& v) {
         c.scheduler.sc.midpoint = parse_double("scheduler.sc_midpoint", v);
       },
       [](const RunConfig& c) { return fmt_double(c.scheduler.sc.midpoint); }},

      {"learner.gamma", "discount factor (default 0.99)",
       [](RunConfig& c, const std::string& v) {
         c.learner.gamma = parse_double("learner.gamma", v);
       },
       [](const RunConfig& c) { return fmt_double(c.learner.gamma); }},
      {"learner.lambda", "GAE lambda (default 0.95)",
       [](RunConfig& c, const std::string& v) {
         c.learner.lambda = parse_double("learner.lambda", v);
       },
       [](const RunConfig& c) { return fmt_double(c.learner.lambda); }},
      {"learner.clip", "surrogate ratio clip (default 0.2)",
       [](RunConfig& c, const std::string& v) { c.learner.clip = parse_double("learner.clip", v); },
       [](const RunConfig& c) { return fmt_double(c.learner.clip); }},
      {"learner.lr", "Adam learning rate (default 3e-4)",
       [](RunConfig& c, const std::string& v) { c.learner.lr = parse_double("learner.lr", v); },
       [](const RunConfig& c) { return fmt_double(c.learner.lr); }},
      {"learner.epochs", "update epochs per iteration (default 4)",
       [](RunConfig& c, const std::string& v) { c.learner.epochs = parse_int("learner.epochs", v); },
       [](const RunConfig& c) { return std::to_string(c.learner.epochs); }},
      {"learner.minibatch", "minibatch size (default 256)",
       [](RunConfig& c, const std::string& v) {
         c.learner.minibatch = parse_int("learner.minibatch", v);
       },
       [](const RunConfig& c) { return std::to_string(c.learner.minibatch); }},
      {"learner.hidden", "hidden layer width, 0 = linear (default 64)",
       [](RunConfig& c, const std::string& v) { c.learner.hidden = parse_int("learner.hidden", v); },
       [](const RunConfig& c) { return std::to_string(c.learner.hidden); }},
      {"learner.value_coef", "value loss coefficient (default 0.5)",
       [](RunConfig& c, const std::string& v) {
         c.learner.value_coef = parse_double("learner.value_coef", v);
       },
       [](const RunConfig& c) { return fmt_double(c.learner.value_coef); }},
      {"learner.entropy_coef", "entropy bonus coefficient (default 0.01)",
       [](RunConfig& c, const std::string& v) {
         c.learner.entropy_coef = parse_double("learner.entropy_coef", v);
       },
       [](const RunConfig& c) { return fmt_double(c.learner.entropy_coef); }},
      {"learner.log_std_init", "initial Gaussian log-std (default -0.5)",
       [](RunConfig& c, const std::string& v) {
         c.learner.log_std_init = parse_double("learner.log_std_init", v);
       },
       [](const RunConfig& c) { return fmt_double(c.learner.log_std_init); }},

      {"run.iterations", "training iterations = policy updates (default 200)",
       [](RunConfig& c, const std::string& v) { c.iterations = parse_int("run.iterations", v); },
       [](const RunConfig& c) { return std::to_string(c.iterations); }},
      {"run.episodes_per_iteration", "episodes collected per iteration (default 64)",
       [](RunConfig& c, const std::string& v) {
         c.episodes_per_iteration = parse_int("run.episodes_per_iteration", v);
       },
       [](const RunConfig& c) { return std::to_string(c.episodes_per_iteration); }},
      {"run.seeds", "comma-separated master seeds (default 0)",
       [](RunConfig& c, const std::string& v) { c.seeds = parse_seed_list("run.seeds", v); },
       [](const RunConfig& c) { return render_seed_list(c.seeds); }},
      {"run.eval_every", "evaluate every N iterations, 0 = final only (default 0)",
       [](RunConfig& c, const std::string& v) { c.eval_every = parse_int("run.eval_every", v); },
       [](const RunConfig& c) { return std::to_string(c.eval_every); }},
      {"run.eval_episodes_per_task", "evaluation episodes per task (default 5)",
       [](RunConfig& c, const std::string& v) {
         c.eval_episodes_per_task = parse_int("run.eval_episodes_per_task", v);
       },
       [](const RunConfig& c) { return std::to_string(c.eval_episodes_per_task); }},
      {"run.output_dir", "output directory (default out; relative paths live under $LPACRL_OUT_ROOT when set)",
       [](RunConfig& c, const std::string& v) { c.output_dir = v; },
       [](const RunConfig& c) { return c.output_dir; }},
      {"run.emit_plots", "also write SVG renderings of the plot data (default false)",
       [](RunConfig& c, const std::string& v) { c.emit_plots = parse_bool("run.emit_plots", v); },
       [](const RunConfig& c) { return c.emit_plots ? "true" : "false"; }},
      {"run.workers", "rollout worker threads (default 1; never changes results)",
       [](RunConfig& c, const std::string& v) { c.workers = parse_int("run.workers", v); },
       [](const RunConfig& c) { return std::to_string(c.workers); }},
      {"run.label", "method label in comparison tables (default = scheduler.kind)",
       [](RunConfig& c, const std::string& v) { c.label = v; },
       [](const RunConfig& c) { return c.label; }},
  };
  return keys;
}

const Key* find_key(const std::string& name) {
  for (const Key& k : key_table())
    if (name == k.name) return &k;
  return nullptr;
}

}  // namespace

void RunConfig::validate() const {
  if (iterations < 1) throw ConfigError("config: run.iterations must be >= 1");
  if (episodes_per_iteration < 1)
    throw ConfigError("config: run.episodes_per_iteration must be >= 1");
  if (seeds.empty()) throw ConfigError("config: run.seeds must be nonempty");
  for (std::size_t i = 0; i < seeds.size(); ++i)
    for (std::size_t j = i + 1; j < seeds.size(); ++j)
      if (seeds[i] == seeds[j]) throw ConfigError("config: run.seeds must be distinct");
  if (eval_every < 0) throw ConfigError("config: run.eval_every must be >= 0");
  if (eval_episodes_per_task < 1)
    throw ConfigError("config: run.eval_episodes_per_task must be >= 1");
  if (workers < 1) throw ConfigError("config: run.workers must be >= 1");
  if (output_dir.empty()) throw ConfigError("config: run.output_dir must be set");
  try {
    scheduler.validate();
    learner.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

void set_config_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  const Key* k = find_key(key);
  if (!k) throw ConfigError("config: unknown key '" + key + "'");
  k->set(cfg, value);
}

std::string get_config_key(const RunConfig& cfg, const std::string& key) {
  const Key* k = find_key(key);
  if (!k) throw ConfigError("config: unknown key '" + key + "'");
  return k->get(cfg);
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      set_config_key(cfg, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(e.what()) + " (line " + std::to_string(line_no) + ")");
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string render_config(const RunConfig& cfg) {
  std::string out;
  for (const Key& k : key_table()) {
    out += k.name;
    out += " = ";
    out += k.get(cfg);
    out += '\n';
  }
  return out;
}

std::vector<std::string> config_key_docs() {
  std::vector<std::string> docs;
  RunConfig defaults;
  for (const Key& k : key_table())
    docs.push_back(std::string(k.name) + " (default: " + k.get(defaults) + ") - " + k.doc);
  return docs;
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  return render_config(a) == render_config(b);
}

}  // namespace lpacrl
