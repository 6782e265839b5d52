#include "lpacrl.h"

#include <cstring>
#include <new>
#include <string>

#include "lpacrl/config.hpp"
#include "lpacrl/curriculum.hpp"
#include "lpacrl/environments.hpp"
#include "lpacrl/learner.hpp"
#include "lpacrl/metrics.hpp"
#include "lpacrl/rng.hpp"
#include "lpacrl/runner.hpp"
#include "lpacrl/task_space.hpp"

using namespace lpacrl;

struct lpacrl_config {
  RunConfig cfg;
};
struct lpacrl_space {
  TaskSpace space;
};
struct lpacrl_scheduler {
  Scheduler sched;
};
struct lpacrl_rng {
  Rng rng;
};

namespace {

thread_local std::string g_last_error;

int set_error(int status, const char* what) {
  g_last_error = what ? what : "";
  return status;
}

int classify(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return LPACRL_ERR_CONFIG;
  if (dynamic_cast<const NanDivergence*>(&e)) return LPACRL_ERR_NAN;
  if (dynamic_cast<const IoError*>(&e)) return LPACRL_ERR_IO;
  if (dynamic_cast<const std::invalid_argument*>(&e)) return LPACRL_ERR_ARG;
  if (dynamic_cast<const std::out_of_range*>(&e)) return LPACRL_ERR_ARG;
  return LPACRL_ERR_INTERNAL;
}

template <typename Fn>
int wrap(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return LPACRL_OK;
  } catch (const std::exception& e) {
    return set_error(classify(e), e.what());
  } catch (...) {
    return set_error(LPACRL_ERR_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = new (std::nothrow) char[s.size() + 1];
  if (!out) return nullptr;
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

int from_result(const RunResult& r) {
  if (r.ok()) {
    g_last_error.clear();
    return LPACRL_OK;
  }
  return set_error(static_cast<int>(r.status), r.message.c_str());
}

}  // namespace

extern "C" {

const char* lpacrl_version(void) { return "0.1.0"; }

const char* lpacrl_status_name(int status) {
  switch (status) {
    case LPACRL_OK: return "ok";
    case LPACRL_ERR_INTERNAL: return "internal_error";
    case LPACRL_ERR_CONFIG: return "config_error";
    case LPACRL_ERR_NAN: return "nan_divergence";
    case LPACRL_ERR_IO: return "io_error";
    case LPACRL_ERR_ARG: return "invalid_argument";
  }
  return "unknown";
}

const char* lpacrl_last_error(void) { return g_last_error.c_str(); }

void lpacrl_string_free(char* s) { delete[] s; }

/* ---- config ---- */

int lpacrl_config_create(lpacrl_config** out) {
  if (!out) return set_error(LPACRL_ERR_ARG, "null output pointer");
  return wrap([&] { *out = new lpacrl_config{RunConfig{}}; });
}

int lpacrl_config_load(const char* path, lpacrl_config** out) {
  if (!path || !out) return set_error(LPACRL_ERR_ARG, "null argument");
  return wrap([&] { *out = new lpacrl_config{load_config(path)}; });
}

int lpacrl_config_parse(const char* text, lpacrl_config** out) {
  if (!text || !out) return set_error(LPACRL_ERR_ARG, "null argument");
  return wrap([&] { *out = new lpacrl_config{parse_config(text)}; });
}

int lpacrl_config_set(lpacrl_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return set_error(LPACRL_ERR_ARG, "null argument");
  return wrap([&] { set_config_key(cfg->cfg, key, value); });
}

int lpacrl_config_get(const lpacrl_config* cfg, const char* key, char** out) {
  if (!cfg || !key || !out) return set_error(LPACRL_ERR_ARG, "null argument");
  return wrap([&] {
    *out = dup_string(get_config_key(cfg->cfg, key));
    if (!*out) throw std::bad_alloc();
  });
}

int lpacrl_config_render(const lpacrl_config* cfg, char** out) {
  if (!cfg || !out) return set_error(LPACRL_ERR_ARG, "null argument");
  return wrap([&] {
    *out = dup_string(render_config(cfg->cfg));
    if (!*out) throw std::bad_alloc();
  });
}

int lpacrl_config_docs(char** out) {
  if (!out) return set_error(LPACRL_ERR_ARG, "null output pointer");
  return wrap([&] {
    std::string text;
    for (const std::string& line : config_key_docs()) {
      text += line;
      text += '\n';
    }
    *out = dup_string(text);
    if (!*out) throw std::bad_alloc();
  });
}

void lpacrl_config_free(lpacrl_config* cfg) { delete cfg; }

/* ---- task space ---- */

int lpacrl_space_open(const char* preset, lpacrl_space** out) {
  if (!preset || !out) return set_error(LPACRL_ERR_ARG, "null argument");
  return wrap([&] { *out = new lpacrl_space{make_preset(preset).space}; });
}

int64_t lpacrl_space_size(const lpacrl_space* space) {
  return space ? space->space.size() : 0;
}

int32_t lpacrl_space_ndims(const lpacrl_space* space) {
  return space ? static_cast<int32_t>(space->space.dimensions().size()) : 0;
}

int lpacrl_space_index_of(const lpacrl_space* space, const int32_t* coords, size_t ncoords,
                          int64_t* out) {
  if (!space || !coords || !out) return set_error(LPACRL_ERR_ARG, "null argument");
  return wrap([&] {
    std::vector<int> c(coords, coords + ncoords);
    *out = space->space.index_of(c);
  });
}

int lpacrl_space_coords_of(const lpacrl_space* space, int64_t index, int32_t* coords,
                           size_t ncoords) {
  if (!space || !coords) return set_error(LPACRL_ERR_ARG, "null argument");
  return wrap([&] {
    const std::vector<int> c = space->space.coords_of(index);
    if (ncoords < c.size()) throw std::invalid_argument("coords buffer too small");
    for (std::size_t i = 0; i < c.size(); ++i) coords[i] = c[i];
  });
}

void lpacrl_space_free(lpacrl_space* space) { delete space; }

/* ---- rng ---- */

int lpacrl_rng_create(uint64_t seed, lpacrl_rng** out) {
  if (!out) return set_error(LPACRL_ERR_ARG, "null output pointer");
  return wrap([&] { *out = new lpacrl_rng{Rng(seed)}; });
}

void lpacrl_rng_free(lpacrl_rng* rng) { delete rng; }

/* ---- scheduler ---- */

int lpacrl_scheduler_create(const lpacrl_space* space, const lpacrl_config* cfg,
                            lpacrl_scheduler** out) {
  if (!space || !cfg || !out) return set_error(LPACRL_ERR_ARG, "null argument");
  return wrap([&] { *out = new lpacrl_scheduler{Scheduler(space->space, cfg->cfg.scheduler)}; });
}

int lpacrl_scheduler_record(lpacrl_scheduler* sched, int64_t task_index, double episodic_reward,
                            int32_t length, int32_t fall_step, double tracking_error,
                            double value_error_score) {
  if (!sched) return set_error(LPACRL_ERR_ARG, "null scheduler");
  return wrap([&] {
    EpisodeRecord rec;
    rec.task_index = task_index;
    rec.episodic_reward = episodic_reward;
    rec.length = length;
    rec.fall_step = fall_step;
    rec.tracking_error = tracking_error;
    rec.value_error_score = value_error_score;
    sched->sched.record_episode(rec);
  });
}

int lpacrl_scheduler_advance(lpacrl_scheduler* sched, double* probs, size_t cap) {
  if (!sched) return set_error(LPACRL_ERR_ARG, "null scheduler");
  return wrap([&] {
    const SamplingDistribution d = sched->sched.advance_stage();
    if (probs) {
      if (cap < d.probs.size()) throw std::invalid_argument("probs buffer too small");
      for (std::size_t i = 0; i < d.probs.size(); ++i) probs[i] = d.probs[i];
    }
  });
}

int lpacrl_scheduler_probs(const lpacrl_scheduler* sched, double* probs, size_t cap) {
  if (!sched || !probs) return set_error(LPACRL_ERR_ARG, "null argument");
  return wrap([&] {
    const auto& d = sched->sched.distribution();
    if (cap < d.probs.size()) throw std::invalid_argument("probs buffer too small");
    for (std::size_t i = 0; i < d.probs.size(); ++i) probs[i] = d.probs[i];
  });
}

int lpacrl_scheduler_sample(const lpacrl_scheduler* sched, lpacrl_rng* rng, int64_t* out) {
  if (!sched || !rng || !out) return set_error(LPACRL_ERR_ARG, "null argument");
  return wrap([&] { *out = sched->sched.sample_task(rng->rng); });
}

int lpacrl_scheduler_stage(const lpacrl_scheduler* sched) {
  return sched ? sched->sched.stage() : -1;
}

void lpacrl_scheduler_free(lpacrl_scheduler* sched) { delete sched; }

/* ---- primitives ---- */

int lpacrl_softmax(const double* scores, size_t n, double beta, double* out) {
  if (!scores || !out) return set_error(LPACRL_ERR_ARG, "null argument");
  return wrap([&] {
    const std::vector<double> p = softmax(std::span<const double>(scores, n), beta);
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = p[i];
  });
}

int lpacrl_epte_sp(double epsilon, int32_t fall_step, int32_t length, double* out) {
  if (!out) return set_error(LPACRL_ERR_ARG, "null output pointer");
  return wrap([&] { *out = metrics::epte_sp(epsilon, fall_step, length); });
}

int lpacrl_tracking_error(const double* commanded, const double* actual, size_t n,
                          int32_t fall_step, double* out) {
  if (!commanded || !actual || !out) return set_error(LPACRL_ERR_ARG, "null argument");
  return wrap([&] {
    *out = metrics::tracking_error(std::span<const double>(commanded, n),
                                   std::span<const double>(actual, n), fall_step);
  });
}

double lpacrl_sc_velocity_max(double base, double span, double rate, double midpoint, double k) {
  ScParams p;
  p.base = base;
  p.span = span;
  p.rate = rate;
  p.midpoint = midpoint;
  return sc_velocity_max(p, k);
}

/* ---- experiment drivers ---- */

int lpacrl_run(const lpacrl_config* cfg) {
  if (!cfg) return set_error(LPACRL_ERR_ARG, "null config");
  return from_result(run_experiment(cfg->cfg));
}

int lpacrl_compare(const lpacrl_config* const* cfgs, size_t n, const char* out_dir) {
  if (!cfgs || !out_dir) return set_error(LPACRL_ERR_ARG, "null argument");
  std::vector<RunConfig> list;
  list.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    if (!cfgs[i]) return set_error(LPACRL_ERR_ARG, "null config in list");
    list.push_back(cfgs[i]->cfg);
  }
  return from_result(compare_experiments(list, out_dir));
}

int lpacrl_eval_checkpoint(const char* checkpoint_path, const lpacrl_config* cfg) {
  if (!checkpoint_path || !cfg) return set_error(LPACRL_ERR_ARG, "null argument");
  return from_result(evaluate_checkpoint_cmd(checkpoint_path, cfg->cfg));
}

int lpacrl_plot(const char* logdir) {
  if (!logdir) return set_error(LPACRL_ERR_ARG, "null logdir");
  return from_result(plot_logdir(logdir));
}

} /* extern "C" */
