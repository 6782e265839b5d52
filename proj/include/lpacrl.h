/* C interface to the LP-ACRL curriculum laboratory.
 *
 * All entry points return a status code (lpacrl_status); 0 means success.
 * On failure, lpacrl_last_error() returns a thread-local message describing
 * the most recent error. Objects are opaque handles released with the
 * matching *_free function. Handles are not thread-safe unless noted.
 */
#ifndef LPACRL_H
#define LPACRL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define LPACRL_API __declspec(dllexport)
#else
#define LPACRL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lpacrl_status {
  LPACRL_OK = 0,
  LPACRL_ERR_INTERNAL = 1,
  LPACRL_ERR_CONFIG = 2,   /* config parse/validation error */
  LPACRL_ERR_NAN = 3,      /* training diverged; partial logs were flushed */
  LPACRL_ERR_IO = 4,       /* unreadable input or unwritable output */
  LPACRL_ERR_ARG = 5       /* invalid argument or out-of-range index */
} lpacrl_status;

typedef struct lpacrl_config lpacrl_config;
typedef struct lpacrl_space lpacrl_space;
typedef struct lpacrl_scheduler lpacrl_scheduler;
typedef struct lpacrl_rng lpacrl_rng;

LPACRL_API const char* lpacrl_version(void);
LPACRL_API const char* lpacrl_status_name(int status);
/* Thread-local message for the last failed call on this thread. */
LPACRL_API const char* lpacrl_last_error(void);
LPACRL_API void lpacrl_string_free(char* s);

/* ---- experiment configuration ------------------------------------------ */

LPACRL_API int lpacrl_config_create(lpacrl_config** out);
LPACRL_API int lpacrl_config_load(const char* path, lpacrl_config** out);
LPACRL_API int lpacrl_config_parse(const char* text, lpacrl_config** out);
LPACRL_API int lpacrl_config_set(lpacrl_config* cfg, const char* key, const char* value);
/* Returns a malloc'd value string; free with lpacrl_string_free. */
LPACRL_API int lpacrl_config_get(const lpacrl_config* cfg, const char* key, char** out);
/* Canonical text form (parse(render(c)) == c); free with lpacrl_string_free. */
LPACRL_API int lpacrl_config_render(const lpacrl_config* cfg, char** out);
/* One line per key: name, default, description. Free with lpacrl_string_free. */
LPACRL_API int lpacrl_config_docs(char** out);
LPACRL_API void lpacrl_config_free(lpacrl_config* cfg);

/* ---- task spaces --------------------------------------------------------- */

/* Presets: chain8, pm_flat8, pm_scaled, space600. */
LPACRL_API int lpacrl_space_open(const char* preset, lpacrl_space** out);
LPACRL_API int64_t lpacrl_space_size(const lpacrl_space* space);
LPACRL_API int32_t lpacrl_space_ndims(const lpacrl_space* space);
LPACRL_API int lpacrl_space_index_of(const lpacrl_space* space, const int32_t* coords,
                                     size_t ncoords, int64_t* out);
LPACRL_API int lpacrl_space_coords_of(const lpacrl_space* space, int64_t index, int32_t* coords,
                                      size_t ncoords);
LPACRL_API void lpacrl_space_free(lpacrl_space* space);

/* ---- deterministic rng --------------------------------------------------- */

LPACRL_API int lpacrl_rng_create(uint64_t seed, lpacrl_rng** out);
LPACRL_API void lpacrl_rng_free(lpacrl_rng* rng);

/* ---- scheduler ------------------------------------------------------------
 * Created from the scheduler.* keys of a config. The space is copied into
 * the handle. record/advance require external synchronization. */

LPACRL_API int lpacrl_scheduler_create(const lpacrl_space* space, const lpacrl_config* cfg,
                                       lpacrl_scheduler** out);
LPACRL_API int lpacrl_scheduler_record(lpacrl_scheduler* sched, int64_t task_index,
                                       double episodic_reward, int32_t length, int32_t fall_step,
                                       double tracking_error, double value_error_score);
/* Advances one curriculum stage; optionally copies the new distribution. */
LPACRL_API int lpacrl_scheduler_advance(lpacrl_scheduler* sched, double* probs, size_t cap);
LPACRL_API int lpacrl_scheduler_probs(const lpacrl_scheduler* sched, double* probs, size_t cap);
LPACRL_API int lpacrl_scheduler_sample(const lpacrl_scheduler* sched, lpacrl_rng* rng,
                                       int64_t* out);
LPACRL_API int lpacrl_scheduler_stage(const lpacrl_scheduler* sched);
LPACRL_API void lpacrl_scheduler_free(lpacrl_scheduler* sched);

/* ---- metric and schedule primitives -------------------------------------- */

/* Temperature softmax with max-subtraction; out has n entries. */
LPACRL_API int lpacrl_softmax(const double* scores, size_t n, double beta, double* out);
/* Penalized episodic tracking error: (eps*k_f + (K - k_f)) / K. */
LPACRL_API int lpacrl_epte_sp(double epsilon, int32_t fall_step, int32_t length, double* out);
/* Clipped percentage tracking error over the first fall_step samples. */
LPACRL_API int lpacrl_tracking_error(const double* commanded, const double* actual, size_t n,
                                     int32_t fall_step, double* out);
/* Sigmoid command-range limit used by the hand-crafted schedule. */
LPACRL_API double lpacrl_sc_velocity_max(double base, double span, double rate, double midpoint,
                                         double k);

/* ---- experiment drivers --------------------------------------------------
 * These mirror the CLI subcommands; outputs land in run.output_dir
 * (resolved against $LPACRL_OUT_ROOT when relative). */

LPACRL_API int lpacrl_run(const lpacrl_config* cfg);
LPACRL_API int lpacrl_compare(const lpacrl_config* const* cfgs, size_t n, const char* out_dir);
LPACRL_API int lpacrl_eval_checkpoint(const char* checkpoint_path, const lpacrl_config* cfg);
LPACRL_API int lpacrl_plot(const char* logdir);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* LPACRL_H */
