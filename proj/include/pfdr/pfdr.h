/*
 * pfdr: parameter-free dynamic regret for unconstrained linear bandits.
 *
 * C interface to the learners and the experiment harness. Objects are opaque
 * handles owned by the caller and released with the matching *_destroy.
 * Every fallible call returns a pfdr_status; on failure, pfdr_last_error()
 * describes the problem (thread-local, valid until the next failing call on
 * the same thread). Handles are single-threaded: distinct handles may be used
 * from distinct threads.
 */
#ifndef PFDR_H
#define PFDR_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(PFDR_BUILDING_LIBRARY)
#define PFDR_API __declspec(dllexport)
#else
#define PFDR_API __declspec(dllimport)
#endif
#else
#define PFDR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pfdr_status {
  PFDR_OK = 0,
  PFDR_ERR_INVALID_ARGUMENT = 1, /* null pointer, short buffer */
  PFDR_ERR_CONTRACT = 2,         /* protocol or precondition violated */
  PFDR_ERR_NUMERIC = 3,          /* NaN or overflow */
  PFDR_ERR_CONFIG = 4,           /* invalid configuration; message names the field */
  PFDR_ERR_IO = 5,
  PFDR_ERR_CHECK_FAILED = 6,     /* at least one invariant check failed */
  PFDR_ERR_INTERNAL = 99
} pfdr_status;

PFDR_API const char* pfdr_version(void);
PFDR_API const char* pfdr_last_error(void);
PFDR_API const char* pfdr_status_name(pfdr_status status);

/* ---- learners ---------------------------------------------------------- */

typedef struct pfdr_learner pfdr_learner;

typedef struct pfdr_learner_params {
  uint64_t horizon; /* T */
  uint32_t dim;     /* d, 1..64 */
  double epsilon;   /* initial wealth scale, default 1 */
  double lipschitz; /* G, default 1 */
  double eta_c;     /* direction step constant, default 0.5 */
  double v_min;     /* scale clamp floor; <= 0 selects epsilon / (G T) */
} pfdr_learner_params;

PFDR_API void pfdr_learner_params_default(pfdr_learner_params* params);

/* One composed base per candidate switch count, combined by uniform sampling. */
PFDR_API pfdr_status pfdr_learner_create_combined(const pfdr_learner_params* params, uint64_t seed,
                                                  pfdr_learner** out);
/* A single composed base tuned for s_hat switches. */
PFDR_API pfdr_status pfdr_learner_create_single(const pfdr_learner_params* params, uint64_t s_hat,
                                                uint64_t seed, pfdr_learner** out);
PFDR_API void pfdr_learner_destroy(pfdr_learner* learner);

PFDR_API size_t pfdr_learner_num_bases(const pfdr_learner* learner);
PFDR_API size_t pfdr_learner_dim(const pfdr_learner* learner);
/* Writes w_t into action[0..dim). */
PFDR_API pfdr_status pfdr_learner_predict(pfdr_learner* learner, double* action, size_t dim);
/* Bandit feedback <loss_t, w_t> for the last predicted action. */
PFDR_API pfdr_status pfdr_learner_update(pfdr_learner* learner, double observed);
/* Index of the base whose action was played last round. */
PFDR_API pfdr_status pfdr_learner_last_selected(const pfdr_learner* learner, size_t* index);

/* Candidate grid {0} U {min(2^n, 2T)}. Writes up to capacity values and the
 * full count; PFDR_ERR_INVALID_ARGUMENT when capacity is too small. */
PFDR_API pfdr_status pfdr_grid(uint64_t horizon, uint64_t* values, size_t capacity, size_t* count);

/* ---- single runs ------------------------------------------------------- */

typedef struct pfdr_trace pfdr_trace;

/* Plays one game for a run config given as JSON text. */
PFDR_API pfdr_status pfdr_trace_run(const char* config_json, uint64_t seed, pfdr_trace** out);
PFDR_API void pfdr_trace_destroy(pfdr_trace* trace);
PFDR_API size_t pfdr_trace_length(const pfdr_trace* trace);
PFDR_API size_t pfdr_trace_num_bases(const pfdr_trace* trace);
PFDR_API double pfdr_trace_final_regret(const pfdr_trace* trace);
/* sum_t <loss_t, w_t> */
PFDR_API double pfdr_trace_learner_loss(const pfdr_trace* trace);
PFDR_API pfdr_status pfdr_trace_cum_regret(const pfdr_trace* trace, double* out, size_t capacity);

/* ---- statistics -------------------------------------------------------- */

PFDR_API pfdr_status pfdr_fit_scaling(const double* x, const double* y, size_t n, double* slope,
                                      double* intercept, double* r_squared);

/* ---- harness commands -------------------------------------------------- */

typedef void (*pfdr_log_fn)(const char* line, void* user);

typedef struct pfdr_job_options {
  const char* config_path;
  const char* out_path; /* NULL or "": the config's output_path */
  uint32_t workers;     /* 0 treated as 1 */
  int64_t seed_offset;
  pfdr_log_fn log; /* optional progress/summary lines */
  void* log_user;
} pfdr_job_options;

PFDR_API pfdr_status pfdr_cmd_run(const pfdr_job_options* options);
PFDR_API pfdr_status pfdr_cmd_sweep(const pfdr_job_options* options);
PFDR_API pfdr_status pfdr_cmd_plotdata(const pfdr_job_options* options);

typedef void (*pfdr_check_fn)(const char* name, int passed, const char* detail, void* user);
/* Runs the invariant suite; PFDR_ERR_CHECK_FAILED if any check fails. */
PFDR_API pfdr_status pfdr_cmd_check(pfdr_check_fn report, void* user);

#ifdef __cplusplus
}
#endif

#endif /* PFDR_H */
