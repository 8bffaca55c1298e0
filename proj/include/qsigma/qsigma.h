/*
 * C interface to the qsigma experiment library.
 *
 * All objects are opaque handles created and destroyed through this API.
 * Functions returning qsigma_status report failures through the code and
 * leave a message for qsigma_last_error() on the calling thread.
 */
#ifndef QSIGMA_QSIGMA_H
#define QSIGMA_QSIGMA_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(QSIGMA_BUILDING_LIBRARY)
#    define QSIGMA_API __declspec(dllexport)
#  else
#    define QSIGMA_API __declspec(dllimport)
#  endif
#else
#  define QSIGMA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qsigma_status {
  QSIGMA_OK = 0,
  QSIGMA_ERR_INVALID_ARGUMENT = 1,
  QSIGMA_ERR_DIVERGED = 2,
  QSIGMA_ERR_IO = 3,
  QSIGMA_ERR_STATE = 4,
  QSIGMA_ERR_INTERNAL = 5
} qsigma_status;

typedef struct qsigma_config qsigma_config;
typedef struct qsigma_curve qsigma_curve;
typedef struct qsigma_sweep qsigma_sweep;

QSIGMA_API const char* qsigma_version(void);

/* Message of the last failure on this thread; empty string if none. */
QSIGMA_API const char* qsigma_last_error(void);

/* ---- configuration (flat key=value settings) ---------------------------- */

QSIGMA_API qsigma_status qsigma_config_create(qsigma_config** out);
QSIGMA_API void qsigma_config_destroy(qsigma_config* config);
QSIGMA_API qsigma_status qsigma_config_set(qsigma_config* config, const char* key, const char* value);
/* Reads `key=value` lines; later calls to qsigma_config_set override them. */
QSIGMA_API qsigma_status qsigma_config_load_file(qsigma_config* config, const char* path);

/* ---- single experiment: aggregated per-episode curve --------------------- */

/* Runs `runs` seeded runs and aggregates the configured metric. */
QSIGMA_API qsigma_status qsigma_run(const qsigma_config* config, qsigma_curve** out);
QSIGMA_API size_t qsigma_curve_length(const qsigma_curve* curve);
QSIGMA_API size_t qsigma_curve_runs(const qsigma_curve* curve);
/* stderr and half-width are NaN when fewer than two runs were aggregated. */
QSIGMA_API qsigma_status qsigma_curve_point(const qsigma_curve* curve, size_t episode_index, double* mean,
                                            double* std_error, double* half_width);
/* Writes `episode,mean,stderr,ci_halfwidth`; path "-" means stdout. */
QSIGMA_API qsigma_status qsigma_curve_write_csv(const qsigma_curve* curve, const char* path);
QSIGMA_API void qsigma_curve_destroy(qsigma_curve* curve);

/* ---- hyperparameter sweeps ----------------------------------------------- */

QSIGMA_API qsigma_status qsigma_sweep_run(const qsigma_config* config, qsigma_sweep** out);
QSIGMA_API size_t qsigma_sweep_size(const qsigma_sweep* sweep);
/* `scheme` points into the sweep and stays valid until it is destroyed. */
QSIGMA_API qsigma_status qsigma_sweep_cell(const qsigma_sweep* sweep, size_t index, const char** scheme,
                                           double* lambda, double* alpha, double* objective, double* std_error);
/* Index of the best cell for `scheme` under the sweep's objective. */
QSIGMA_API qsigma_status qsigma_sweep_best(const qsigma_sweep* sweep, const char* scheme, size_t* index);
/* Writes `scheme,lambda,alpha,objective,stderr`; path "-" means stdout. */
QSIGMA_API qsigma_status qsigma_sweep_write_csv(const qsigma_sweep* sweep, const char* path);
QSIGMA_API void qsigma_sweep_destroy(qsigma_sweep* sweep);

/* ---- canned figure presets ----------------------------------------------- */

QSIGMA_API size_t qsigma_figure_count(void);
QSIGMA_API const char* qsigma_figure_id(size_t index);
QSIGMA_API const char* qsigma_figure_description(size_t index);
/* Runs a preset and writes its CSV files into out_dir. `overrides` may be
 * NULL; its runs, episodes, seed, confidence, smooth-window and threads
 * keys replace the preset's values. */
QSIGMA_API qsigma_status qsigma_figure_run(const char* id, const qsigma_config* overrides, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* QSIGMA_QSIGMA_H */
