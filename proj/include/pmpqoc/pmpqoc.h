#ifndef PMPQOC_H
#define PMPQOC_H

/* C interface to the pmp-qoc library. Every call returns a pq_status; on
 * failure pq_last_error() holds a message for the calling thread. Handles are
 * opaque and owned by the caller until passed to the matching _free. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(PQ_BUILDING_LIBRARY)
#    define PQ_API __declspec(dllexport)
#  else
#    define PQ_API __declspec(dllimport)
#  endif
#else
#  define PQ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pq_status {
  PQ_OK = 0,
  PQ_ERR_PARSE = 1,
  PQ_ERR_VALIDATION = 2,
  PQ_ERR_NUMERIC = 3,
  PQ_ERR_NOT_CONVERGED = 4, /* the result handle is still filled in */
  PQ_ERR_INVALID_ARGUMENT = 5,
  PQ_ERR_IO = 6,
  PQ_ERR_INTERNAL = 7
} pq_status;

typedef struct pq_scenario pq_scenario;
typedef struct pq_result pq_result;

PQ_API const char* pq_version(void);
PQ_API const char* pq_status_string(pq_status status);
/* Message of the last failed call on this thread; "" if none. */
PQ_API const char* pq_last_error(void);

/* Scenarios. */
PQ_API size_t pq_builtin_count(void);
PQ_API const char* pq_builtin_name(size_t index); /* NULL when out of range */

PQ_API pq_status pq_scenario_from_json(const char* json, pq_scenario** out);
PQ_API pq_status pq_scenario_from_file(const char* path, pq_scenario** out);
PQ_API pq_status pq_scenario_builtin(const char* name, pq_scenario** out);
/* Canonical JSON; the string lives as long as the handle. */
PQ_API const char* pq_scenario_json(const pq_scenario* scenario);
PQ_API const char* pq_scenario_name(const pq_scenario* scenario);
PQ_API int pq_scenario_channels(const pq_scenario* scenario);
PQ_API int pq_scenario_steps(const pq_scenario* scenario);
PQ_API void pq_scenario_free(pq_scenario* scenario);

/* Results: one JSON document plus named CSV tables. */
PQ_API const char* pq_result_json(const pq_result* result);
PQ_API int pq_result_converged(const pq_result* result);
PQ_API size_t pq_result_table_count(const pq_result* result);
PQ_API const char* pq_result_table_name(const pq_result* result, size_t index);
PQ_API const char* pq_result_table_csv(const pq_result* result, size_t index);
PQ_API void pq_result_free(pq_result* result);

/* Lie-rank controllability. mode: "drifted", "driftless", or NULL to pick
 * driftless exactly when the drift vanishes. */
PQ_API pq_status pq_check(const pq_scenario* scenario, const char* mode, int samples, uint64_t seed,
                          pq_result** out);

/* Filippov existence verdict: "exists" or "cannot-conclude". */
PQ_API pq_status pq_exists(const pq_scenario* scenario, pq_result** out);

typedef struct pq_shoot_options {
  int starts;
  uint64_t seed;
  int max_iter;
  double tol;
  double covector_radius;
  int steps; /* 0 keeps the scenario's step count */
} pq_shoot_options;

PQ_API void pq_shoot_options_init(pq_shoot_options* opt);
/* Multi-start shooting. PQ_ERR_NOT_CONVERGED when no start converged. */
PQ_API pq_status pq_shoot(const pq_scenario* scenario, const pq_shoot_options* opt, pq_result** out);

typedef struct pq_grape_options {
  int max_iters;
  double eps0;
  double guess_value;  /* constant guess on every channel, used when guess is NULL */
  const double* guess; /* row-major channels x steps, or NULL */
  size_t guess_rows;
  size_t guess_cols;
} pq_grape_options;

PQ_API void pq_grape_options_init(pq_grape_options* opt);
/* PQ_ERR_NOT_CONVERGED when max_iters is reached before a stationary point. */
PQ_API pq_status pq_grape(const pq_scenario* scenario, const pq_grape_options* opt, pq_result** out);

typedef struct pq_synth_options {
  double delta;   /* spin detuning */
  int symmetric;  /* spin-p1: start with the long bang */
  int n1, n2;     /* grushin quantization integers */
  int p_theta0;   /* grushin branch, +1 or -1 */
  double T;       /* warmup horizon */
  double u_max;   /* warmup bound */
  int samples;    /* trajectory samples */
  int competitor_grid;
} pq_synth_options;

PQ_API void pq_synth_options_init(pq_synth_options* opt);
/* problem: "grushin", "spin-p1", "spin-p2", or "warmup". */
PQ_API pq_status pq_synthesize(const char* problem, const pq_synth_options* opt, pq_result** out);

/* Distance d(N_s) for N_s = 0, 1, 2, 4, ..., max_switches on [0, horizon]. */
PQ_API pq_status pq_chattering(int max_switches, double horizon, pq_result** out);

/* Forward propagation. controls: row-major channels x steps, or NULL with
 * a constant value per channel in constant (length channels), or both NULL for zero. */
PQ_API pq_status pq_propagate(const pq_scenario* scenario, const double* controls, size_t rows, size_t cols,
                              const double* constant, pq_result** out);

#ifdef __cplusplus
}
#endif

#endif /* PMPQOC_H */
