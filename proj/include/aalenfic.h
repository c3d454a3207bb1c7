/* aalenfic: additive hazard regression with focused covariate selection.
 *
 * C interface to the shared library. All structured requests and responses
 * are JSON documents (schemas in the README); datasets travel as opaque
 * handles. Strings returned through char** are heap-allocated and must be
 * released with aalenfic_string_free().
 *
 * Every function returns AALENFIC_OK (0) on success. On failure the return
 * value classifies the error and aalenfic_last_error() returns a
 * thread-local message, valid until the next library call on that thread.
 */
#ifndef AALENFIC_H
#define AALENFIC_H

#if defined(_WIN32)
#define AALENFIC_API __declspec(dllexport)
#else
#define AALENFIC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct aalenfic_dataset aalenfic_dataset;

/* Nonzero values coincide with the CLI exit codes. */
typedef enum aalenfic_status {
  AALENFIC_OK = 0,
  AALENFIC_VALIDATION_ERROR = 2, /* bad input, parse failure, bad config   */
  AALENFIC_SINGULAR_ERROR = 3,   /* G_n block failed the condition test    */
  AALENFIC_INFEASIBLE_ERROR = 4, /* no candidate model could be scored     */
  AALENFIC_INTERNAL_ERROR = 5
} aalenfic_status;

AALENFIC_API const char* aalenfic_version(void);
AALENFIC_API const char* aalenfic_last_error(void);
AALENFIC_API void aalenfic_string_free(char* s);

/* Dataset I/O. CSV contract: header `time,status,x1,...,xr`, '#' comment
 * lines allowed before and after the header. JSON contract: array of
 * {"time": .., "status": 0|1, "x": [..]}. */
AALENFIC_API aalenfic_status aalenfic_dataset_from_csv(const char* text, aalenfic_dataset** out);
AALENFIC_API aalenfic_status aalenfic_dataset_from_json(const char* text, aalenfic_dataset** out);
AALENFIC_API aalenfic_status aalenfic_dataset_to_csv(const aalenfic_dataset* d, char** out);
AALENFIC_API aalenfic_status aalenfic_dataset_to_json(const aalenfic_dataset* d, char** out);
AALENFIC_API int aalenfic_dataset_rows(const aalenfic_dataset* d);
AALENFIC_API int aalenfic_dataset_covariate_dim(const aalenfic_dataset* d);
AALENFIC_API void aalenfic_dataset_free(aalenfic_dataset* d);

/* Aalen fit. Request: {"tau": number?, "subset": [1-based]?}.
 * Response: {"index_set", "r", "grid", "increments"}. */
AALENFIC_API aalenfic_status aalenfic_fit(const aalenfic_dataset* d, const char* request_json,
                             char** response_json);

/* FIC scoring and model ranking. Request:
 *   {"mode": "point",    "x": [..], "t": ..}
 *   {"mode": "interval", "x": [..], "t1": .., "t2": ..}
 *   {"mode": "window",   "x": [..], "centers": [..], "delta": ..}
 *   {"mode": "weights",  "weights": <weight spec>}
 * plus "candidates": "all" | [[1-based]..] and optional "protected".
 * Response: a report {focal, candidates, winner}, or an array of
 * {center, report} in window mode. */
AALENFIC_API aalenfic_status aalenfic_fic(const aalenfic_dataset* d, const char* request_json,
                             char** response_json);

/* Draw a right-censored dataset from a simulation config document. */
AALENFIC_API aalenfic_status aalenfic_simulate(const char* config_json, aalenfic_dataset** out);

/* Monte Carlo risk of a submodel. Request: {"sim": <sim config>,
 * "subset": [..], "x": [..], "t": .., "reps": .., "threads": ..?}.
 * Response: {"mean", "se", "used", "dropped"}. */
AALENFIC_API aalenfic_status aalenfic_replicate_mse(const char* request_json, char** response_json);

/* Exact risk under a population config. Request: {"config": <oracle config>
 * | [<oracle config>..], "n": .., "candidates": "all" | [[..]..],
 * "radius": bool?, "reps": int?, "threads": int?}. Response: {"rows": [
 * {config_id, I, sqb, var, mse, ...}]}. */
AALENFIC_API aalenfic_status aalenfic_oracle_risk(const char* request_json, char** response_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* AALENFIC_H */
