/*
 * C interface to the OUQ library.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns an ouq_status; on
 * failure ouq_last_error() describes the problem. The message is stored per
 * thread and stays valid until the next failing call on that thread.
 */
#ifndef OUQ_OUQ_H
#define OUQ_OUQ_H

#include <stddef.h>
#include <stdint.h>

#if defined(OUQ_BUILDING_LIBRARY)
#  define OUQ_API __attribute__((visibility("default")))
#else
#  define OUQ_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ouq_status {
  OUQ_OK = 0,
  OUQ_ERR_INVALID_ARGUMENT = 1,
  OUQ_ERR_PARSE = 2,
  OUQ_ERR_VALIDATION = 3,
  OUQ_ERR_IO = 4,
  OUQ_ERR_UNKNOWN_RESPONSE = 5,
  OUQ_ERR_ARITY = 6,
  OUQ_ERR_DOMAIN = 7,
  OUQ_ERR_SOLVER = 8,
  OUQ_ERR_INTERNAL = 9
} ouq_status;

typedef struct ouq_config ouq_config;
typedef struct ouq_result ouq_result;

typedef struct ouq_summary {
  size_t runs;
  size_t best_run;
  double best_bound;
} ouq_summary;

/* Response callback: coords holds n values; user_data is passed through. */
typedef double (*ouq_response_fn)(const double* coords, size_t n, void* user_data);

OUQ_API const char* ouq_version(void);
OUQ_API const char* ouq_last_error(void);
OUQ_API const char* ouq_status_name(ouq_status status);

/* Process exit code for a status: 0 ok, 1 usage/config, 2 solver, 3 I/O. */
OUQ_API int ouq_exit_code(ouq_status status);

OUQ_API ouq_status ouq_config_load(const char* path, ouq_config** out);
OUQ_API ouq_status ouq_config_parse(const char* text, ouq_config** out);
OUQ_API void ouq_config_free(ouq_config* config);

OUQ_API ouq_status ouq_config_set_seed(ouq_config* config, uint64_t seed);
OUQ_API ouq_status ouq_config_set_runs(ouq_config* config, size_t runs);
OUQ_API ouq_status ouq_config_set_output_dir(ouq_config* config, const char* dir);
OUQ_API ouq_status ouq_config_get_seed(const ouq_config* config, uint64_t* seed);
OUQ_API ouq_status ouq_config_get_runs(const ouq_config* config, size_t* runs);
OUQ_API ouq_status ouq_config_param_count(const ouq_config* config, size_t* count);

/* Runs every configured restart and writes trace, result and summary files. */
OUQ_API ouq_status ouq_run(const ouq_config* config, ouq_summary* summary);

/* One solve with the given seed; nothing is written to disk. */
OUQ_API ouq_status ouq_solve(const ouq_config* config, uint64_t seed, ouq_result** out);
OUQ_API void ouq_result_free(ouq_result* result);
OUQ_API double ouq_result_probability_bound(const ouq_result* result);
OUQ_API double ouq_result_expectation(const ouq_result* result);
OUQ_API size_t ouq_result_generations(const ouq_result* result);
OUQ_API size_t ouq_result_evaluations(const ouq_result* result);
OUQ_API size_t ouq_result_param_count(const ouq_result* result);
/* Copies the flattened maximizer; capacity must be at least param_count. */
OUQ_API ouq_status ouq_result_params(const ouq_result* result, double* out, size_t capacity);

/* Evaluates a registered response. When the response reports an auxiliary
 * value (the surrogate's ballistic limit) it is stored in *auxiliary and
 * *has_auxiliary is set to 1. auxiliary and has_auxiliary may be NULL. */
OUQ_API ouq_status ouq_eval(const char* response, const double* coords, size_t n,
                            double* value, double* auxiliary, int* has_auxiliary);
OUQ_API ouq_status ouq_response_arity(const char* response, size_t* arity);
OUQ_API ouq_status ouq_register_response(const char* name, size_t arity,
                                         ouq_response_fn fn, void* user_data);

OUQ_API ouq_status ouq_ballistic_limit(double h_mm, double theta_rad, double* out);
OUQ_API double ouq_mils_to_mm(double mils);
OUQ_API double ouq_mm_to_mils(double mm);

#ifdef __cplusplus
}
#endif

#endif /* OUQ_OUQ_H */
