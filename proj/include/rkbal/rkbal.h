/* C interface to the rkbal kernel balanced reduction library. */
#ifndef RKBAL_RKBAL_H
#define RKBAL_RKBAL_H

#include <stddef.h>

#if defined(_WIN32)
#  ifdef RKBAL_BUILDING_LIBRARY
#    define RKBAL_API __declspec(dllexport)
#  else
#    define RKBAL_API __declspec(dllimport)
#  endif
#else
#  define RKBAL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rkbal_status {
  RKBAL_OK = 0,
  RKBAL_ERR_ARGUMENT = 1,
  RKBAL_ERR_CONFIG = 2,
  RKBAL_ERR_NUMERIC = 3,
  RKBAL_ERR_CHECK = 4,
  RKBAL_ERR_IO = 5
} rkbal_status;

typedef struct rkbal_config rkbal_config;
typedef struct rkbal_model rkbal_model;

typedef struct rkbal_dims {
  int n, m, p, q;
} rkbal_dims;

typedef struct rkbal_compare_summary {
  double rmse;
  double peak;
  double relative_rmse;
  int samples;
} rkbal_compare_summary;

/* Message of the last failure on this thread; empty when none. */
RKBAL_API const char* rkbal_last_error(void);
RKBAL_API const char* rkbal_version(void);

/* Strings returned through char** are owned by the caller. */
RKBAL_API void rkbal_string_free(char* s);

/* Config: a JSON document, absent fields take the reference defaults. */
RKBAL_API rkbal_status rkbal_config_default(rkbal_config** out);
RKBAL_API rkbal_status rkbal_config_from_json(const char* json, rkbal_config** out);
RKBAL_API rkbal_status rkbal_config_from_file(const char* path, rkbal_config** out);
RKBAL_API rkbal_status rkbal_config_to_json(const rkbal_config* config, char** json);
RKBAL_API void rkbal_config_free(rkbal_config* config);

/* Hankel spectrum. csv_path may be NULL. values receives up to capacity
 * singular values of the centered Hankel kernel matrix; count gets the rank. */
RKBAL_API rkbal_status rkbal_spectrum(const rkbal_config* config, const char* csv_path,
                                      double* values, size_t capacity, size_t* count);

RKBAL_API rkbal_status rkbal_reduce(const rkbal_config* config, rkbal_model** out);

RKBAL_API rkbal_status rkbal_model_save(const rkbal_model* model, const char* path);
RKBAL_API rkbal_status rkbal_model_load(const char* path, rkbal_model** out);
RKBAL_API rkbal_status rkbal_model_to_json(const rkbal_model* model, char** json);
RKBAL_API rkbal_status rkbal_model_from_json(const char* json, rkbal_model** out);
RKBAL_API void rkbal_model_free(rkbal_model* model);

RKBAL_API rkbal_status rkbal_model_dims(const rkbal_model* model, rkbal_dims* dims);

/* x has n entries, xr gets q. */
RKBAL_API rkbal_status rkbal_model_reduce_state(const rkbal_model* model, const double* x,
                                                double* xr);
/* xr has q entries, u has m, dxr gets q. */
RKBAL_API rkbal_status rkbal_model_closed_rhs(const rkbal_model* model, const double* xr,
                                              const double* u, double* dxr);
/* xr has q entries, y gets p. */
RKBAL_API rkbal_status rkbal_model_output(const rkbal_model* model, const double* xr,
                                          double* y);

/* Full against reduced under the evaluation input. csv_path and
 * summary_path may be NULL. */
RKBAL_API rkbal_status rkbal_compare(const rkbal_model* model, const rkbal_config* config,
                                     const char* csv_path, const char* summary_path,
                                     rkbal_compare_summary* summary);

/* Full-order trajectory under the evaluation input, written as CSV. */
RKBAL_API rkbal_status rkbal_simulate(const rkbal_config* config, const char* csv_path);

/* Linear-kernel equivalence checks. report_path may be NULL. Returns
 * RKBAL_ERR_CHECK when any check fails. */
RKBAL_API rkbal_status rkbal_oracle(const rkbal_config* config, const char* report_path,
                                    int* all_passed);

#ifdef __cplusplus
}
#endif

#endif
