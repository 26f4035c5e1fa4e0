/* C interface to the fuzzyref scan engine.
 *
 * Every call returns an fzr_status. On failure fzr_last_error() describes
 * the problem; the text is per thread and valid until the next failing call
 * on that thread. Strings returned from handles live as long as the handle
 * or until the handle is next modified.
 */
#ifndef FUZZYREF_H
#define FUZZYREF_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define FZR_API __declspec(dllexport)
#else
#  define FZR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fzr_status {
  FZR_OK = 0,
  FZR_USAGE = 1,       /* bad argument, unknown id, malformed config */
  FZR_NUMERIC = 2,     /* an integral failed at some grid point */
  FZR_ORACLE = 3,      /* Monte Carlo cross-check disagreed */
  FZR_IO = 4,
  FZR_UNSUPPORTED = 5, /* valid input outside what the model covers */
  FZR_CONTRACT = 6,
  FZR_INTERNAL = 7
} fzr_status;

typedef struct fzr_scenario fzr_scenario;
typedef struct fzr_result fzr_result;

typedef struct fzr_oracle_summary {
  uint64_t samples;
  uint64_t seed;
  size_t points;
  double max_z;
  double worst_x;
  double fraction_within_3;
  int passed;
} fzr_oracle_summary;

FZR_API const char* fzr_version(void);
FZR_API const char* fzr_last_error(void);

/* Presets. index < fzr_scenario_count(); outputs may be NULL. */
FZR_API size_t fzr_scenario_count(void);
FZR_API fzr_status fzr_scenario_info(size_t index, const char** id, const char** description,
                                     const char** anchor);

FZR_API fzr_status fzr_scenario_preset(const char* id, fzr_scenario** out);
FZR_API fzr_status fzr_scenario_load(const char* path, fzr_scenario** out);
FZR_API fzr_status fzr_scenario_parse(const char* text, fzr_scenario** out);
/* Joint angle law scan over an even theta grid. */
FZR_API fzr_status fzr_scenario_distribution(double w0, double t0, double delta_w, double delta_t,
                                             double theta_min, double theta_max, int points,
                                             fzr_scenario** out);
/* "section.key=value" assignments, applied together. The handle is left
 * unchanged on failure. */
FZR_API fzr_status fzr_scenario_override(fzr_scenario* scenario, const char* const* assignments,
                                         size_t count);
/* 0 = one worker per hardware thread. */
FZR_API fzr_status fzr_scenario_set_workers(fzr_scenario* scenario, unsigned workers);
FZR_API const char* fzr_scenario_id(const fzr_scenario* scenario);
/* The resolved parameters in config-file syntax. */
FZR_API const char* fzr_scenario_config(fzr_scenario* scenario);
FZR_API void fzr_scenario_free(fzr_scenario* scenario);

FZR_API fzr_status fzr_run(const fzr_scenario* scenario, fzr_result** out);
FZR_API size_t fzr_result_rows(const fzr_result* result);
FZR_API size_t fzr_result_cols(const fzr_result* result);
FZR_API const char* fzr_result_column_name(const fzr_result* result, size_t col);
FZR_API fzr_status fzr_result_value(const fzr_result* result, size_t row, size_t col, double* out);
/* CSV at path plus the JSON sidecar next to it. */
FZR_API fzr_status fzr_result_write(const fzr_result* result, const char* csv_path);
FZR_API const char* fzr_result_csv(fzr_result* result);
FZR_API void fzr_result_free(fzr_result* result);

/* Monte Carlo re-evaluation of every grid point. Returns FZR_ORACLE when
 * the check runs but fails; summary is filled in either case. */
FZR_API fzr_status fzr_check(const fzr_scenario* scenario, uint64_t samples, uint64_t seed,
                             fzr_oracle_summary* summary);

#ifdef __cplusplus
}
#endif

#endif /* FUZZYREF_H */
