#ifndef ROESSER_ROESSER_H
#define ROESSER_ROESSER_H

#include <stddef.h>
#include <stdint.h>

#if defined(ROESSER_BUILDING_LIBRARY)
#define ROESSER_API __attribute__((visibility("default")))
#else
#define ROESSER_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct roesser_model roesser_model;
typedef struct roesser_report roesser_report;

typedef enum roesser_status {
  ROESSER_OK = 0,
  ROESSER_E_PARSE = 1,
  ROESSER_E_INVALID_ARGUMENT = 2,
  ROESSER_E_DIMENSION = 3,
  ROESSER_E_UNSUPPORTED_KIND = 4,
  ROESSER_E_CONFIG_TOO_LARGE = 5,
  ROESSER_E_NUMERICAL = 6,
  ROESSER_E_IO = 7,
  ROESSER_E_INTERNAL = 99
} roesser_status;

/* Mirrors the CLI exit codes. */
typedef enum roesser_verdict {
  ROESSER_VERDICT_STABLE = 0,
  ROESSER_VERDICT_UNSTABLE = 1,
  ROESSER_VERDICT_INDETERMINATE = 2
} roesser_verdict;

typedef enum roesser_basis {
  ROESSER_BASIS_AUTO = 0,
  ROESSER_BASIS_MONOMIAL = 1,
  ROESSER_BASIS_MOEBIUS = 2
} roesser_basis;

typedef struct roesser_oracle_options {
  size_t samples_per_dim;
  double margin_tol;
  int include_infinity;
} roesser_oracle_options;

typedef struct roesser_certify_options {
  size_t min_degree;
  size_t max_degree;
  roesser_basis basis;
  size_t coarse_samples;
  size_t refine_rounds;
  size_t samples_per_dim;
  /* 0 selects 1e-6 * (1 + max block entry) */
  double eps;
} roesser_certify_options;

typedef struct roesser_sim_options {
  size_t j1;
  size_t j2;
  uint64_t seed;
  size_t trials;
  size_t decay_window;
  size_t boundary_support;
} roesser_sim_options;

ROESSER_API const char* roesser_version(void);

/* Message of the last failed call on this thread; empty if none. */
ROESSER_API const char* roesser_last_error(void);

ROESSER_API void roesser_oracle_options_init(roesser_oracle_options* opts);
ROESSER_API void roesser_certify_options_init(roesser_certify_options* opts);
ROESSER_API void roesser_sim_options_init(roesser_sim_options* opts);

ROESSER_API roesser_status roesser_model_load_file(const char* path, roesser_model** out);
ROESSER_API roesser_status roesser_model_load_string(const char* text, roesser_model** out);
ROESSER_API size_t roesser_model_dimensions(const roesser_model* model);
/* Re-emits the model document; the string lives as long as the model. */
ROESSER_API const char* roesser_model_json(const roesser_model* model);
ROESSER_API void roesser_model_free(roesser_model* model);

ROESSER_API roesser_status roesser_run_oracle(const roesser_model* model,
                                              const roesser_oracle_options* opts,
                                              roesser_report** out);
ROESSER_API roesser_status roesser_run_certify(const roesser_model* model,
                                               const roesser_certify_options* opts,
                                               roesser_report** out);
ROESSER_API roesser_status roesser_run_simulate(const roesser_model* model,
                                                const roesser_sim_options* opts,
                                                roesser_report** out);

/* Writes the LMI problem of the given degree on the coarse sample set in the
   sparse text format. */
ROESSER_API roesser_status roesser_dump_sdp(const roesser_model* model,
                                            const roesser_certify_options* opts, size_t degree,
                                            const char* path);

ROESSER_API roesser_verdict roesser_report_verdict(const roesser_report* report);
/* Verdict name, e.g. "stable", "certified_stable", "decaying". */
ROESSER_API const char* roesser_report_verdict_name(const roesser_report* report);
ROESSER_API const char* roesser_report_text(const roesser_report* report);
ROESSER_API const char* roesser_report_json(const roesser_report* report);
/* Simulation reports only: "d,s" CSV of the first trial. */
ROESSER_API roesser_status roesser_report_write_csv(const roesser_report* report, const char* path);
ROESSER_API void roesser_report_free(roesser_report* report);

#ifdef __cplusplus
}
#endif

#endif
