#ifndef DSEA_DSEA_H
#define DSEA_DSEA_H

/* C interface to the Dirac-sea variational toolkit. Every function returns a
 * status; on failure dsea_last_error() holds a message for the calling
 * thread. Strings returned through char** are owned by the caller and must be
 * released with dsea_string_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(DSEA_BUILDING_LIBRARY)
#define DSEA_API __attribute__((visibility("default")))
#else
#define DSEA_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dsea_status {
  DSEA_OK = 0,
  DSEA_INTERNAL = 1,
  DSEA_INVALID_ARGUMENT = 2,
  DSEA_NO_CONVERGENCE = 3,
  DSEA_VERIFICATION_FAILED = 4,
  DSEA_DOMAIN = 5,
  DSEA_SEAM = 6,
  DSEA_QUADRATURE = 7
} dsea_status;

/* Validated configuration: sea, couplings, quadrature settings and an
 * optional solve problem. */
typedef struct dsea_config dsea_config;

typedef struct dsea_grid {
  double lo;
  double hi;
  size_t n;
  int mirror;       /* add -m for every positive node */
  int refine_seams; /* log-spaced nodes approaching every occupied mass */
} dsea_grid;

DSEA_API const char* dsea_version(void);
DSEA_API const char* dsea_last_error(void);
DSEA_API const char* dsea_status_name(dsea_status status);
DSEA_API void dsea_string_free(char* s);

DSEA_API dsea_status dsea_config_from_json(const char* json, dsea_config** out);
DSEA_API dsea_status dsea_config_from_file(const char* path, dsea_config** out);
/* Sea and couplings of a solution record (JSON as written by dsea_solve). */
DSEA_API dsea_status dsea_config_from_record(const char* record_json, dsea_config** out);
DSEA_API void dsea_config_free(dsea_config* config);
DSEA_API dsea_status dsea_config_set_quad_tol(dsea_config* config, double rel_tol);
/* Effective settings after defaulting. */
DSEA_API dsea_status dsea_config_settings(const dsea_config* config, char** json_out);
DSEA_API size_t dsea_config_generations(const dsea_config* config);
/* The config's "grid" entry if present (has_grid = 1), else the default grid. */
DSEA_API dsea_status dsea_config_grid(const dsea_config* config, dsea_grid* out, int* has_grid);
/* The config's "problem" object, or the standard one for its generations. */
DSEA_API dsea_status dsea_config_problem(const dsea_config* config, char** json_out);
/* "min:max:n"; the result is not mirrored and refines seams. */
DSEA_API dsea_status dsea_parse_grid(const char* text, dsea_grid* out);

/* S_quartic, free term, S_ext, m3, m5, T and the cutoff as JSON. */
DSEA_API dsea_status dsea_eval_action(const dsea_config* config, char** json_out);
DSEA_API dsea_status dsea_variation_density(const dsea_config* config, double m, double* out);
DSEA_API dsea_status dsea_variation_density_prime(const dsea_config* config, double m, double* out);
DSEA_API dsea_status dsea_el_residuals(const dsea_config* config, char** json_out);

/* V on a grid (NULL: mirrored grid reaching 2.5 times the largest mass).
 * Writes "m,V" CSV and a JSON sidecar with seams and local minima. */
DSEA_API dsea_status dsea_sample_vcurve(const dsea_config* config, const dsea_grid* grid, char** csv_out,
                                        char** sidecar_json_out);
DSEA_API dsea_status dsea_classify(const dsea_config* config, const dsea_grid* grid, double tol, char** json_out);

/* Solves the problem given as JSON (same keys as the "problem" object of a
 * config), or the config's own problem when problem_json is NULL, or a
 * standard critical-point problem for the number of generations. Writes
 * {"mode", "free_vars", "records": [...]}; returns DSEA_NO_CONVERGENCE, with
 * the output still written, when no record converged. */
DSEA_API dsea_status dsea_solve(const dsea_config* config, const char* problem_json, char** json_out);

/* Recomputes residuals at tighter quadrature and reclassifies. Returns
 * DSEA_VERIFICATION_FAILED, with the report written, when the check fails. */
DSEA_API dsea_status dsea_verify_record(const char* record_json, double tol, char** json_out);

/* Randomized oracle suites; DSEA_VERIFICATION_FAILED if any check fails. */
DSEA_API dsea_status dsea_run_oracle_suite(uint64_t seed, char** json_out);

#ifdef __cplusplus
}
#endif

#endif
