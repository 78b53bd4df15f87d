#ifndef DGLES_H
#define DGLES_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(DGLES_BUILDING_LIBRARY)
#define DGLES_API __attribute__((visibility("default")))
#else
#define DGLES_API
#endif

typedef enum dgles_status {
  DGLES_OK = 0,
  DGLES_ERR_INVALID_ARGUMENT = 1,
  DGLES_ERR_CONFIG = 2,
  DGLES_ERR_NUMERICAL = 3, /* positivity violation or NaN/Inf */
  DGLES_ERR_IO = 4,
  DGLES_ERR_NOT_READY = 5, /* e.g. no statistics accumulated yet */
  DGLES_ERR_INTERNAL = 6
} dgles_status;

typedef struct dgles_simulation dgles_simulation;

typedef struct dgles_table2 {
  double tau_w;
  double re_tau;
  double u_tau_u_b;
  double rho_w_rho_b;
  double u_c_u_b;
  double rho_c_rho_b;
  double rho_c_rho_w;
  double t_c_t_w;
  double dx_plus;
  double dy_plus_min;
  double dy_plus_max;
  double dz_plus;
} dgles_table2;

typedef struct dgles_run_summary {
  long steps;
  double time;
  double max_limited_fraction;
  long clipped_nodes;
  double max_mass_drift;
} dgles_run_summary;

/* Receives one line of text; `user` is passed through unchanged. */
typedef void (*dgles_line_callback)(const char* line, void* user);

DGLES_API const char* dgles_version(void);
/* Message of the last failed call on this thread ("" when none). */
DGLES_API const char* dgles_last_error(void);

/* The output-directory environment override is applied in both. */
DGLES_API dgles_status dgles_create_from_file(const char* config_path, dgles_simulation** out);
DGLES_API dgles_status dgles_create_from_string(const char* config_text, dgles_simulation** out);
/* Resume from a checkpoint using its embedded configuration. output_dir may be NULL. */
DGLES_API dgles_status dgles_restore(const char* checkpoint_path, const char* output_dir, dgles_simulation** out);
DGLES_API void dgles_destroy(dgles_simulation* sim);

DGLES_API dgles_status dgles_step(dgles_simulation* sim, int n_steps);
/* Run to the configured end, writing log, history, outputs and checkpoints. */
DGLES_API dgles_status dgles_run(dgles_simulation* sim, dgles_run_summary* summary);
DGLES_API dgles_status dgles_time(const dgles_simulation* sim, double* time, long* steps);
/* Conserved-variable domain integrals: mass, momentum (3), energy. */
DGLES_API dgles_status dgles_integrals(const dgles_simulation* sim, double out[5]);
DGLES_API dgles_status dgles_write_outputs(const dgles_simulation* sim);
DGLES_API dgles_status dgles_checkpoint(const dgles_simulation* sim, const char* path);
DGLES_API dgles_status dgles_get_table2(const dgles_simulation* sim, dgles_table2* out);
/* Effective configuration as key = value text; valid until the next call on sim. */
DGLES_API const char* dgles_config_text(dgles_simulation* sim);

/* Rebuild profiles.csv and table2.txt from a checkpoint. output_dir may be NULL. */
DGLES_API dgles_status dgles_postprocess(const char* checkpoint_path, const char* output_dir, dgles_table2* out);

/* Built-in property suites; one line per suite. *all_passed is set when non-NULL. */
DGLES_API dgles_status dgles_verify(dgles_line_callback cb, void* user, int* all_passed);

/* Compare a table2.txt record with one row of a reference CSV. The callback
   receives one line per field; *all_passed covers the checked fields. */
DGLES_API dgles_status dgles_compare_table2(const char* table2_path, const char* reference_path,
                                            const char* case_name, double tolerance, dgles_line_callback cb,
                                            void* user, int* all_passed);

#ifdef __cplusplus
}
#endif

#endif
