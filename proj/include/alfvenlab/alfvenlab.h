#ifndef ALFVENLAB_ALFVENLAB_H
#define ALFVENLAB_ALFVENLAB_H

/* C interface of the Elsasser-system solver and experiment harness.
 *
 * Every call returns an alf_status. On failure a description is kept per
 * thread and can be read with alf_last_error() until the next failing call.
 * Strings returned through char** are owned by the caller and released with
 * alf_string_free(). */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(ALFVENLAB_BUILDING)
#    define ALF_API __declspec(dllexport)
#  else
#    define ALF_API __declspec(dllimport)
#  endif
#else
#  define ALF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum alf_status {
  ALF_OK = 0,
  ALF_ERR_CONFIG = 1,    /* invalid configuration or violated precondition */
  ALF_ERR_DOMAIN = 2,    /* argument outside the mathematical domain */
  ALF_ERR_USAGE = 3,     /* API misuse: mismatched runs, unknown names */
  ALF_ERR_BLOWUP = 4,    /* solution became non-finite or exceeded the threshold */
  ALF_ERR_IO = 5,        /* file could not be read or written */
  ALF_ERR_CRITERION = 6, /* verify finished and at least one criterion failed */
  ALF_ERR_NULL = 7,      /* required pointer argument was NULL */
  ALF_ERR_INTERNAL = 8
} alf_status;

typedef struct alf_config alf_config;
typedef struct alf_state alf_state;

/* Receives one human-readable progress or result line (no trailing newline). */
typedef void (*alf_line_fn)(const char* line, void* user);

typedef struct alf_state_info {
  int ndim;
  int dims[3];
  double half_length;
  double t_star;
  double epsilon;
  double nu;
  double max_divergence;
  double norm_plus; /* squared L2 norm of Lambda+ */
  double norm_minus;
} alf_state_info;

typedef struct alf_functionals {
  double E;
  double W;
  double D;
  double e_inverse;
  double e_zeroth;
} alf_functionals;

ALF_API const char* alf_version(void);
ALF_API const char* alf_last_error(void);
ALF_API const char* alf_status_name(alf_status status);
ALF_API void alf_string_free(char* s);

/* "default" (or NULL) selects the built-in configuration; anything else is a JSON file. */
ALF_API alf_status alf_config_load(const char* name_or_path, alf_config** out);
ALF_API alf_status alf_config_parse(const char* json_text, alf_config** out);
ALF_API void alf_config_free(alf_config* cfg);
ALF_API alf_status alf_config_set_seed(alf_config* cfg, uint64_t seed);
ALF_API alf_status alf_config_validate(const alf_config* cfg);
ALF_API alf_status alf_config_to_json(const alf_config* cfg, char** out);
ALF_API alf_status alf_config_hash(const alf_config* cfg, char** out);

/* Runs every (eps, nu) pair of the configuration and writes sweep_run.json and
 * per-run CSVs into out_dir (the config's output_dir when NULL). */
ALF_API alf_status alf_run(const alf_config* cfg, int threads, const char* out_dir, alf_line_fn on_line,
                           void* user);
/* name: interaction | ball | nu | uniformity. Writes sweep_<name>.json. */
ALF_API alf_status alf_sweep(const alf_config* cfg, const char* name, int threads, const char* out_dir,
                             alf_line_fn on_line, void* user);
/* Aggregates sweep_*.json in in_dir into summary tables and .dat files in out_dir. */
ALF_API alf_status alf_report(const char* in_dir, const char* out_dir, alf_line_fn on_line, void* user);
/* Runs the acceptance criteria (all when count == 0), one line per criterion.
 * Returns ALF_ERR_CRITERION when any failed; *failed receives their number. */
ALF_API alf_status alf_verify(const alf_config* cfg, int threads, const char* out_dir, const int* criteria,
                              size_t count, alf_line_fn on_line, void* user, int* failed);

/* Initial state of the configuration for the given eps and nu. */
ALF_API alf_status alf_state_initial(const alf_config* cfg, double epsilon, double nu, alf_state** out);
ALF_API void alf_state_free(alf_state* state);
/* `steps` steps of size dt (negative dt integrates backwards, nu = 0 only). */
ALF_API alf_status alf_state_step(alf_state* state, double dt, int steps);
ALF_API alf_status alf_state_get_info(const alf_state* state, alf_state_info* out);
ALF_API alf_status alf_state_measure(const alf_state* state, double s, int k, alf_functionals* out);
/* precision: 64 or 128 bits per complex coefficient. */
ALF_API alf_status alf_checkpoint_write(const alf_state* state, const char* path, double s, int k, int precision);
ALF_API alf_status alf_checkpoint_read(const char* path, alf_state** out);

#ifdef __cplusplus
}
#endif

#endif
