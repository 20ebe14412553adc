#ifndef DNSLAB_H
#define DNSLAB_H

/* C surface of the solver laboratory.  Everything lives behind opaque
 * handles and status codes; messages come from dnslab_last_error(). */

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dnslab_status {
  DNSLAB_OK = 0,
  DNSLAB_ERR_INVALID_ARGUMENT = 1,
  DNSLAB_ERR_PARSE = 2,
  DNSLAB_ERR_VALIDATION = 3,
  DNSLAB_ERR_IO = 4,
  DNSLAB_ERR_NUMERICS = 5,
  DNSLAB_ERR_INTERNAL = 6
} dnslab_status;

const char* dnslab_version(void);
const char* dnslab_status_name(dnslab_status s);

/* Message of the most recent failure on the calling thread ("" when the
 * last call succeeded).  The pointer stays valid until the next call. */
const char* dnslab_last_error(void);

/* One parsed run configuration plus runtime overrides. */
typedef struct dnslab_run dnslab_run;

dnslab_status dnslab_run_open(const char* config_path, dnslab_run** out);
dnslab_status dnslab_run_open_text(const char* config_text, dnslab_run** out);
void dnslab_run_close(dnslab_run* run);

/* key: "output_dir" | "jobs" | "fatal_invariants" (comma list) | "log_level" */
dnslab_status dnslab_run_set(dnslab_run* run, const char* key, const char* value);

/* Subcommand drivers.  *exit_code receives the process-style exit status
 * (0 ok; 1 failed verdict or fatal invariant); hard errors return a nonzero
 * status instead. */
dnslab_status dnslab_run_check_init(dnslab_run* run, int* exit_code);
dnslab_status dnslab_run_solve(dnslab_run* run, int* exit_code);
dnslab_status dnslab_run_oracle_transport(dnslab_run* run, int* exit_code);
dnslab_status dnslab_run_continuation(dnslab_run* run, int* exit_code);
dnslab_status dnslab_run_convergence(dnslab_run* run, int* exit_code);

/* Stateless helpers. */

/* DNSLAB_OK when the model coefficients are admissible, otherwise
 * DNSLAB_ERR_VALIDATION with every violation listed in dnslab_last_error. */
dnslab_status dnslab_params_validate(double A, double gamma_, double delta,
                                     double alpha, double beta, double eps,
                                     double eta);

/* out[0..4] = a, e, 2e, slope coefficient a delta/(delta-1), and the
 * pressure scale A gamma/(gamma-1). */
dnslab_status dnslab_derived_constants(double A, double gamma_, double delta,
                                       double alpha, double beta, double out[5]);

/* Exponent window of the power-law density family (q = 0: base norm set,
 * q > 3: the Lq set). */
dnslab_status dnslab_admissible_range(double gamma_, double delta, double q,
                                      double* a_min, double* a_max);

/* JSON header of a snapshot file without reading the payload; free the
 * returned string with dnslab_string_free. */
dnslab_status dnslab_snapshot_header(const char* path, char** out_json);
void dnslab_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* DNSLAB_H */
