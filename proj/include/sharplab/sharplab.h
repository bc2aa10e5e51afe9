#ifndef SHARPLAB_H
#define SHARPLAB_H

/* C interface to the diffuse-interface variational toolbox.
 *
 * Every entry point takes a JSON configuration string and hands back a JSON
 * document describing what was computed.  Returned strings are owned by the
 * session and stay valid until the next call on that session (or until the
 * session is freed).  A session is not thread-safe; use one per thread.
 *
 * Verdict-carrying calls return SLB_VERDICT_FAIL when the computation itself
 * succeeded but a judged acceptance rule failed; the report output is still
 * set in that case.  All other failures leave a message in slb_last_error.
 */

#ifdef __cplusplus
extern "C" {
#endif

typedef enum slb_status {
    SLB_OK = 0,
    SLB_VERDICT_FAIL = 1,
    SLB_INVALID_CONFIG = 2, /* malformed or rejected configuration */
    SLB_GEOMETRY_ERROR = 3, /* domain or interface construction failed */
    SLB_SOLVER_ERROR = 4,   /* Newton, eigensolver, or factorization failure */
    SLB_IO_ERROR = 5,       /* file read/write failure */
    SLB_INTERNAL_ERROR = 6
} slb_status;

typedef struct slb_session slb_session;

slb_session* slb_session_new(void);
void slb_session_free(slb_session* s);

/* Message of the most recent failing call on this session; empty if none. */
const char* slb_last_error(const slb_session* s);

const char* slb_version(void);

/* Run one sweep experiment.  *out receives {"report": ..., "csv": "..."}
 * where "report" is the full self-describing report document and "csv" is
 * the exact row table the CLI persists. */
slb_status slb_run_experiment(slb_session* s, const char* config_json, const char** out);

/* Inner-variation identity audit over random probes, with the optional
 * deformation oracle comparison. */
slb_status slb_check_variations(slb_session* s, const char* config_json, const char** out);

/* Recompute verdicts from a persisted row table.  *out receives
 * {"verdicts": [...], "pass": bool}. */
slb_status slb_judge_rows(slb_session* s, const char* config_json, const char* rows_csv,
                          const char** out);

/* Solve the critical-point equation at the finest eps of the configuration.
 * When out_dir is non-NULL the solution field container, its CSV twin, and a
 * JSON sidecar are written there.  *out receives the SolveResult document. */
slb_status slb_solve(slb_session* s, const char* config_json, const char* out_dir,
                     const char** out);

/* Spectrum of the linearized operator at the finest eps.  *out receives
 * {"rows": [{"k":..,"eigenvalue":..,"residual":..}], "csv": "..."}; with a
 * non-NULL out_dir the eigenfunction field containers are written too. */
slb_status slb_spectrum(slb_session* s, const char* config_json, const char* out_dir,
                        const char** out);

/* Green surface form against the smeared-source oracle for the configured
 * interface probes.  *out receives {"rows": [...], "csv": "...", "pass": b}. */
slb_status slb_green_check(slb_session* s, const char* config_json, const char** out);

#ifdef __cplusplus
}
#endif

#endif /* SHARPLAB_H */
