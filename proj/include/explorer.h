/* explorer — autonomous offensive-security exploration engine.
 *
 * C API over the engine core: opaque handles, status codes, thread-local
 * error text. All inputs and outputs are files; the heavy types stay
 * behind the library boundary.
 */
#ifndef EXPLORER_H
#define EXPLORER_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cx_status {
    CX_OK = 0,
    CX_ERR_USAGE = 1,   /* bad arguments (null paths, bad combinations) */
    CX_ERR_CONFIG = 2,  /* malformed or invalid configuration */
    CX_ERR_IO = 3,      /* missing/unreadable/unwritable files */
    CX_ERR_RUNTIME = 4, /* engine failure while executing */
    CX_ERR_PORT_IN_USE = 5
} cx_status;

const char* cx_version(void);
const char* cx_status_name(cx_status status);

/* Last error message for the calling thread; empty string when the last
 * call succeeded. The pointer stays valid until the next call on the same
 * thread. */
const char* cx_last_error(void);

/* Reconnaissance: scan the targets file (JSON) and write the ordered
 * entrypoint queue. trace_path may be NULL; when given, discovery events
 * are appended there. */
cx_status cx_scan(const char* targets_path, const char* out_path, const char* trace_path);

/* Simulated attack surface: a set of loopback HTTP services. */
typedef struct cx_simenv cx_simenv;

cx_status cx_simenv_start(const char* manifest_path, const char* host, cx_simenv** out_env);
int cx_simenv_service_count(const cx_simenv* env);
cx_status cx_simenv_write_ground_truth(const cx_simenv* env, const char* out_path);
/* Stops the services and frees the handle. Safe on NULL. */
cx_status cx_simenv_stop(cx_simenv* env);

/* One full exploration run. run_dir may be NULL (defaults to "runs");
 * force != 0 allows overwriting an existing trace file. */
cx_status cx_run(const char* config_path, const char* entrypoints_path, const char* trace_path,
                 const char* results_path, const char* run_dir, int force);

/* Analytics over one or more recorded traces. oracle_path and plots_dir
 * may be NULL. With several traces the report carries a per-run
 * comparison table. */
cx_status cx_analyze(const char* const* trace_paths, int trace_count, const char* oracle_path,
                     const char* report_path, const char* plots_dir);

/* Re-executes a recorded scripted run and compares the traces
 * (timestamps excluded). Returns CX_OK when identical, CX_ERR_RUNTIME on
 * divergence (cx_last_error holds the first difference). */
cx_status cx_replay(const char* trace_path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* EXPLORER_H */
