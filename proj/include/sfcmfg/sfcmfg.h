/* sfcmfg: SFC placement simulator and solver suite — public C API.
 *
 * The library is a C++ core exposed through opaque handles and error codes
 * so it can be consumed from C, scripting FFIs, and the bundled CLI without
 * any C++ ABI coupling. All functions return SFC_OK on success; on failure
 * sfc_last_error() carries a thread-local human-readable message.
 */
#ifndef SFCMFG_SFCMFG_H
#define SFCMFG_SFCMFG_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define SFCMFG_API __declspec(dllexport)
#else
#  define SFCMFG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sfc_status {
    SFC_OK = 0,
    SFC_ERR_IO = 1,          /* file missing / unreadable / unwritable */
    SFC_ERR_PARSE = 2,       /* malformed scenario or config document */
    SFC_ERR_INVALID = 3,     /* bad argument or scenario validation failure */
    SFC_ERR_UNSUPPORTED = 4, /* unknown engine or template name */
    SFC_ERR_RUNTIME = 5      /* solver failure (divergence, infeasibility) */
} sfc_status;

typedef struct sfc_scenario sfc_scenario; /* opaque */

SFCMFG_API const char* sfc_version(void);

/* Message for the most recent failure on this thread; empty string if none. */
SFCMFG_API const char* sfc_last_error(void);

/* ---- scenarios ---- */

SFCMFG_API sfc_status sfc_scenario_load(const char* path, sfc_scenario** out);
SFCMFG_API sfc_status sfc_scenario_from_json(const char* json_text, sfc_scenario** out);
SFCMFG_API void sfc_scenario_free(sfc_scenario* scenario);

/* Writes the named template ("paper") to out_path. */
SFCMFG_API sfc_status sfc_scenario_generate(const char* template_name, const char* out_path);

/* Structural validation. *violations receives the number of findings; when
 * nonzero the report text (one finding per line) is copied into buf
 * (truncated to buf_len - 1 characters, always NUL-terminated). buf may be
 * NULL when only the count is wanted. */
SFCMFG_API sfc_status sfc_scenario_validate(const sfc_scenario* scenario, char* buf,
                                            size_t buf_len, int* violations);

SFCMFG_API sfc_status sfc_scenario_name(const sfc_scenario* scenario, char* buf, size_t buf_len);
SFCMFG_API sfc_status sfc_scenario_hash(const sfc_scenario* scenario, uint64_t* out);

/* ---- engine runs ---- */

typedef struct sfc_run_options {
    uint64_t seed;
    int32_t episodes;        /* < 0: engine default */
    double beta_ref;         /* <= 0: default 1 MB */
    const char* config_path; /* optional JSON overrides file; may be NULL */
    const char* policy_in;   /* rl decode-only snapshot; may be NULL */
    const char* policy_out;  /* rl snapshot destination; may be NULL */
} sfc_run_options;

/* Fills an options struct with defaults; call before overriding fields. */
SFCMFG_API void sfc_run_options_init(sfc_run_options* options);

/* Runs one engine ("mfg", "rl", "ga", "oracle"); CSV artifacts land in
 * out_dir. final_objective_ms may be NULL. */
SFCMFG_API sfc_status sfc_run(const sfc_scenario* scenario, const char* engine,
                              const sfc_run_options* options, const char* out_dir,
                              double* final_objective_ms);

typedef struct sfc_sweep_options {
    const char* engines;     /* comma-separated, e.g. "rl,ga" */
    double beta_min;
    double beta_max;
    int32_t steps;
    const uint64_t* seeds;   /* at least one */
    size_t num_seeds;
    int32_t retrain_per_beta;
    sfc_run_options run;     /* shared engine options (seed field ignored) */
} sfc_sweep_options;

SFCMFG_API void sfc_sweep_options_init(sfc_sweep_options* options);

/* Packet-size sweep over the engines' final placements; writes sweep.csv. */
SFCMFG_API sfc_status sfc_sweep(const sfc_scenario* scenario, const sfc_sweep_options* options,
                                const char* out_dir);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SFCMFG_SFCMFG_H */
