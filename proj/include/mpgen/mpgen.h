/*
 * C interface to the minimal-pair construction simulator.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function. Functions return an mpgen_status; on any status
 * other than MPGEN_OK and MPGEN_CHECK_FAILED, mpgen_last_error() describes the
 * failure for the calling thread. Strings returned through char** are
 * allocated by the library and released with mpgen_string_free.
 */
#ifndef MPGEN_H
#define MPGEN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(MPGEN_BUILDING)
#define MPGEN_API __declspec(dllexport)
#else
#define MPGEN_API __declspec(dllimport)
#endif
#else
#define MPGEN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as the CLI exit codes. */
typedef enum mpgen_status {
  MPGEN_OK = 0,
  MPGEN_CHECK_FAILED = 1, /* a verification check failed */
  MPGEN_ERR_RUNTIME = 2,  /* bad config, suite validation failure, I/O error */
  MPGEN_ERR_TRACE = 3,    /* trace does not follow the trace schema */
  MPGEN_ERR_ARGUMENT = 4  /* null handle or out-of-range argument */
} mpgen_status;

typedef struct mpgen_config mpgen_config;
typedef struct mpgen_trace mpgen_trace;
typedef struct mpgen_report mpgen_report;

MPGEN_API const char* mpgen_version(void);
MPGEN_API const char* mpgen_last_error(void);
MPGEN_API void mpgen_string_free(char* s);

/* Configs */
MPGEN_API mpgen_status mpgen_config_parse(const char* json, mpgen_config** out);
MPGEN_API mpgen_status mpgen_config_load(const char* path, mpgen_config** out);
MPGEN_API mpgen_status mpgen_config_serialize(const mpgen_config* cfg, char** out);
MPGEN_API uint64_t mpgen_config_horizon(const mpgen_config* cfg);
/* The config's "out" field, or "" when absent. Valid while cfg lives. */
MPGEN_API const char* mpgen_config_out_path(const mpgen_config* cfg);
MPGEN_API void mpgen_config_free(mpgen_config* cfg);

/* Traces */
MPGEN_API mpgen_status mpgen_run(const mpgen_config* cfg, mpgen_trace** out);
MPGEN_API mpgen_status mpgen_reference_run(const mpgen_config* cfg, mpgen_trace** out);
MPGEN_API mpgen_status mpgen_trace_parse(const char* text, mpgen_trace** out);
MPGEN_API mpgen_status mpgen_trace_load(const char* path, mpgen_trace** out);
MPGEN_API mpgen_status mpgen_trace_write(const mpgen_trace* trace, const char* path);
MPGEN_API mpgen_status mpgen_trace_serialize(const mpgen_trace* trace, char** out);
MPGEN_API uint64_t mpgen_trace_horizon(const mpgen_trace* trace);
MPGEN_API size_t mpgen_trace_action_count(const mpgen_trace* trace);
/* Copies up to cap members of A_side[T] into buf; returns the member count. */
MPGEN_API size_t mpgen_trace_members(const mpgen_trace* trace, int side, uint64_t* buf, size_t cap);
MPGEN_API void mpgen_trace_free(mpgen_trace* trace);

/* Verification. checks is a comma-separated list (property2, property3,
 * description, end_to_end, oracle_diff), "all", or NULL for all; the
 * structural checks always run. Returns MPGEN_OK or MPGEN_CHECK_FAILED when a
 * report was produced. */
MPGEN_API mpgen_status mpgen_verify(const mpgen_trace* trace, const mpgen_config* cfg, const char* checks,
                                    mpgen_report** out);
MPGEN_API int mpgen_report_failed(const mpgen_report* report);
MPGEN_API size_t mpgen_report_check_count(const mpgen_report* report);
MPGEN_API mpgen_status mpgen_report_serialize(const mpgen_report* report, char** out);
MPGEN_API void mpgen_report_free(mpgen_report* report);

/* The table Psi for operators (e0, e1) as JSON, with the density of its
 * domain below bound. */
MPGEN_API mpgen_status mpgen_psi(const mpgen_trace* trace, const mpgen_config* cfg, uint64_t e0, uint64_t e1,
                                 uint64_t bound, char** out);

#ifdef __cplusplus
}
#endif

#endif /* MPGEN_H */
