/*
 * closurevm C API: an instrumented interpreter for a minimal s-expression
 * functional language with first-class closures, deterministic step
 * counting, golden-transcript checking and an empirical polynomiality probe.
 *
 * All functions returning char* hand ownership to the caller; release with
 * clsvm_string_free. Interpreter handles are opaque and single-threaded;
 * independent handles may be used from different threads.
 */
#ifndef CLOSUREVM_H
#define CLOSUREVM_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct clsvm_interp clsvm_interp;

typedef enum clsvm_status {
    CLSVM_OK = 0,          /* success / pass */
    CLSVM_FAIL = 1,        /* a check or probe reported a failure */
    CLSVM_ERR_PARSE = 2,   /* lexical or syntactic error */
    CLSVM_ERR_EVAL = 3,    /* runtime error */
    CLSVM_ERR_FORMAT = 4,  /* malformed transcript / family file */
    CLSVM_ERR_IO = 5,      /* file not readable */
    CLSVM_ERR_USAGE = 6    /* bad arguments to the API itself */
} clsvm_status;

/* depth_limit 0 picks the default (10000 activation records). */
clsvm_interp* clsvm_interp_new(uint32_t depth_limit);
void clsvm_interp_free(clsvm_interp* interp);

/* 1 once the buffer holds at least one form with balanced parentheses and
 * no dangling #' or ' marker; 0 while more input is needed. */
int clsvm_source_complete(const char* src);

/* Evaluates every top-level form in src. On success *out (if non-NULL)
 * receives the newline-joined display of each form's value. On error the
 * one-line diagnostic is available via clsvm_last_error. */
clsvm_status clsvm_eval(clsvm_interp* interp, const char* src, char** out);

/* Last diagnostic for this handle; owned by the handle. */
const char* clsvm_last_error(const clsvm_interp* interp);

/* Output accumulated by the (print ...) builtin; cleared by the call. */
char* clsvm_take_print_output(clsvm_interp* interp);

/* key=value counter listing plus one line per lambda site. */
char* clsvm_counters_report(const clsvm_interp* interp);

/* Runs a transcript file in a fresh instance. CLSVM_OK: all steps matched;
 * CLSVM_FAIL: first mismatch described in *report; CLSVM_ERR_FORMAT /
 * CLSVM_ERR_IO: file problems, diagnostic in *report. */
clsvm_status clsvm_check_transcript(const char* path, char** report);

/* Evaluates a whole program and reports its counters. On a runtime error
 * the report is suppressed and *report carries the diagnostic. */
clsvm_status clsvm_profile_source(const char* src, uint32_t depth_limit, char** report);

typedef struct clsvm_probe_config {
    uint64_t seed;             /* 0 picks 42 */
    uint32_t degree_max;       /* 0 picks 4 */
    uint32_t chi_degree_max;   /* 0 picks 3 */
    const char* sizes;         /* "2..256" or "2,4,8,12"; NULL = 2..256 */
    uint32_t samples_per_size; /* 0 picks 8 */
    uint32_t depth_limit;      /* 0 picks the default */
} clsvm_probe_config;

/* Runs the polynomiality probe described by a family file. CLSVM_OK on a
 * pass verdict, CLSVM_FAIL on a fail verdict (report still filled),
 * CLSVM_ERR_* when the family cannot be evaluated. */
clsvm_status clsvm_probe(const char* family_path, const clsvm_probe_config* config,
                         char** report);

void clsvm_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* CLOSUREVM_H */
