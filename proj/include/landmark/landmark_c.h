#ifndef LANDMARK_C_H
#define LANDMARK_C_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define LMK_API __declspec(dllexport)
#else
#define LMK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as CLI exit codes. */
typedef enum lmk_status {
  LMK_OK = 0,
  LMK_ERR_INPUT = 1,
  LMK_ERR_RUNTIME = 2
} lmk_status;

typedef struct lmk_sample lmk_sample;
typedef struct lmk_result lmk_result;

LMK_API const char* lmk_version(void);

/* Message of the last failed call on this thread; empty after success. */
LMK_API const char* lmk_last_error(void);

/* Parses a run configuration and copies its canonical JSON form, with all
   defaults filled in, into buf. *needed receives the size including the
   terminator; a buffer that is too small gives LMK_ERR_INPUT. An empty
   object gives the default configuration. */
LMK_API lmk_status lmk_config_normalize(const char* config_json, char* buf, size_t cap,
                                        size_t* needed);

/* Executes a full run from a JSON configuration, writing its output files. */
LMK_API lmk_status lmk_run_config(const char* config_json);

/* Writes synthetic curves as CSV files into out_dir. kind is one of "sine",
   "scaled-sine-family", "half-circle", "cut-half-circle". amplitude applies
   to the sine, family_size to the scaled family, cut to the cut half circle. */
LMK_API lmk_status lmk_generate(const char* kind, size_t n_points, double amplitude,
                                size_t family_size, double cut, const char* out_dir);

/* Loads and preprocesses curves from CSV files. closed is 0 or 1. */
LMK_API lmk_status lmk_sample_load_csv(const char* const* paths, size_t n_paths, int closed,
                                       size_t n_eval, lmk_sample** out);

/* Builds a sample from raw coordinates: xy holds x0,y0,x1,y1,... for all
   curves back to back and counts[m] is the point count of curve m. */
LMK_API lmk_status lmk_sample_from_points(const double* xy, const size_t* counts,
                                          size_t n_curves, int closed, size_t n_eval,
                                          lmk_sample** out);

LMK_API size_t lmk_sample_curve_count(const lmk_sample* sample);

/* Summed squared reconstruction error of all curves at landmarks theta. */
LMK_API lmk_status lmk_sample_error_sq(const lmk_sample* sample, const double* theta, size_t k,
                                       double* out);

/* Log posterior at theta with the model section of config_json (NULL or
   "{}" for defaults). variable_k adds the landmark-count prior. */
LMK_API lmk_status lmk_sample_log_posterior(const lmk_sample* sample, const char* config_json,
                                            const double* theta, size_t k, int variable_k,
                                            double* out);

LMK_API void lmk_sample_free(lmk_sample* sample);

/* Runs a fixed-k chain (mode "fixed-k") or a reversible-jump chain (mode
   "rjmcmc") on an in-memory sample. Inputs and output_dir are ignored. */
LMK_API lmk_status lmk_run(const lmk_sample* sample, const char* config_json, lmk_result** out);

LMK_API size_t lmk_result_count(const lmk_result* result);
LMK_API size_t lmk_result_k(const lmk_result* result, size_t index);
LMK_API double lmk_result_log_post(const lmk_result* result, size_t index);
LMK_API double lmk_result_accept_rate(const lmk_result* result);

/* Copies sample `index` into out, which must hold lmk_result_k entries. */
LMK_API lmk_status lmk_result_theta(const lmk_result* result, size_t index, double* out,
                                    size_t cap);

/* Summary JSON owned by the result; valid until lmk_result_free. */
LMK_API const char* lmk_result_summary_json(const lmk_result* result);

/* Writes samples.csv, trace.csv, summary.json and density files. */
LMK_API lmk_status lmk_result_write(const lmk_result* result, const char* out_dir);

LMK_API void lmk_result_free(lmk_result* result);

#ifdef __cplusplus
}
#endif

#endif
