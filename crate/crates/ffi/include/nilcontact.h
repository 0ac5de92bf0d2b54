/* C interface for the nilcontact kernel. Generated by cbindgen; do not edit. */

#ifndef NILCONTACT_H
#define NILCONTACT_H



#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible function.
typedef enum NcStatus {
  NcOk = 0,
  NcErrNullArgument = 1,
  NcErrUtf8 = 2,
  NcErrParse = 3,
  NcErrUnknownExample = 4,
  NcErrInvalidInput = 5,
  NcErrInternal = 6,
} NcStatus;

// Opaque problem handle.
typedef struct NcProblem NcProblem;

// Opaque report handle.
typedef struct NcReport NcReport;

// Options shared by every command runner.
typedef struct NcOptions {
  // Absolute tolerance for residual verdicts.
  double tolerance;
  // Random directions drawn by sampled checks.
  uint32_t samples;
  // Seed for sampled checks.
  uint64_t seed;
  // Rescale the basis so the largest structure constant has unit size.
  bool normalize;
} NcOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Default options: tolerance 1e-9, 64 samples, seed 0, normalization on.
struct NcOptions nc_options_default(void);

// Library version as a static NUL-terminated string; do not free.
const char *nc_version(void);

// The last error message on this thread as a newly allocated string
// (empty when no error is recorded); release with `nc_string_free`.
char *nc_last_error_message(void);

// Parse a JSON problem document.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid location; on
// success `*out` owns a problem released with `nc_problem_free`.
enum NcStatus nc_problem_from_json(const char *json, struct NcProblem **out);

// Load a built-in example by name (see the CLI `examples` listing).
//
// # Safety
// `name` must be a NUL-terminated string and `out` a valid location; on
// success `*out` owns a problem released with `nc_problem_free`.
enum NcStatus nc_problem_from_example(const char *name, struct NcProblem **out);

// # Safety
// `problem` must come from a constructor of this library and not already be
// freed; passing NULL is a no-op.
void nc_problem_free(struct NcProblem *problem);

// Jacobi identity and almost-contact axioms.
//
// # Safety
// `problem` must be a live handle; `opts` may be NULL for defaults; `out`
// must be valid and on success receives a report to free with
// `nc_report_free`.
enum NcStatus nc_run_validate(const struct NcProblem *problem,
                              const struct NcOptions *opts,
                              struct NcReport **out);

// Lower central series, center, 2-step flag, nonsingularity verdict.
//
// # Safety
// See `nc_run_validate`.
enum NcStatus nc_run_classify(const struct NcProblem *problem,
                              const struct NcOptions *opts,
                              struct NcReport **out);

// Cosymplectic/Sasakian classification and the bracket consequence grids.
//
// # Safety
// See `nc_run_validate`.
enum NcStatus nc_run_contact(const struct NcProblem *problem,
                             const struct NcOptions *opts,
                             struct NcReport **out);

// Levi-Civita table with torsion/compatibility residuals.
//
// # Safety
// See `nc_run_validate`.
enum NcStatus nc_run_connection(const struct NcProblem *problem,
                                const struct NcOptions *opts,
                                struct NcReport **out);

// Subalgebra geometry; `name` selects one subalgebra from the input or,
// when NULL, runs all of them.
//
// # Safety
// See `nc_run_validate`; `name`, when non-NULL, must be NUL-terminated.
enum NcStatus nc_run_subalg(const struct NcProblem *problem,
                            const char *name,
                            const struct NcOptions *opts,
                            struct NcReport **out);

// 1 when every binding check passes, 0 when some check failed,
// -1 on a NULL handle.
//
// # Safety
// `report` must be a live handle or NULL.
int32_t nc_report_all_pass(const struct NcReport *report);

// Deterministic JSON rendering of the report; release with `nc_string_free`.
//
// # Safety
// `report` must be a live handle.
char *nc_report_to_json(const struct NcReport *report);

// Human-readable rendering of the report; release with `nc_string_free`.
//
// # Safety
// `report` must be a live handle.
char *nc_report_to_text(const struct NcReport *report);

// # Safety
// `report` must come from a runner of this library and not already be
// freed; passing NULL is a no-op.
void nc_report_free(struct NcReport *report);

// # Safety
// `s` must be a string returned by this library and not already freed;
// passing NULL is a no-op.
void nc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NILCONTACT_H */
