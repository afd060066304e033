#ifndef EXTREMAL_DECOMP_H
#define EXTREMAL_DECOMP_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Selector for [`ed_eval`].
typedef enum EdFunction {
  ED_FUNCTION_F = 0,
  ED_FUNCTION_PSI = 1,
  ED_FUNCTION_PSI1 = 2,
  ED_FUNCTION_PSI2 = 3,
  ED_FUNCTION_X0 = 4,
} EdFunction;

// Status codes. Zero is success.
typedef enum EdStatus {
  ED_STATUS_OK = 0,
  ED_STATUS_NULL_POINTER = 1,
  ED_STATUS_DOMAIN = 2,
  ED_STATUS_VALIDITY = 3,
  ED_STATUS_CONSTRAINT = 4,
  ED_STATUS_BRACKET = 5,
  ED_STATUS_RESOURCE = 6,
  ED_STATUS_INFEASIBLE = 7,
  ED_STATUS_POLE_PROXIMITY = 8,
  ED_STATUS_OUT_OF_RANGE = 9,
  ED_STATUS_PANIC = 10,
} EdStatus;

// A quadratic differential with its critical points.
typedef struct EdQuadDiff EdQuadDiff;

// Result of [`ed_verify`].
typedef struct EdReport EdReport;

// Result of [`ed_solve`].
typedef struct EdSolveResult EdSolveResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread; empty after a success.
// The pointer stays valid until the next call on the same thread.
const char *ed_last_error_message(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void ed_string_free(char *s);

// Evaluates one of F, psi, psi1, psi2 (at `x`) or x0 (`x` ignored).
//
// # Safety
// `out` must be valid for writes.
enum EdStatus ed_eval(enum EdFunction function, double delta, double x, double *out);

// Theorem bound for the gaps `alphas[0..len]`.
//
// # Safety
// `alphas` must point to `len` readable doubles; `out` must be writable.
enum EdStatus ed_theorem_bound(size_t n,
                               double gamma,
                               double delta,
                               const double *alphas,
                               size_t len,
                               double *out);

// Per-gap bound for `alphas[0..len]`; `Domain` when some gap is too wide.
//
// # Safety
// Same as [`ed_theorem_bound`].
enum EdStatus ed_per_alpha_bound(size_t n,
                                 double gamma,
                                 double delta,
                                 const double *alphas,
                                 size_t len,
                                 double *out);

// Maximizes the objective with `starts` seeded starting points.
//
// # Safety
// `out` must be writable; the handle is freed with [`ed_solve_result_free`].
enum EdStatus ed_solve(size_t n,
                       double gamma,
                       double delta,
                       size_t starts,
                       uint64_t seed,
                       struct EdSolveResult **out);

// Number of coordinates of the solution; 0 for null.
//
// # Safety
// `h` must be null or a live handle.
size_t ed_solve_result_len(const struct EdSolveResult *h);

// Objective value (natural log of the product); NaN for null.
//
// # Safety
// `h` must be null or a live handle.
double ed_solve_result_objective(const struct EdSolveResult *h);

// Copies coordinate `i` into `out`.
//
// # Safety
// `h` must be null or a live handle; `out` must be writable.
enum EdStatus ed_solve_result_x(const struct EdSolveResult *h, size_t i, double *out);

// # Safety
// `h` must be null or a handle from [`ed_solve`], not yet freed.
void ed_solve_result_free(struct EdSolveResult *h);

// Replays the case analysis for the given parameters.
//
// # Safety
// `out` must be writable; the handle is freed with [`ed_report_free`].
enum EdStatus ed_verify(size_t n, double gamma, double delta, struct EdReport **out);

// 1 when every link of the chain holds, 0 otherwise (and for null).
//
// # Safety
// `h` must be null or a live handle.
int32_t ed_report_all_hold(const struct EdReport *h);

// The report as JSON.
//
// # Safety
// `h` must be a live handle; `out` must be writable.
enum EdStatus ed_report_json(const struct EdReport *h, char **out);

// # Safety
// `h` must be null or a handle from [`ed_verify`], not yet freed.
void ed_report_free(struct EdReport *h);

// Monte-Carlo check; writes the JSON report and the violation count.
//
// # Safety
// `json` and `violations` must be writable; either may be null to skip it.
enum EdStatus ed_montecarlo(size_t n,
                            double gamma,
                            double delta,
                            uint64_t trials,
                            uint64_t seed,
                            uint64_t *violations,
                            char **json);

// Builds Q(w) dw^2 for `n >= 2`, `0 < gamma < n^2`.
//
// # Safety
// `out` must be writable; the handle is freed with [`ed_quaddiff_free`].
enum EdStatus ed_quaddiff_new(size_t n, double gamma, struct EdQuadDiff **out);

// Evaluates Q at `re + i im`; `PoleProximity` near a pole.
//
// # Safety
// `h` must be a live handle; `out_re` and `out_im` must be writable.
enum EdStatus ed_quaddiff_eval(const struct EdQuadDiff *h,
                               double re,
                               double im,
                               double *out_re,
                               double *out_im);

// Number of finite zeros; 0 for null.
//
// # Safety
// `h` must be null or a live handle.
size_t ed_quaddiff_zero_count(const struct EdQuadDiff *h);

// Number of finite poles; 0 for null.
//
// # Safety
// `h` must be null or a live handle.
size_t ed_quaddiff_pole_count(const struct EdQuadDiff *h);

// Copies zero `i`.
//
// # Safety
// `h` must be a live handle; `re` and `im` must be writable.
enum EdStatus ed_quaddiff_zero(const struct EdQuadDiff *h, size_t i, double *re, double *im);

// Copies finite pole `i`.
//
// # Safety
// `h` must be a live handle; `re` and `im` must be writable.
enum EdStatus ed_quaddiff_pole(const struct EdQuadDiff *h, size_t i, double *re, double *im);

// Renders the default trajectory figure as SVG.
//
// # Safety
// `h` must be a live handle; `out` must be writable.
enum EdStatus ed_quaddiff_svg(const struct EdQuadDiff *h, bool orthogonal, char **out);

// # Safety
// `h` must be null or a handle from [`ed_quaddiff_new`], not yet freed.
void ed_quaddiff_free(struct EdQuadDiff *h);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EXTREMAL_DECOMP_H */
