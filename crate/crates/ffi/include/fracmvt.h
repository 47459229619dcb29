#ifndef FRACMVT_H
#define FRACMVT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FmStatus {
  FM_STATUS_OK = 0,
  /**
   * Malformed input: syntax error, bad argument, unbound variable.
   */
  FM_STATUS_INPUT = 1,
  /**
   * Numerical failure: domain error, no witness, non-finite values.
   */
  FM_STATUS_NUMERIC = 2,
  /**
   * A mathematical precondition does not hold.
   */
  FM_STATUS_PRECONDITION = 3,
  /**
   * A required pointer was null, a buffer too short or a string not UTF-8.
   */
  FM_STATUS_INVALID_POINTER = 4,
  /**
   * The library panicked; this is a bug.
   */
  FM_STATUS_INTERNAL = 5,
} FmStatus;

/**
 * Parsed expression in `x` and optionally `y`.
 */
typedef struct FmExpr FmExpr;

/**
 * Right-hand side `f(x, y)` of an initial value problem.
 */
typedef struct FmRhs FmRhs;

typedef struct FmWitness {
  double xi;
  double residual;
  double lo;
  double hi;
  double target;
  bool degenerate;
} FmWitness;

typedef struct FmNagumoReport {
  double sup_ratio;
  bool satisfied;
  /**
   * False when every sampled ratio was zero; the argmax fields are then 0.
   */
  bool has_argmax;
  double argmax_x;
  double argmax_y1;
  double argmax_y2;
  size_t samples_used;
} FmNagumoReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread, NUL-terminated and
 * truncated to `capacity` bytes, into `buf`. Returns the buffer size needed
 * for the whole message, including the terminator.
 *
 * # Safety
 * `buf` must be null or valid for `capacity` bytes of writes.
 */
size_t fracmvt_last_error(char *buf, size_t capacity);

/**
 * Γ(x) for `0 < x <= 30`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum FmStatus fracmvt_gamma(double x, double *out);

/**
 * `E_α(z)` for `α ∈ (0, 1]`, `|z| <= 50`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum FmStatus fracmvt_mittag_leffler(double alpha, double z, double *out);

/**
 * Parses a NUL-terminated UTF-8 expression.
 *
 * # Safety
 * `source` must be a valid C string and `out` valid for writes.
 */
enum FmStatus fracmvt_expr_parse(const char *source, struct FmExpr **out);

/**
 * Evaluates at `(x, y)`; `has_y = false` leaves `y` unbound.
 *
 * # Safety
 * `expr` must come from [`fracmvt_expr_parse`]; `out` valid for writes.
 */
enum FmStatus fracmvt_expr_eval(const struct FmExpr *expr,
                                double x,
                                double y,
                                bool has_y,
                                double *out);

/**
 * # Safety
 * `expr` must be null or come from [`fracmvt_expr_parse`], and not be used
 * afterwards.
 */
void fracmvt_expr_free(struct FmExpr *expr);

/**
 * `J_a^β f` at all `len` nodes of the uniform mesh on `[a, b]`.
 *
 * # Safety
 * `values` and `out` must each hold `len` doubles.
 */
enum FmStatus fracmvt_rl_integral(const double *values,
                                  size_t len,
                                  double a,
                                  double b,
                                  double beta,
                                  double *out);

/**
 * Caputo derivative `D_{*a}^α f` at the `n` nodes of `[a, b]`, through the
 * symbolic `⌈α⌉`-th derivative.
 *
 * # Safety
 * `f` must come from [`fracmvt_expr_parse`]; `out` must hold `n` doubles.
 */
enum FmStatus fracmvt_caputo_smooth(const struct FmExpr *f,
                                    double alpha,
                                    double a,
                                    double b,
                                    size_t n,
                                    double *out);

/**
 * Witness of `J_a^α (f g)(x) = f(ξ) J_a^α g(x)`; a null `g` means `g = 1`,
 * the unweighted theorem on `[a, x]`.
 *
 * # Safety
 * `f` and a non-null `g` must come from [`fracmvt_expr_parse`]; `out`
 * valid for writes.
 */
enum FmStatus fracmvt_integral_mvt_witness(const struct FmExpr *f,
                                           const struct FmExpr *g,
                                           double alpha,
                                           double a,
                                           double x,
                                           size_t n,
                                           struct FmWitness *out);

/**
 * Witness of the differential mean value theorem on `[a, b]`; `n` is the
 * node count of the local meshes.
 *
 * # Safety
 * `f` must come from [`fracmvt_expr_parse`]; `out` valid for writes.
 */
enum FmStatus fracmvt_differential_mvt_witness(const struct FmExpr *f,
                                               double alpha,
                                               double a,
                                               double b,
                                               size_t n,
                                               struct FmWitness *out);

/**
 * Right-hand side from an expression in `x` and `y`. The expression
 * handle stays owned by the caller.
 *
 * # Safety
 * `expr` must come from [`fracmvt_expr_parse`]; `out` valid for writes.
 */
enum FmStatus fracmvt_rhs_from_expr(const struct FmExpr *expr, struct FmRhs **out);

/**
 * `scale ·` the discontinuous right-hand side of order `α ∈ (0, 1)`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum FmStatus fracmvt_rhs_counterexample(double alpha, double scale, struct FmRhs **out);

/**
 * # Safety
 * `rhs` must come from [`fracmvt_rhs_from_expr`] or
 * [`fracmvt_rhs_counterexample`].
 */
enum FmStatus fracmvt_rhs_eval(const struct FmRhs *rhs, double x, double y, double *out);

/**
 * # Safety
 * `rhs` must be null or a live handle, and not be used afterwards.
 */
void fracmvt_rhs_free(struct FmRhs *rhs);

/**
 * Samples the Nagumo ratio on `x = b j / nx` and all pairs of an
 * `ny`-point grid on `[ylo, yhi]`.
 *
 * # Safety
 * `rhs` must be a live handle; `out` valid for writes.
 */
enum FmStatus fracmvt_nagumo_scan(const struct FmRhs *rhs,
                                  double alpha,
                                  double b,
                                  size_t nx,
                                  size_t ny,
                                  double ylo,
                                  double yhi,
                                  struct FmNagumoReport *out);

/**
 * Solves `D_{*0}^α y = f(x, y)`, `y(0) = y0` on `[0, b]` with `steps`
 * uniform steps; `out` receives the `steps + 1` nodal values.
 *
 * # Safety
 * `rhs` must be a live handle; `out` must hold `out_len` doubles.
 */
enum FmStatus fracmvt_ivp_solve(const struct FmRhs *rhs,
                                double alpha,
                                double b,
                                double y0,
                                size_t steps,
                                size_t sweeps,
                                double *out,
                                size_t out_len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FRACMVT_H */
