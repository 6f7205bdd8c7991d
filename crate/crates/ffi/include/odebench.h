/* odebench C API: explicit ODE solvers over a C ABI. */

#ifndef ODEBENCH_H
#define ODEBENCH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status of an odebench call.
 */
typedef enum OdebenchCode {
  ODEBENCH_CODE_OK = 0,
  /**
   * A required pointer argument was null.
   */
  ODEBENCH_CODE_NULL_POINTER = 1,
  /**
   * Step size or tolerance settings violate their invariants.
   */
  ODEBENCH_CODE_INVALID_CONFIG = 2,
  /**
   * An rhs evaluation returned NaN or infinity.
   */
  ODEBENCH_CODE_NON_FINITE_EVALUATION = 3,
  /**
   * Index past the end of the trajectory.
   */
  ODEBENCH_CODE_OUT_OF_RANGE = 4,
} OdebenchCode;

/**
 * Fixed-step one-step methods.
 */
typedef enum OdebenchMethod {
  ODEBENCH_METHOD_EULER = 0,
  ODEBENCH_METHOD_HEUN = 1,
  ODEBENCH_METHOD_MIDPOINT = 2,
  ODEBENCH_METHOD_RK4 = 3,
} OdebenchMethod;

/**
 * How an integration run ended.
 */
typedef enum OdebenchOutcome {
  /**
   * Reached the end of the interval.
   */
  ODEBENCH_OUTCOME_COMPLETED = 0,
  /**
   * Values became non-finite or exceeded the overflow guard.
   */
  ODEBENCH_OUTCOME_BLOW_UP = 1,
  /**
   * The adaptive controller could not proceed at the minimum step.
   */
  ODEBENCH_OUTCOME_STEP_UNDERFLOW = 2,
} OdebenchOutcome;

/**
 * An initial value problem behind an opaque handle.
 */
typedef struct OdebenchProblem OdebenchProblem;

/**
 * An integration result behind an opaque handle.
 */
typedef struct OdebenchTrajectory OdebenchTrajectory;

/**
 * Adaptive controller settings (mirrors the library defaults).
 */
typedef struct OdebenchAdaptiveOptions {
  double rel_tol;
  double abs_tol;
  double h_initial;
  double h_min;
  double h_max;
  double safety;
  double growth_limit;
  double shrink_limit;
} OdebenchAdaptiveOptions;

/**
 * `f(x, y, user_data) -> dy/dx`. Must be deterministic and never touch
 * toolkit state. Nullable; null is rejected with
 * [`OdebenchCode::NullPointer`].
 */
typedef double (*OdebenchRhsFn)(double x, double y, void *user_data);

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Default adaptive settings with step bounds sized to an interval length.
 */
struct OdebenchAdaptiveOptions odebench_adaptive_defaults(double span);

/**
 * Creates a problem handle, or returns null when `rhs` is null, the
 * endpoints are not finite, or the interval is empty. Free with
 * [`odebench_problem_free`].
 *
 * # Safety
 * `rhs` must remain callable and `user_data` valid for the handle's
 * lifetime.
 */
struct OdebenchProblem *odebench_problem_new(OdebenchRhsFn rhs,
                                             void *user_data,
                                             double x0,
                                             double y0,
                                             double x_end);

/**
 * # Safety
 * `problem` must be a handle from [`odebench_problem_new`] or null.
 */
void odebench_problem_free(struct OdebenchProblem *problem);

/**
 * Integrates with a fixed-step method; on success writes a trajectory
 * handle to `out`. Blow-up is reported through the trajectory's outcome,
 * not as an error code.
 *
 * # Safety
 * `problem` must be a live problem handle; `out` must be a valid pointer.
 */
enum OdebenchCode odebench_integrate_fixed(const struct OdebenchProblem *problem,
                                           enum OdebenchMethod method,
                                           double h,
                                           struct OdebenchTrajectory **out);

/**
 * Integrates with the adaptive Dormand-Prince 5(4) pair.
 *
 * # Safety
 * `problem` and `out` must be valid; `options` may be null for defaults
 * sized to the problem's interval.
 */
enum OdebenchCode odebench_integrate_adaptive(const struct OdebenchProblem *problem,
                                              const struct OdebenchAdaptiveOptions *options,
                                              struct OdebenchTrajectory **out);

/**
 * Number of `(x, y)` samples in the trajectory (zero for null).
 *
 * # Safety
 * `trajectory` must be a live trajectory handle or null.
 */
size_t odebench_trajectory_len(const struct OdebenchTrajectory *trajectory);

/**
 * Copies sample `index` into `x`/`y`.
 *
 * # Safety
 * `trajectory` must be a live handle; `x` and `y` must be valid pointers.
 */
enum OdebenchCode odebench_trajectory_point(const struct OdebenchTrajectory *trajectory,
                                            size_t index,
                                            double *x,
                                            double *y);

/**
 * # Safety
 * `trajectory` must be a live trajectory handle.
 */
enum OdebenchOutcome odebench_trajectory_outcome(const struct OdebenchTrajectory *trajectory);

/**
 * Where a failed run stopped; NaN for completed runs.
 *
 * # Safety
 * `trajectory` must be a live trajectory handle.
 */
double odebench_trajectory_x_fail(const struct OdebenchTrajectory *trajectory);

/**
 * Total rhs evaluations, including rejected adaptive steps.
 *
 * # Safety
 * `trajectory` must be a live trajectory handle or null.
 */
uint64_t odebench_trajectory_rhs_evaluations(const struct OdebenchTrajectory *trajectory);

/**
 * # Safety
 * `trajectory` must be a live trajectory handle or null.
 */
uint64_t odebench_trajectory_steps_accepted(const struct OdebenchTrajectory *trajectory);

/**
 * # Safety
 * `trajectory` must be a live trajectory handle or null.
 */
uint64_t odebench_trajectory_steps_rejected(const struct OdebenchTrajectory *trajectory);

/**
 * # Safety
 * `trajectory` must be a handle from an integrate call or null.
 */
void odebench_trajectory_free(struct OdebenchTrajectory *trajectory);

/**
 * Advances a single step of the chosen method, writing the new value to
 * `y_next`.
 *
 * # Safety
 * `rhs` must be callable with `user_data`; `y_next` must be valid.
 */
enum OdebenchCode odebench_step(OdebenchRhsFn rhs,
                                void *user_data,
                                enum OdebenchMethod method,
                                double x,
                                double y,
                                double h,
                                double *y_next);

/**
 * Leading-term local truncation error estimate for an Euler step at
 * `(x, y)`, written to `out`.
 *
 * # Safety
 * `rhs` must be callable with `user_data`; `out` must be valid.
 */
enum OdebenchCode odebench_local_truncation_error(OdebenchRhsFn rhs,
                                                  void *user_data,
                                                  double x,
                                                  double y,
                                                  double h,
                                                  double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ODEBENCH_H */
