/* C interface to the eofbound entanglement-of-formation bound toolkit. */

#pragma once

/* Generated with cbindgen:0.29.4 */

/* Generated by cbindgen from the eofbound-capi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every C-ABI call.
 */
typedef enum EofStatus {
  /**
   * The call succeeded and outputs are valid.
   */
  EOF_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  EOF_STATUS_NULL_ARGUMENT = 1,
  /**
   * Arguments were rejected (bad dimensions, parameter range, or state
   * invariants).
   */
  EOF_STATUS_INVALID_ARGUMENT = 2,
  /**
   * An internal numeric routine failed to converge (or panicked).
   */
  EOF_STATUS_NUMERIC_FAILURE = 3,
} EofStatus;

/**
 * Which piece of the convex hull produced the bound.
 */
typedef enum EofBranch {
  /**
   * Λ ≤ 1 + tol: nothing certified, bound 0.
   */
  EOF_BRANCH_SEPARABLE_POINT = 0,
  /**
   * Bound evaluated on the convex branch R(Λ).
   */
  EOF_BRANCH_CONVEX_BRANCH = 1,
  /**
   * Bound evaluated on the linear segment past the knee.
   */
  EOF_BRANCH_LINEAR_BRANCH = 2,
} EofBranch;

/**
 * Opaque handle to a validated bipartite density matrix.
 */
typedef struct EofDensityMatrix EofDensityMatrix;

/**
 * Lower-bound report; plain-data mirror of the Rust `BoundReport`.
 */
typedef struct EofBoundReport {
  size_t m;
  size_t n;
  /**
   * Trace norm of the partial transpose.
   */
  double ppt_norm;
  /**
   * Trace norm of the realigned matrix.
   */
  double realignment_norm;
  /**
   * Λ = max of the two norms.
   */
  double lambda;
  /**
   * co[R(Λ)] in bits.
   */
  double bound_bits;
  /**
   * 1 if the partial transpose is positive within tolerance.
   */
  int32_t is_ppt;
  /**
   * 1 if the realignment norm certifies entanglement.
   */
  int32_t realignment_detects;
  enum EofBranch branch;
} EofBoundReport;

/**
 * Estimator configuration for [`eof_sandwich`]; zero fields select the
 * library defaults.
 */
typedef struct EofSandwichParams {
  /**
   * Ensemble size; 0 means rank(ρ) + 2.
   */
  size_t ensemble_size;
  /**
   * Total refinement iterations; 0 means the library default.
   */
  size_t iterations;
  uint64_t seed;
  /**
   * Separability tolerance; values ≤ 0 mean the library default.
   */
  double tol;
} EofSandwichParams;

/**
 * Lower/upper bracket from [`eof_sandwich`].
 */
typedef struct EofSandwichResult {
  double lower_bits;
  double upper_bits;
  double gap_bits;
  size_t ensemble_size;
  size_t iterations;
  uint64_t seed;
} EofSandwichResult;

/**
 * Builds a density-matrix handle from `2·(m·n)²` interleaved doubles in
 * row-major order. On success writes a handle that must be released with
 * [`eof_density_matrix_free`].
 *
 * # Safety
 * `data` must point to `2·(m·n)²` readable doubles and `out` must be a
 * valid pointer.
 */
enum EofStatus eof_density_matrix_new(size_t m,
                                      size_t n,
                                      const double *data,
                                      struct EofDensityMatrix **out);

/**
 * Builds a density-matrix handle |ψ⟩⟨ψ| from `2·m·n` interleaved
 * amplitude doubles.
 *
 * # Safety
 * `data` must point to `2·m·n` readable doubles and `out` must be a
 * valid pointer.
 */
enum EofStatus eof_density_matrix_from_pure(size_t m,
                                            size_t n,
                                            const double *data,
                                            struct EofDensityMatrix **out);

/**
 * Isotropic d⊗d state with the given fidelity.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum EofStatus eof_isotropic_state(size_t d, double fidelity, struct EofDensityMatrix **out);

/**
 * 2⊗2 Werner state with singlet weight `p`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum EofStatus eof_werner_2x2(double p, struct EofDensityMatrix **out);

/**
 * The 3⊗3 bound-entangled family (PPT yet entangled), 0 < a < 1.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum EofStatus eof_horodecki_3x3_bes(double a, struct EofDensityMatrix **out);

/**
 * Releases a handle; null is accepted and ignored.
 *
 * # Safety
 * `state` must be a pointer previously returned by a constructor of this
 * library (or null), and must not be used afterwards.
 */
void eof_density_matrix_free(struct EofDensityMatrix *state);

/**
 * Subsystem dimensions of a handle.
 *
 * # Safety
 * All pointers must be valid.
 */
enum EofStatus eof_density_matrix_dims(const struct EofDensityMatrix *state, size_t *m, size_t *n);

/**
 * Full lower-bound pipeline: trace norms, Λ, and co[R(Λ)] in bits.
 *
 * # Safety
 * `state` and `report` must be valid pointers.
 */
enum EofStatus eof_lower_bound(const struct EofDensityMatrix *state, struct EofBoundReport *report);

/**
 * Exact two-qubit EOF (bits); the handle must hold a 2⊗2 state.
 *
 * # Safety
 * `state` and `out` must be valid pointers.
 */
enum EofStatus eof_wootters_eof(const struct EofDensityMatrix *state, double *out);

/**
 * The convex hull co[R(λ)] in bits for 1 ≤ λ ≤ m.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum EofStatus eof_co_r(double lambda, size_t m, double *out);

/**
 * Lower bound plus convex-roof upper estimate.
 *
 * # Safety
 * `state` and `result` must be valid pointers.
 */
enum EofStatus eof_sandwich(const struct EofDensityMatrix *state,
                            struct EofSandwichParams params,
                            struct EofSandwichResult *result);

/**
 * Static description of a status code; never null.
 */
const char *eof_status_message(enum EofStatus status);
