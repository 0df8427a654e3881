#ifndef PTMODEL_H
#define PTMODEL_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

// Result code of every call.
typedef enum PtmStatus {
  PTM_STATUS_OK = 0,
  PTM_STATUS_ARGUMENT = 1,
  PTM_STATUS_DOMAIN = 2,
  PTM_STATUS_CONTRACT = 3,
  PTM_STATUS_SINGULAR = 4,
  PTM_STATUS_DEGENERATE = 5,
  PTM_STATUS_NOT_POSITIVE = 6,
  PTM_STATUS_NOT_TABULATED = 7,
  PTM_STATUS_AMBIGUOUS = 8,
  PTM_STATUS_INCONSISTENT = 9,
  PTM_STATUS_NO_CONVERGENCE = 10,
  PTM_STATUS_UNSTABLE = 11,
  PTM_STATUS_NULL_POINTER = 12,
  PTM_STATUS_BUFFER_TOO_SMALL = 13,
  PTM_STATUS_PANIC = 14,
} PtmStatus;

// Integration frame, see `ptm_evolve`.
typedef enum PtmFrame {
  PTM_FRAME_S_FULL = 0,
  PTM_FRAME_S_ADIABATIC = 1,
  PTM_FRAME_P_FRAME = 2,
} PtmFrame;

// Time-independent part of the Dyson map for one dimension.
typedef struct PtmDysonMap PtmDysonMap;

// Solved metric polynomial for one dimension.
typedef struct PtmMetricPolynomial PtmMetricPolynomial;

// Sampled evolution: times, states and physical norms.
typedef struct PtmTrajectory PtmTrajectory;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *ptm_version(void);

// Copies the last error message of this thread into `buf` (truncated and
// NUL-terminated) and returns the full message length in bytes, excluding
// the terminator. `buf` may be null to query the length.
//
// # Safety
// `buf` must be null or valid for `len` bytes.
uintptr_t ptm_last_error_message(char *buf, uintptr_t len);

// Hamiltonian H(τ) of dimension `n`.
//
// # Safety
// `out` must be valid for `len` doubles.
enum PtmStatus ptm_hamiltonian(uintptr_t n, double tau, double *out, uintptr_t len);

// The `n` energies at τ ∈ [0, 1], ascending.
//
// # Safety
// `out` must be valid for `len` doubles.
enum PtmStatus ptm_energies(uintptr_t n, double tau, double *out, uintptr_t len);

// Closed-form metric eigenvalues at τ ∈ [0, 1], ascending.
//
// # Safety
// `out` must be valid for `len` doubles.
enum PtmStatus ptm_metric_eigenvalues(uintptr_t n, double tau, double *out, uintptr_t len);

// Row `k` (1-based) of the integer coefficient table of dimension `n`.
//
// # Safety
// `out` must be valid for `len` integers.
enum PtmStatus ptm_pascal_row(uintptr_t n, uintptr_t k, int64_t *out, uintptr_t len);

// Solves the metric polynomial of dimension `n`.
//
// # Safety
// `out` must be valid for one pointer write.
enum PtmStatus ptm_metric_polynomial_solve(uintptr_t n, struct PtmMetricPolynomial **out);

// # Safety
// `poly` must be null or a handle from `ptm_metric_polynomial_solve` not yet freed.
void ptm_metric_polynomial_free(struct PtmMetricPolynomial *poly);

// Metric Θ(τ).
//
// # Safety
// `poly` must be a live handle; `out` valid for `len` doubles.
enum PtmStatus ptm_metric_polynomial_evaluate(const struct PtmMetricPolynomial *poly,
                                              double tau,
                                              double *out,
                                              uintptr_t len);

// Builds the Dyson map of dimension `n`.
//
// # Safety
// `out` must be valid for one pointer write.
enum PtmStatus ptm_dyson_map_new(uintptr_t n, struct PtmDysonMap **out);

// # Safety
// `map` must be null or a handle from `ptm_dyson_map_new` not yet freed.
void ptm_dyson_map_free(struct PtmDysonMap *map);

// Dimension of a Dyson map handle, 0 for null.
//
// # Safety
// `map` must be null or a live handle.
uintptr_t ptm_dyson_map_dim(const struct PtmDysonMap *map);

// Ω(τ) for τ ∈ [0, 1).
//
// # Safety
// `map` must be a live handle; `out` valid for `len` doubles.
enum PtmStatus ptm_dyson_map_omega(const struct PtmDysonMap *map,
                                   double tau,
                                   double *out,
                                   uintptr_t len);

// Hermitian image ΩHΩ⁻¹ at τ ∈ [0, 1).
//
// # Safety
// `map` must be a live handle; `out` valid for `len` doubles.
enum PtmStatus ptm_dyson_map_hermitian(const struct PtmDysonMap *map,
                                       double tau,
                                       double *out,
                                       uintptr_t len);

// Coriolis term Σ(τ), split into real and imaginary parts.
//
// # Safety
// `map` must be a live handle; `re` and `im` valid for `len` doubles each.
enum PtmStatus ptm_dyson_map_coriolis(const struct PtmDysonMap *map,
                                      double tau,
                                      double *re,
                                      double *im,
                                      uintptr_t len);

// Integrates from `tau0` to `tau1` with RK4 steps of `step` in `frame`.
// With `psi0_re`/`psi0_im` both null the ground state of H(`tau0`) is used
// (mapped by Ω in the P frame); otherwise both must hold `n` doubles.
//
// # Safety
// Non-null pointers must be valid as described; `out` valid for one pointer write.
enum PtmStatus ptm_evolve(uintptr_t n,
                          double tau0,
                          double tau1,
                          double step,
                          enum PtmFrame frame,
                          const double *psi0_re,
                          const double *psi0_im,
                          struct PtmTrajectory **out);

// # Safety
// `traj` must be null or a handle from `ptm_evolve` not yet freed.
void ptm_trajectory_free(struct PtmTrajectory *traj);

// Number of samples, 0 for null.
//
// # Safety
// `traj` must be null or a live handle.
uintptr_t ptm_trajectory_len(const struct PtmTrajectory *traj);

// max |norm(τ) − norm(τ₀)| over the trajectory, NaN for null.
//
// # Safety
// `traj` must be null or a live handle.
double ptm_trajectory_norm_drift(const struct PtmTrajectory *traj);

// Sample `index`: its τ, physical norm and state (`n` doubles each part).
// Any output pointer may be null to skip it.
//
// # Safety
// `traj` must be a live handle; non-null outputs valid for the sizes above.
enum PtmStatus ptm_trajectory_sample(const struct PtmTrajectory *traj,
                                     uintptr_t index,
                                     double *tau,
                                     double *phys_norm,
                                     double *re,
                                     double *im);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PTMODEL_H */
