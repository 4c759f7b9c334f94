#ifndef DGM_SIM_H
#define DGM_SIM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum DgmStatus {
  DGM_STATUS_OK = 0,
  DGM_STATUS_NULL_POINTER = 1,
  DGM_STATUS_INVALID_ARGUMENT = 2,
  DGM_STATUS_DIMENSION_MISMATCH = 3,
  DGM_STATUS_NUMERICAL_FAILURE = 4,
  DGM_STATUS_CONFIG_ERROR = 5,
  DGM_STATUS_INVALID_STATE = 6,
  DGM_STATUS_PANIC = 7,
} DgmStatus;

/**
 * Generator `𝓛` on an `n`-level system.
 */
typedef struct DgmLiouvillian DgmLiouvillian;

/**
 * Network of modules read from a TOML description.
 */
typedef struct DgmNetwork DgmNetwork;

/**
 * Steady projector, reduced resolvent and time-scale of a generator.
 */
typedef struct DgmSteady DgmSteady;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *dgm_version(void);

/**
 * Length in bytes of the last error message on this thread, excluding the NUL; 0 when none.
 */
size_t dgm_last_error_length(void);

/**
 * Copies the last error message into `buf` (NUL-terminated, truncated to `len`).
 * Returns the number of bytes written excluding the NUL, or -1 if `buf` is
 * null or `len` is 0.
 *
 * # Safety
 * `buf` must point to `len` writable bytes.
 */
ptrdiff_t dgm_last_error_message(char *buf, size_t len);

/**
 * Builds `𝓛(ρ) = −i[H, ρ] + Σₖ γₖ D[Lₖ](ρ)` on `dim` levels. `hamiltonian`
 * may be null; `jumps` holds `n_jumps` matrices back to back and `rates`
 * their `n_jumps` rates.
 *
 * # Safety
 * Non-null pointers must reference arrays of the documented sizes; `out`
 * must be writable.
 */
enum DgmStatus dgm_liouvillian_new(size_t dim,
                                   const double *hamiltonian,
                                   size_t n_jumps,
                                   const double *jumps,
                                   const double *rates,
                                   struct DgmLiouvillian **out_handle);

/**
 * # Safety
 * `l` must be null or a handle from this library, not yet freed.
 */
void dgm_liouvillian_free(struct DgmLiouvillian *l);

/**
 * # Safety
 * `l` must be a live handle and `dim` writable.
 */
enum DgmStatus dgm_liouvillian_dim(const struct DgmLiouvillian *l, size_t *dim);

/**
 * `rho_out = 𝓛(rho_in)`.
 *
 * # Safety
 * `l` must be a live handle; both arrays hold `dim × dim` complex entries.
 */
enum DgmStatus dgm_liouvillian_apply(const struct DgmLiouvillian *l,
                                     const double *rho_in,
                                     double *rho_out);

/**
 * `rho_out = e^{t𝓛}(rho_in)`.
 *
 * # Safety
 * As for [`dgm_liouvillian_apply`].
 */
enum DgmStatus dgm_liouvillian_propagate(const struct DgmLiouvillian *l,
                                         double t,
                                         const double *rho_in,
                                         double *rho_out);

/**
 * Steady structure of `l`. `tol ≤ 0` selects the default zero-cluster tolerance.
 *
 * # Safety
 * `l` must be a live handle and `out_handle` writable.
 */
enum DgmStatus dgm_steady_new(const struct DgmLiouvillian *l,
                              double tol,
                              struct DgmSteady **out_handle);

/**
 * # Safety
 * `s` must be null or a live handle.
 */
void dgm_steady_free(struct DgmSteady *s);

/**
 * Dimension of the steady (zero-eigenvalue) subspace of the generator.
 *
 * # Safety
 * `s` must be a live handle and `dim` writable.
 */
enum DgmStatus dgm_steady_kernel_dim(const struct DgmSteady *s, size_t *dim);

/**
 * Dissipative time-scale (inverse spectral gap); infinite for a zero generator.
 *
 * # Safety
 * `s` must be a live handle and `tau` writable.
 */
enum DgmStatus dgm_steady_timescale(const struct DgmSteady *s, double *tau);

/**
 * `rho_out = 𝓟₀(rho_in)`.
 *
 * # Safety
 * `s` must be a live handle; arrays hold `dim × dim` complex entries.
 */
enum DgmStatus dgm_steady_project(const struct DgmSteady *s, const double *rho_in, double *rho_out);

/**
 * Largest spectral-identity residual of `s` against the generator `l`.
 *
 * # Safety
 * Both handles must be live and `residual` writable.
 */
enum DgmStatus dgm_steady_max_residual(const struct DgmSteady *s,
                                       const struct DgmLiouvillian *l,
                                       double *residual);

/**
 * Network from a NUL-terminated TOML description.
 *
 * # Safety
 * `toml` must be a valid C string and `out_handle` writable.
 */
enum DgmStatus dgm_network_from_toml(const char *toml, struct DgmNetwork **out_handle);

/**
 * # Safety
 * `n` must be null or a live handle.
 */
void dgm_network_free(struct DgmNetwork *n);

/**
 * Hilbert-space dimension of the whole network.
 *
 * # Safety
 * `n` must be a live handle and `dim` writable.
 */
enum DgmStatus dgm_network_dim(const struct DgmNetwork *n, size_t *dim);

/**
 * `J_max·|E|·τ_max`.
 *
 * # Safety
 * `n` must be a live handle and `budget` writable.
 */
enum DgmStatus dgm_network_error_budget(const struct DgmNetwork *n, double *budget);

/**
 * Steady-subspace dimension of the edge-free generator, from the product of local projectors.
 *
 * # Safety
 * `n` must be a live handle and `dim` writable.
 */
enum DgmStatus dgm_network_kernel_dim(const struct DgmNetwork *n, size_t *dim);

/**
 * Full generator of the network (dissipators and all edges) as a new handle.
 *
 * # Safety
 * `n` must be a live handle and `out_handle` writable.
 */
enum DgmStatus dgm_network_liouvillian(const struct DgmNetwork *n,
                                       struct DgmLiouvillian **out_handle);

/**
 * Closed-form effective rates of two coupled cavities with one qubit each:
 * `tau_eff_inv[α] = 4τg_α²/(1+4J²τ²)`, `j_eff = −4Jg_Ag_Bτ²/(1+4J²τ²)`.
 *
 * # Safety
 * `tau_eff_inv` must hold 2 doubles and `j_eff` be writable.
 */
enum DgmStatus dgm_jc_effective_rates(double g_a,
                                      double g_b,
                                      double j,
                                      double tau,
                                      double *tau_eff_inv,
                                      double *j_eff);

/**
 * Effective `|01⟩`, `|10⟩` populations of two z-dephasing qubits started in `|01⟩`.
 *
 * # Safety
 * `populations` must hold 2 doubles.
 */
enum DgmStatus dgm_zdephase_populations(double g, double tau, double t, double *populations);

/**
 * Concurrence of a two-qubit density matrix (4 × 4).
 *
 * # Safety
 * `rho` must hold 16 complex entries and `value` be writable.
 */
enum DgmStatus dgm_concurrence(const double *rho, double *value);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DGM_SIM_H */
