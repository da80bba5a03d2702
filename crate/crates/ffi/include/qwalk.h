/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef QWALK_H
#define QWALK_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QwStatus {
  QW_STATUS_OK = 0,
  QW_STATUS_NULL_POINTER = 1,
  QW_STATUS_INVALID_ARGUMENT = 2,
  QW_STATUS_OUT_OF_RANGE = 3,
  QW_STATUS_BUFFER_TOO_SMALL = 4,
  QW_STATUS_DEGENERATE_PAIR = 5,
  QW_STATUS_INTERNAL = 6,
} QwStatus;

// Complete eigenbasis with the equal-weight gauge for degenerate pairs.
typedef struct QwEigenBasis QwEigenBasis;

// A walker state in the position basis.
typedef struct QwState QwState;

// Coin parameters and lattice size.
typedef struct QwWalk QwWalk;

typedef struct QwBloch {
  double rx;
  double ry;
  double rz;
} QwBloch;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or NULL.
// The pointer stays valid until the next failing call on the thread.
const char *qw_last_error(void);

const char *qw_version(void);

// Walk on `sites` sites with coin `(r, alpha, beta)`.
//
// # Safety
// `out` must be valid for a pointer write.
enum QwStatus qw_walk_new(size_t sites, double r, double alpha, double beta, struct QwWalk **out);

// Walk with the lattice angle `alpha = alpha_n * pi / sites`, exactly.
//
// # Safety
// `out` must be valid for a pointer write.
enum QwStatus qw_walk_new_alpha_n(size_t sites,
                                  double r,
                                  int64_t alpha_n,
                                  double beta,
                                  struct QwWalk **out);

// # Safety
// `walk` must come from `qw_walk_new*` and not be used afterwards. NULL is ignored.
void qw_walk_free(struct QwWalk *walk);

// Number of sites, or 0 for NULL.
//
// # Safety
// `walk` must be NULL or a live handle.
size_t qw_walk_sites(const struct QwWalk *walk);

// Eigenphase `lambda(k, z)` in `[-pi, pi)`.
//
// # Safety
// `walk` must be a live handle and `out` valid for a write.
enum QwStatus qw_eigenphase(const struct QwWalk *walk, size_t k, uint8_t z, double *out);

// All `2N` eigenphases ordered by `k`, then band. `partners` may be NULL;
// otherwise it receives the conjugate wavenumber or -1.
//
// # Safety
// `lambdas` (and `partners` when non-NULL) must hold `len` elements.
enum QwStatus qw_spectrum(const struct QwWalk *walk,
                          double *lambdas,
                          int64_t *partners,
                          size_t len);

// Degeneracy structure. `n` receives the lattice index or -1. Up to
// `unique_cap` unique wavenumbers are written; `unique_len` receives the
// total count (at most 2), so a short buffer can be detected.
//
// # Safety
// Output pointers must be valid; `unique_ks` must hold `unique_cap` elements.
enum QwStatus qw_degeneracy(const struct QwWalk *walk,
                            bool *is_degenerate,
                            int64_t *n,
                            size_t *unique_ks,
                            size_t unique_cap,
                            size_t *unique_len);

// The basis state `|x>|c>`.
//
// # Safety
// `out` must be valid for a pointer write.
enum QwStatus qw_state_new_basis(size_t sites, size_t x, size_t c, struct QwState **out);

// A state from `2 * sites` amplitudes, used as given (not normalized).
//
// # Safety
// `re` and `im` must each hold `2 * sites` elements; `out` valid for a write.
enum QwStatus qw_state_new(size_t sites, const double *re, const double *im, struct QwState **out);

// # Safety
// `state` must come from `qw_state_new*` and not be used afterwards. NULL is ignored.
void qw_state_free(struct QwState *state);

// Copies the `2N` position-basis amplitudes out.
//
// # Safety
// `re` and `im` must hold `len` elements.
enum QwStatus qw_state_amplitudes(const struct QwState *state, double *re, double *im, size_t len);

// Applies one step of `walk` to `state` in place.
//
// # Safety
// Both handles must be live.
enum QwStatus qw_apply_step(const struct QwWalk *walk, struct QwState *state);

// Applies `len` steps, step `t` using bias `rs[t]` with the walk's `alpha` and `beta`.
//
// # Safety
// Both handles must be live; `rs` must hold `len` elements.
enum QwStatus qw_evolve_r_sequence(const struct QwWalk *walk,
                                   struct QwState *state,
                                   const double *rs,
                                   size_t len);

// Closed-form eigenbasis, ordered by `k` then band.
//
// # Safety
// `walk` must be live and `out` valid for a pointer write.
enum QwStatus qw_eigenbasis_new(const struct QwWalk *walk, struct QwEigenBasis **out);

// # Safety
// `basis` must come from `qw_eigenbasis_new` and not be used afterwards. NULL is ignored.
void qw_eigenbasis_free(struct QwEigenBasis *basis);

// Number of basis vectors (`2N`), or 0 for NULL.
//
// # Safety
// `basis` must be NULL or a live handle.
size_t qw_eigenbasis_len(const struct QwEigenBasis *basis);

// Label of basis vector `index`.
//
// # Safety
// `basis` must be live; output pointers valid for writes.
enum QwStatus qw_eigenbasis_label(const struct QwEigenBasis *basis,
                                  size_t index,
                                  size_t *k,
                                  uint8_t *z,
                                  double *lambda);

// Position-basis amplitudes of basis vector `index`.
//
// # Safety
// `basis` must be live; `re` and `im` must hold `len` elements.
enum QwStatus qw_eigenbasis_vector(const struct QwEigenBasis *basis,
                                   size_t index,
                                   double *re,
                                   double *im,
                                   size_t len);

// Bloch vector of the reduced coin state of eigenstate `(k, z)`,
// equal-weight gauge for degenerate pairs.
//
// # Safety
// `walk` must be live and `out` valid for a write.
enum QwStatus qw_bloch_eigenstate(const struct QwWalk *walk,
                                  size_t k,
                                  uint8_t z,
                                  struct QwBloch *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QWALK_H */
