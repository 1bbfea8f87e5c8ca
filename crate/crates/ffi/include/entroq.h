/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef ENTROQ_H
#define ENTROQ_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result code of every fallible call.
 */
typedef enum EntroqStatus {
  ENTROQ_STATUS_OK = 0,
  ENTROQ_STATUS_NULL_POINTER = 1,
  ENTROQ_STATUS_INVALID_ARGUMENT = 2,
  ENTROQ_STATUS_DIMENSION_MISMATCH = 3,
  ENTROQ_STATUS_TOO_LARGE = 4,
  ENTROQ_STATUS_NOT_A_STATE = 5,
  ENTROQ_STATUS_NON_CONVERGENCE = 6,
  ENTROQ_STATUS_INTERNAL = 7,
} EntroqStatus;

/*
 Keyed quantum cipher acting on subsystem `A`.
 */
typedef struct EntroqCipher EntroqCipher;

/*
 Density operator on `A (x) E`.
 */
typedef struct EntroqState EntroqState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread. The pointer stays valid
 until the next failing call on the same thread.
 */
const char *entroq_last_error(void);

/*
 Random state on `n_a` plus `n_e` qubits with the given rank, seeded.

 # Safety
 `out` must be valid for writes.
 */
enum EntroqStatus entroq_state_random(size_t n_a,
                                      size_t n_e,
                                      size_t rank,
                                      uint64_t seed,
                                      struct EntroqState **out);

/*
 Maximally entangled state between `n`-qubit `A` and `E`.

 # Safety
 `out` must be valid for writes.
 */
enum EntroqStatus entroq_state_max_entangled(size_t n, struct EntroqState **out);

/*
 State on `A (x) E` from a row-major complex matrix of side `dim_a * dim_e`
 given as separate real and imaginary arrays.

 # Safety
 `re` and `im` must each point to `(dim_a * dim_e)^2` doubles; `out` must be
 valid for writes.
 */
enum EntroqStatus entroq_state_from_matrix(const double *re,
                                           const double *im,
                                           size_t dim_a,
                                           size_t dim_e,
                                           struct EntroqState **out);

/*
 Joint dimension of the state, or 0 for a null handle.

 # Safety
 `state` must be null or a live handle.
 */
size_t entroq_state_dim(const struct EntroqState *state);

/*
 # Safety
 `state` must be null or a handle not yet freed.
 */
void entroq_state_free(struct EntroqState *state);

/*
 `H_min(A|E)` in bits, certified to within `tol_bits` (0 selects the
 default tolerance).

 # Safety
 `state` must be a live handle and `out` valid for writes.
 */
enum EntroqStatus entroq_cond_min_entropy(const struct EntroqState *state,
                                          double tol_bits,
                                          double *out);

/*
 Uniform Pauli one-time pad on `n` qubits.

 # Safety
 `out` must be valid for writes.
 */
enum EntroqStatus entroq_cipher_full_pad(size_t n, struct EntroqCipher **out);

/*
 Pauli cipher keyed by the AGHP small-bias set on `2n` bits with field
 degree `m`.

 # Safety
 `out` must be valid for writes.
 */
enum EntroqStatus entroq_cipher_ambainis_smith(size_t n, uint32_t m, struct EntroqCipher **out);

/*
 XOR-universal cipher on `n` qubits with the first `key_count` keys.

 # Safety
 `out` must be valid for writes.
 */
enum EntroqStatus entroq_cipher_xor_universal(size_t n,
                                              uint64_t key_count,
                                              struct EntroqCipher **out);

/*
 Number of keys, or 0 for a null handle.

 # Safety
 `cipher` must be null or a live handle.
 */
uint64_t entroq_cipher_key_count(const struct EntroqCipher *cipher);

/*
 # Safety
 `cipher` must be null or a handle not yet freed.
 */
void entroq_cipher_free(struct EntroqCipher *cipher);

/*
 Trace distance between the key-averaged ciphertext of `state` and
 `Omega (x) rho^E`.

 # Safety
 Both handles must be live and `out` valid for writes.
 */
enum EntroqStatus entroq_indist_distance(const struct EntroqCipher *cipher,
                                         const struct EntroqState *state,
                                         double *out);

/*
 Measured bias and nominal bound `(n-1)/2^m` of the AGHP set on `n` bits.

 # Safety
 `measured` and `bound` must be valid for writes.
 */
enum EntroqStatus entroq_aghp_bias(size_t n, uint32_t m, double *measured, double *bound);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ENTROQ_H */
