#ifndef MBQC_XY_H
#define MBQC_XY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * `mbqc_circuit_push_rzx` orientation: `Z` on the lower-indexed qubit.
 */
#define MBQC_ZX_Z_ON_LOWER 0

/**
 * `mbqc_circuit_push_rzx` orientation: `Z` on the higher-indexed qubit.
 */
#define MBQC_ZX_Z_ON_UPPER 1

/**
 * Status codes returned by every fallible function.
 */
typedef enum MbqcStatus {
  MBQC_STATUS_OK = 0,
  MBQC_STATUS_NULL_POINTER = 1,
  MBQC_STATUS_INVALID_UTF8 = 2,
  MBQC_STATUS_PARSE = 3,
  MBQC_STATUS_INVALID_ARGUMENT = 4,
  MBQC_STATUS_SIMULATION = 5,
  MBQC_STATUS_BUFFER_TOO_SMALL = 6,
  MBQC_STATUS_PANIC = 7,
} MbqcStatus;

typedef struct MbqcCircuit MbqcCircuit;

typedef struct MbqcPattern MbqcPattern;

typedef struct MbqcState MbqcState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *mbqc_last_error_message(void);

/**
 * Creates an empty circuit on `n ≥ 1` qubits.
 */
enum MbqcStatus mbqc_circuit_new(size_t n, struct MbqcCircuit **result);

/**
 * Parses a circuit document.
 */
enum MbqcStatus mbqc_circuit_from_json(const char *json, struct MbqcCircuit **result);

void mbqc_circuit_free(struct MbqcCircuit *c);

size_t mbqc_circuit_width(const struct MbqcCircuit *c);

size_t mbqc_circuit_len(const struct MbqcCircuit *c);

enum MbqcStatus mbqc_circuit_push_rz(struct MbqcCircuit *c, size_t qubit, double theta);

enum MbqcStatus mbqc_circuit_push_rx(struct MbqcCircuit *c, size_t qubit, double theta);

/**
 * `exp(−iθ/2 Z⊗X)` on `(qubit, qubit + 1)`; `orientation` is one of the
 * `MBQC_ZX_*` constants.
 */
enum MbqcStatus mbqc_circuit_push_rzx(struct MbqcCircuit *c,
                                      size_t qubit,
                                      double theta,
                                      uint32_t orientation);

enum MbqcStatus mbqc_circuit_push_h(struct MbqcCircuit *c, size_t qubit);

enum MbqcStatus mbqc_circuit_push_cnot(struct MbqcCircuit *c, size_t control, size_t target);

enum MbqcStatus mbqc_circuit_push_swap(struct MbqcCircuit *c, size_t qubit);

enum MbqcStatus mbqc_circuit_push_cz(struct MbqcCircuit *c, size_t qubit);

/**
 * Compiles a circuit to an open-ended pattern.
 */
enum MbqcStatus mbqc_compile(const struct MbqcCircuit *c, struct MbqcPattern **result);

/**
 * Parses a pattern document.
 */
enum MbqcStatus mbqc_pattern_from_json(const char *json, struct MbqcPattern **result);

/**
 * Serializes a pattern document. Release the string with [`mbqc_string_free`].
 */
enum MbqcStatus mbqc_pattern_to_json(const struct MbqcPattern *p, char **result);

void mbqc_string_free(char *s);

void mbqc_pattern_free(struct MbqcPattern *p);

size_t mbqc_pattern_rows(const struct MbqcPattern *p);

size_t mbqc_pattern_cols(const struct MbqcPattern *p);

size_t mbqc_pattern_measurements(const struct MbqcPattern *p);

/**
 * Builds a state from `2 · 2^n` interleaved doubles. The vector must be
 * normalised within 1e-9.
 */
enum MbqcStatus mbqc_state_from_amplitudes(const double *re_im,
                                           size_t num_qubits,
                                           struct MbqcState **result);

void mbqc_state_free(struct MbqcState *s);

size_t mbqc_state_num_qubits(const struct MbqcState *s);

/**
 * Copies the amplitudes into `buffer`, which must hold `2 · 2^n` doubles.
 */
enum MbqcStatus mbqc_state_amplitudes(const struct MbqcState *s, double *buffer, size_t len);

/**
 * `|⟨a|b⟩|²`, with qubits matched by position.
 */
enum MbqcStatus mbqc_state_fidelity(const struct MbqcState *a,
                                    const struct MbqcState *b,
                                    double *result);

/**
 * Runs the all-zero branch. A null `input` means `|+⟩^{⊗n}`.
 */
enum MbqcStatus mbqc_run_positive(const struct MbqcPattern *p,
                                  const struct MbqcState *input,
                                  struct MbqcState **result);

/**
 * Runs with sampled outcomes and feed-forward, returning the
 * frame-corrected output. A null `input` means `|+⟩^{⊗n}`. Outcomes are
 * drawn from ChaCha8 seeded with `seed`, as in `mbqc-xy run --seed`.
 */
enum MbqcStatus mbqc_run_adaptive(const struct MbqcPattern *p,
                                  const struct MbqcState *input,
                                  uint64_t seed,
                                  struct MbqcState **result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MBQC_XY_H */
