#ifndef BPQN_H
#define BPQN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum BpqnStatus {
  BPQN_STATUS_OK = 0,
  BPQN_STATUS_NULL_POINTER = 1,
  BPQN_STATUS_INVALID_ARGUMENT = 2,
  // n < p + q
  BPQN_STATUS_NOT_REPRESENTABLE = 3,
  BPQN_STATUS_PARSE = 4,
  // Labels disagree, or a circuit cannot be transposed.
  BPQN_STATUS_STRUCTURAL = 5,
  // The value does not fit the output type.
  BPQN_STATUS_OVERFLOW = 6,
  BPQN_STATUS_PANIC = 7,
} BpqnStatus;

// Opaque circuit handle.
typedef struct BpqnCircuit BpqnCircuit;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL. Valid until the
// next call into the library on the same thread.
const char *bpqn_last_error(void);

// Builds the circuit for B(p,q,n) into `*out`.
//
// # Safety
// `out` must be null or valid for writing one pointer.
enum BpqnStatus bpqn_synth(size_t p, size_t q, size_t n, struct BpqnCircuit **out);

// Parses SLP text into `*out`.
//
// # Safety
// `text` must be null or a NUL-terminated string; `out` as in `bpqn_synth`.
enum BpqnStatus bpqn_circuit_parse(const char *text, struct BpqnCircuit **out);

// Releases a handle. NULL is ignored.
//
// # Safety
// `c` must be null or a handle from this library not yet freed.
void bpqn_circuit_free(struct BpqnCircuit *c);

// Number of gates, or 0 for NULL.
//
// # Safety
// `c` must be null or a live handle.
size_t bpqn_circuit_gate_count(const struct BpqnCircuit *c);

// Number of inputs, or 0 for NULL.
//
// # Safety
// `c` must be null or a live handle.
size_t bpqn_circuit_input_count(const struct BpqnCircuit *c);

// Number of outputs, or 0 for NULL.
//
// # Safety
// `c` must be null or a live handle.
size_t bpqn_circuit_output_count(const struct BpqnCircuit *c);

// Writes the SLP text to `*out`; free it with `bpqn_string_free`.
//
// # Safety
// `c` must be null or a live handle; `out` null or writable.
enum BpqnStatus bpqn_circuit_to_slp(const struct BpqnCircuit *c, char **out);

// Writes Graphviz DOT to `*out`; free it with `bpqn_string_free`.
//
// # Safety
// As for `bpqn_circuit_to_slp`.
enum BpqnStatus bpqn_circuit_to_dot(const struct BpqnCircuit *c, char **out);

// Releases a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must be null or a string from this library not yet freed.
void bpqn_string_free(char *s);

// Transposed circuit into `*out` as a new handle.
//
// # Safety
// `c` must be null or a live handle; `out` null or writable.
enum BpqnStatus bpqn_circuit_transpose(const struct BpqnCircuit *c, struct BpqnCircuit **out);

// Sets `*passed` to whether `c` computes B(p,q,n) with exact coefficients.
// Label disagreement is reported as `BPQN_STATUS_STRUCTURAL`.
//
// # Safety
// `c` must be null or a live handle; `passed` null or writable.
enum BpqnStatus bpqn_verify(const struct BpqnCircuit *c,
                            size_t p,
                            size_t q,
                            size_t n,
                            bool *passed);

// Predicted gate count of `bpqn_synth(p, q, n)`.
//
// # Safety
// `out` must be null or writable.
enum BpqnStatus bpqn_recurrence_cost(size_t p, size_t q, size_t n, uint64_t *out);

// Rank of B(p,q,n) over GF(prime).
//
// # Safety
// `out` must be null or writable.
enum BpqnStatus bpqn_rank_mod_prime(size_t p, size_t q, size_t n, uint64_t prime, size_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BPQN_H */
