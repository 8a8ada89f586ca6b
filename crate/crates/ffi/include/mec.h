#ifndef MEC_H
#define MEC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * How `mec_code_verify` decides.
 */
typedef enum MecMode {
  MEC_MODE_COMBINATORIAL = 0,
  MEC_MODE_EXHAUSTIVE_MINORS = 1,
  MEC_MODE_SAMPLED_MINORS = 2,
  MEC_MODE_EXHAUSTIVE_DISTANCE = 3,
} MecMode;

/**
 * Result codes.
 */
typedef enum MecStatus {
  MEC_STATUS_OK = 0,
  MEC_STATUS_NULL_POINTER = 1,
  MEC_STATUS_INVALID_UTF8 = 2,
  MEC_STATUS_INVALID_JSON = 3,
  MEC_STATUS_INVALID_ARGUMENT = 4,
  MEC_STATUS_BUDGET_EXCEEDED = 5,
  MEC_STATUS_INTERNAL = 6,
} MecStatus;

/**
 * An elliptic code together with its group table.
 */
typedef struct MecCode MecCode;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread. Valid until the next
 * call into the library on the same thread.
 */
const char *mec_last_error(void);

/**
 * Release a string returned by the library.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void mec_string_free(char *s);

/**
 * Maximal length of a nontrivial MDS elliptic code over `F_q`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum MecStatus mec_bound_value(uint64_t q, uint64_t k, bool restricted, uint64_t *out);

/**
 * Build a maximum-length MDS code over `GF(p^a)`.
 *
 * # Safety
 * `out` must be a valid pointer; the handle is released with `mec_code_free`.
 */
enum MecStatus mec_code_build(uint32_t p,
                              uint32_t a,
                              uint64_t k,
                              bool restricted,
                              uint64_t seed,
                              struct MecCode **out);

/**
 * Load a code from its JSON description.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum MecStatus mec_code_from_json(const char *json, struct MecCode **out);

/**
 * # Safety
 * `code` must be null or a handle from this library, freed once.
 */
void mec_code_free(struct MecCode *code);

/**
 * # Safety
 * `code` must be a valid handle.
 */
size_t mec_code_length(const struct MecCode *code);

/**
 * # Safety
 * `code` must be a valid handle.
 */
size_t mec_code_dimension(const struct MecCode *code);

/**
 * JSON description of the code.
 *
 * # Safety
 * `code` must be a valid handle and `out` a valid pointer.
 */
enum MecStatus mec_code_to_json(const struct MecCode *code, char **out);

/**
 * Generator matrix as CSV with a JSON header line.
 *
 * # Safety
 * `code` must be a valid handle and `out` a valid pointer.
 */
enum MecStatus mec_code_generator_csv(const struct MecCode *code, char **out);

/**
 * Decide whether the code is MDS. `samples` and `seed` are used by
 * `SampledMinors` only. On success `*is_mds` is 1 or 0.
 *
 * # Safety
 * `code` must be a valid handle and `is_mds` a valid pointer.
 */
enum MecStatus mec_code_verify(struct MecCode *code,
                               enum MecMode mode,
                               uint64_t samples,
                               uint64_t seed,
                               int32_t *is_mds);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MEC_H */
