#ifndef LAMNORM_H
#define LAMNORM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LnStatus {
  LN_STATUS_OK = 0,
  LN_STATUS_PARSE_ERROR = 1,
  LN_STATUS_DIVERGED = 2,
  LN_STATUS_NOT_CPS = 3,
  LN_STATUS_NULL_ARGUMENT = 10,
  LN_STATUS_INVALID_UTF8 = 11,
  LN_STATUS_NOT_NUMERAL = 12,
  LN_STATUS_INVALID_ARGUMENT = 13,
  LN_STATUS_PANIC = 14,
} LnStatus;

/**
 * A lambda term.
 */
typedef struct LnTerm LnTerm;

/**
 * Normalization strategies, for [`ln_normalize`].
 */
typedef uint32_t LnStrategy;

/**
 * CPS transforms, for [`ln_cps`].
 */
typedef uint32_t LnCpsVariant;

#define LN_STRATEGY_WHNF 0

#define LN_STRATEGY_CBN 1

#define LN_STRATEGY_CBV 2

#define LN_STRATEGY_CPS 3

#define LN_STRATEGY_NBE 4

#define LN_CPS_BY_NAME 0

#define LN_CPS_BY_VALUE 1

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a term. Names starting with `_` are rejected.
 *
 * # Safety
 * `text` must be NULL or a NUL-terminated string, and `out` NULL or valid
 * for writes.
 */
enum LnStatus ln_term_parse(const char *text, struct LnTerm **out);

/**
 * Parses a term that may contain the `_` names the library generates, such
 * as a string returned by [`ln_term_to_string`].
 *
 * # Safety
 * As for [`ln_term_parse`].
 */
enum LnStatus ln_term_parse_generated(const char *text, struct LnTerm **out);

/**
 * Releases a term. NULL is ignored.
 *
 * # Safety
 * `t` must be NULL or a handle returned by this library and not yet freed.
 */
void ln_term_free(struct LnTerm *t);

/**
 * Prints a term in ASCII syntax. Returns NULL if `t` is NULL.
 *
 * # Safety
 * `t` must be NULL or a live handle.
 */
char *ln_term_to_string(const struct LnTerm *t);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must be NULL or a string returned by this library and not yet freed.
 */
void ln_string_free(char *s);

/**
 * Normalizes `t` with at most `fuel` beta steps.
 *
 * On `LN_STATUS_OK` a new handle is stored in `out`. `steps` may be NULL;
 * otherwise it receives the beta steps used, also when the term diverges.
 *
 * # Safety
 * `t` must be a live handle, `out` valid for writes, `steps` NULL or valid
 * for writes.
 */
enum LnStatus ln_normalize(const struct LnTerm *t,
                           LnStrategy strategy,
                           uint64_t fuel,
                           struct LnTerm **out,
                           uint64_t *steps);

/**
 * Normalizes `t` by leftmost-outermost substitution, the reference the
 * other strategies are checked against. Arguments as for [`ln_normalize`].
 *
 * # Safety
 * As for [`ln_normalize`].
 */
enum LnStatus ln_oracle_normalize(const struct LnTerm *t,
                                  uint64_t fuel,
                                  struct LnTerm **out,
                                  uint64_t *steps);

/**
 * True when the terms are equal up to renaming of bound variables. False if
 * either is NULL.
 *
 * # Safety
 * Each argument must be NULL or a live handle.
 */
bool ln_alpha_eq(const struct LnTerm *a, const struct LnTerm *b);

/**
 * True when `t` contains no beta redex. False if `t` is NULL.
 *
 * # Safety
 * `t` must be NULL or a live handle.
 */
bool ln_is_normal(const struct LnTerm *t);

/**
 * CPS-transforms `t`, storing a new handle in `out`.
 *
 * # Safety
 * `t` must be a live handle and `out` valid for writes.
 */
enum LnStatus ln_cps(const struct LnTerm *t, LnCpsVariant variant, struct LnTerm **out);

/**
 * The Church numeral `\f.\x. f (... (f x))` with `n` applications.
 */
struct LnTerm *ln_church_encode(uint64_t n);

/**
 * Reads a Church numeral back as an integer.
 *
 * # Safety
 * `t` must be a live handle and `out` valid for writes.
 */
enum LnStatus ln_church_decode(const struct LnTerm *t, uint64_t *out);

/**
 * Message for the most recent failure on the calling thread, or an empty
 * string after a success. Owned by the library; valid until the next call
 * on the same thread.
 */
const char *ln_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LAMNORM_H */
