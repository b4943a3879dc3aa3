#ifndef PLANEPART_H
#define PLANEPART_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every entry point.
typedef enum PpStatus {
  PP_STATUS_OK = 0,
  PP_STATUS_NULL_POINTER = 1,
  PP_STATUS_INVALID_ARGUMENT = 2,
  PP_STATUS_RESOURCE_LIMIT = 3,
  PP_STATUS_INCONCLUSIVE = 4,
  PP_STATUS_BUFFER_TOO_SMALL = 5,
  PP_STATUS_IO = 6,
  PP_STATUS_INTERNAL = 7,
} PpStatus;

// The polynomials P_0..P_n.
typedef struct PpFamily PpFamily;

// Table of pp(0..=n).
typedef struct PpTable PpTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last error message of this thread into `buf`.
//
// # Safety
// `buf` must point to `cap` writable bytes; `out_len` may be null.
enum PpStatus pp_last_error_message(char *buf, uintptr_t cap, uintptr_t *out_len);

// Computes pp(0..=n). A `mem_cap` of 0 selects the default cap.
//
// # Safety
// `out` must be a valid pointer; the handle is released with `pp_table_free`.
enum PpStatus pp_table_new(uintptr_t n, uint64_t mem_cap_bytes, struct PpTable **out);

// # Safety
// `table` must come from `pp_table_new` and not be used afterwards.
void pp_table_free(struct PpTable *table);

// Largest index held by the table.
//
// # Safety
// `table` must be a live handle and `out` a valid pointer.
enum PpStatus pp_table_n_max(const struct PpTable *table, uintptr_t *out);

// pp(n) in decimal.
//
// # Safety
// `table` must be a live handle; `buf` must point to `cap` writable bytes.
enum PpStatus pp_table_get(const struct PpTable *table,
                           uintptr_t n,
                           char *buf,
                           uintptr_t cap,
                           uintptr_t *out_len);

// Generates P_0..P_n. A `mem_cap` of 0 selects the default cap.
//
// # Safety
// `out` must be a valid pointer; the handle is released with `pp_family_free`.
enum PpStatus pp_family_new(uintptr_t n, uint64_t mem_cap_bytes, struct PpFamily **out);

// # Safety
// `family` must come from `pp_family_new` and not be used afterwards.
void pp_family_free(struct PpFamily *family);

// P_n(x) for a rational `x` written as "p/q" or an integer, returned in
// the same form.
//
// # Safety
// `family` must be a live handle, `x` a NUL-terminated string, `buf` must
// point to `cap` writable bytes.
enum PpStatus pp_family_eval(const struct PpFamily *family,
                             uintptr_t n,
                             const char *x,
                             char *buf,
                             uintptr_t cap,
                             uintptr_t *out_len);

// Largest real zero of P_a·P_b − P_{a+b}, rounded to `decimals` places.
// Writes an empty string when there is none.
//
// # Safety
// `family` must be a live handle; `buf` must point to `cap` writable bytes.
enum PpStatus pp_bo_largest_zero(const struct PpFamily *family,
                                 uintptr_t a,
                                 uintptr_t b,
                                 uintptr_t decimals,
                                 char *buf,
                                 uintptr_t cap,
                                 uintptr_t *out_len);

// Wright's estimate of pp(n) in scientific notation with `digits`
// significant digits.
//
// # Safety
// `buf` must point to `cap` writable bytes; `out_len` may be null.
enum PpStatus pp_wright_estimate(uint64_t n,
                                 uintptr_t digits,
                                 char *buf,
                                 uintptr_t cap,
                                 uintptr_t *out_len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PLANEPART_H */
