#ifndef STREAMDESC_H
#define STREAMDESC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SdStatus {
  SD_STATUS_OK = 0,
  SD_STATUS_NULL_POINTER = 1,
  SD_STATUS_INVALID_ARGUMENT = 2,
  SD_STATUS_BUDGET_TOO_SMALL = 3,
  SD_STATUS_STREAM_TOO_LONG = 4,
  SD_STATUS_SELF_LOOP = 5,
  SD_STATUS_BUFFER_TOO_SMALL = 6,
  SD_STATUS_LENGTH_MISMATCH = 7,
  SD_STATUS_INTERNAL = 99,
} SdStatus;

// Opaque GABE estimator.
typedef struct SdGabe SdGabe;

// Opaque MAEVE estimator.
typedef struct SdMaeve SdMaeve;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last error message of this thread into `buf` (NUL-terminated,
// truncated to `len`). Returns the full message length in bytes, or 0 when
// there is no error.
//
// # Safety
// `buf` must be null or valid for `len` writable bytes.
size_t sd_last_error(char *buf, size_t len);

// Length of a GABE descriptor.
size_t sd_gabe_dim(void);

// Length of a MAEVE descriptor.
size_t sd_maeve_dim(void);

// Creates a GABE estimator storing at most `budget` edges. `n_hint` and
// `stream_len` are optional (0 means unknown); a budget below the minimum
// is accepted only when it covers a declared `stream_len`.
//
// # Safety
// `out` must be valid for one pointer write.
enum SdStatus sd_gabe_new(size_t budget,
                          uint64_t seed,
                          size_t n_hint,
                          size_t stream_len,
                          struct SdGabe **out);

// Feeds one edge of the stream.
//
// # Safety
// `h` must be a live handle from [`sd_gabe_new`].
enum SdStatus sd_gabe_push_edge(struct SdGabe *h, uint32_t u, uint32_t v);

// Writes the descriptor of the stream so far into `out[0..len]`;
// `len` must be at least [`sd_gabe_dim`].
//
// # Safety
// `h` must be a live handle and `out` valid for `len` writes.
enum SdStatus sd_gabe_finalize(const struct SdGabe *h, double *out, size_t len);

// # Safety
// `h` must be null or a handle from [`sd_gabe_new`] not yet freed.
void sd_gabe_free(struct SdGabe *h);

// Creates a MAEVE estimator; arguments as for [`sd_gabe_new`].
//
// # Safety
// `out` must be valid for one pointer write.
enum SdStatus sd_maeve_new(size_t budget,
                           uint64_t seed,
                           size_t n_hint,
                           size_t stream_len,
                           struct SdMaeve **out);

// # Safety
// `h` must be a live handle from [`sd_maeve_new`].
enum SdStatus sd_maeve_push_edge(struct SdMaeve *h, uint32_t u, uint32_t v);

// # Safety
// `h` must be a live handle and `out` valid for `len` writes.
enum SdStatus sd_maeve_finalize(const struct SdMaeve *h, double *out, size_t len);

// # Safety
// `h` must be null or a handle from [`sd_maeve_new`] not yet freed.
void sd_maeve_free(struct SdMaeve *h);

// Canberra distance between `x[0..len]` and `y[0..len]`.
//
// # Safety
// `x` and `y` must be valid for `len` reads (or `len == 0`), `out` for one
// write.
enum SdStatus sd_canberra(const double *x, const double *y, size_t len, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STREAMDESC_H */
