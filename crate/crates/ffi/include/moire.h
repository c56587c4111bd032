#ifndef MOIRE_H
#define MOIRE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum MoireStatus {
  MOIRE_STATUS_OK = 0,
  MOIRE_STATUS_NULL_POINTER = 1,
  MOIRE_STATUS_INVALID_ARGUMENT = 2,
  MOIRE_STATUS_DIMENSION_MISMATCH = 3,
  MOIRE_STATUS_BAD_PGM = 4,
  MOIRE_STATUS_NUMERIC = 5,
  MOIRE_STATUS_BUFFER_TOO_SMALL = 6,
  MOIRE_STATUS_PANIC = 7,
} MoireStatus;

/**
 * Opaque grayscale image with `f64` samples in row-major order.
 */
typedef struct MoireImage MoireImage;

/**
 * Spectral repair settings. `guard_dc_radius < 0` selects the automatic guard.
 */
typedef struct MoireRepairParams {
  size_t repair_radius;
  size_t window;
  int64_t guard_dc_radius;
  double detect_threshold;
  double min_amplitude;
  /**
   * 0 = phase-preserving, 1 = component-wise.
   */
  int componentwise;
} MoireRepairParams;

/**
 * One sinusoid `amplitude * sin(2*pi*(freq_u*row + freq_v*col) + phase)`.
 */
typedef struct MoireComponent {
  double amplitude;
  double freq_u;
  double freq_v;
  double phase;
} MoireComponent;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code.
 */
const char *moire_status_string(enum MoireStatus status);

/**
 * Message of the last failure on this thread, or NULL. Valid until the next
 * failing call on the same thread.
 */
const char *moire_last_error_message(void);

/**
 * Creates a `width x height` image. `data` holds `width * height` samples
 * in row-major order, or is NULL for an all-zero image.
 *
 * # Safety
 * `data` must be NULL or point to `width * height` readable doubles; `out`
 * must be a valid pointer.
 */
enum MoireStatus moire_image_new(size_t width,
                                 size_t height,
                                 const double *data,
                                 struct MoireImage **out);

/**
 * Releases an image. NULL is ignored.
 *
 * # Safety
 * `img` must be NULL or a handle returned by this library and not yet freed.
 */
void moire_image_free(struct MoireImage *img);

/**
 * Width in pixels; 0 for NULL.
 *
 * # Safety
 * `img` must be NULL or a live handle.
 */
size_t moire_image_width(const struct MoireImage *img);

/**
 * Height in pixels; 0 for NULL.
 *
 * # Safety
 * `img` must be NULL or a live handle.
 */
size_t moire_image_height(const struct MoireImage *img);

/**
 * Copies the samples into `buf`, which must hold at least `width * height`
 * doubles (`len` is its capacity).
 *
 * # Safety
 * `img` must be a live handle and `buf` must point to `len` writable doubles.
 */
enum MoireStatus moire_image_copy_data(const struct MoireImage *img, double *buf, size_t len);

/**
 * Decodes a P2 or P5 PGM held in memory.
 *
 * # Safety
 * `bytes` must point to `len` readable bytes; `out` must be valid.
 */
enum MoireStatus moire_image_read_pgm(const uint8_t *bytes, size_t len, struct MoireImage **out);

/**
 * Encodes as PGM (`ascii != 0` selects P2). Always stores the encoded size
 * in `*written`; if `buf` is NULL or `cap` is too small nothing is copied and
 * `MOIRE_STATUS_BUFFER_TOO_SMALL` is returned, so callers can size a buffer
 * with a first call.
 *
 * # Safety
 * `img` must be a live handle, `written` valid, and `buf` NULL or pointing
 * to `cap` writable bytes.
 */
enum MoireStatus moire_image_write_pgm(const struct MoireImage *img,
                                       int ascii,
                                       uint8_t *buf,
                                       size_t cap,
                                       size_t *written);

/**
 * PSNR in dB against a 255 peak; identical images give `INFINITY`.
 *
 * # Safety
 * Both handles must be live and `out_db` valid.
 */
enum MoireStatus moire_psnr(const struct MoireImage *reference,
                            const struct MoireImage *test,
                            double *out_db);

/**
 * Default spectral repair settings.
 */
struct MoireRepairParams moire_repair_params_default(void);

/**
 * Denoises with a registered method by name (`"spectral-median"`,
 * `"notch"`, `"median"`, `"mode"`, `"bilateral"`, `"diffusion"`, `"tv"`,
 * `"nlm"`) using default parameters.
 *
 * # Safety
 * `img` must be a live handle, `method` a NUL-terminated string, `out` valid.
 */
enum MoireStatus moire_denoise(const struct MoireImage *img,
                               const char *method,
                               struct MoireImage **out);

/**
 * Spectral repair with explicit settings. `median != 0` selects the
 * spectral median, otherwise the notch baseline. The number of detected
 * peaks is stored in `*peak_count` when it is not NULL.
 *
 * # Safety
 * `img` and `params` must be valid, `out` valid, `peak_count` NULL or valid.
 */
enum MoireStatus moire_denoise_spectral(const struct MoireImage *img,
                                        const struct MoireRepairParams *params,
                                        int median,
                                        struct MoireImage **out,
                                        size_t *peak_count);

/**
 * Adds a sum of sinusoids (frequencies in cycles per pixel) to `img`.
 *
 * # Safety
 * `img` must be live, `components` must point to `count` items (or be NULL
 * when `count == 0`), `out` valid.
 */
enum MoireStatus moire_synthesize(const struct MoireImage *img,
                                  const struct MoireComponent *components,
                                  size_t count,
                                  struct MoireImage **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MOIRE_H */
