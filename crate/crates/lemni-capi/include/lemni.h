#ifndef LEMNI_H
#define LEMNI_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every entry point.
 */
typedef enum {
  LEMNI_STATUS_OK = 0,
  LEMNI_STATUS_NULL_POINTER = 1,
  LEMNI_STATUS_INVALID_ARGUMENT = 2,
  LEMNI_STATUS_UNSUPPORTED = 3,
  LEMNI_STATUS_RUNTIME_ERROR = 4,
  LEMNI_STATUS_PANIC = 5,
} LemniStatus;

/**
 * Disk certificate verdicts (mirrors the library enum).
 */
typedef enum {
  LEMNI_VERDICT_CERTIFIED_INSIDE = 0,
  LEMNI_VERDICT_CERTIFIED_OUTSIDE = 1,
  LEMNI_VERDICT_INCONCLUSIVE = 2,
} LemniVerdict;

/**
 * Opaque raster handle.
 */
typedef struct LemniRaster LemniRaster;

/**
 * Opaque zero-set handle.
 */
typedef struct LemniZeroSet LemniZeroSet;

/**
 * Flattened disk certificate.
 */
typedef struct {
  double center_re;
  double center_im;
  double radius;
  uintptr_t net_size;
  double net_max_log_modulus;
  double lipschitz_bound;
  double margin;
  LemniVerdict verdict;
} LemniDiskCertificate;

/**
 * Inradius estimate of a raster.
 */
typedef struct {
  double rho_hat;
  double center_re;
  double center_im;
  double half_cell_error;
  uintptr_t grid_points_inside;
} LemniInradius;

/**
 * Library version as a static C string.
 */
const char *lemni_version(void);

/**
 * Samples `n` zeros uniformly from the disk of the given radius.
 */
LemniStatus lemni_zeroset_sample_disk(double radius,
                                      uintptr_t n,
                                      uint64_t seed,
                                      LemniZeroSet **out);

/**
 * Samples `n` zeros uniformly from the unit circle.
 */
LemniStatus lemni_zeroset_sample_circle(uintptr_t n, uint64_t seed, LemniZeroSet **out);

/**
 * Normalized Ginibre spectrum of dimension `n` (eigenvalues of A/sqrt(n)).
 */
LemniStatus lemni_zeroset_sample_ginibre(uintptr_t n, uint64_t seed, LemniZeroSet **out);

/**
 * Builds a zero set from parallel re/im arrays of length `len`.
 */
LemniStatus lemni_zeroset_from_points(const double *re,
                                      const double *im,
                                      uintptr_t len,
                                      LemniZeroSet **out);

/**
 * Number of zeros in the set.
 */
LemniStatus lemni_zeroset_len(const LemniZeroSet *handle, uintptr_t *out);

/**
 * Copies zero `index` into the out-pointers.
 */
LemniStatus lemni_zeroset_get(const LemniZeroSet *handle,
                              uintptr_t index,
                              double *out_re,
                              double *out_im);

/**
 * Frees a zero set; null is a no-op.
 */
void lemni_zeroset_free(LemniZeroSet *handle);

/**
 * `log |p(z)|`. `*out_is_neg_inf` is set to 1 when z hits a zero exactly
 * (then `*out` is negative infinity).
 */
LemniStatus lemni_log_modulus(const LemniZeroSet *handle,
                              double z_re,
                              double z_im,
                              double *out,
                              int32_t *out_is_neg_inf);

/**
 * Closed-form potential of the uniform disk measure at z.
 */
LemniStatus lemni_potential_disk(double radius, double z_re, double z_im, double *out);

/**
 * Negative-set inradius r_c of the uniform disk measure family.
 */
LemniStatus lemni_negative_set_inradius_disk(double radius, double *out);

/**
 * Bennett's `h(u) = (1+u) log(1+u) - u`.
 */
LemniStatus lemni_bennett_h(double u, double *out);

/**
 * Bennett tail bound `exp(-(nu/b^2) h(b t / nu))`.
 */
LemniStatus lemni_bennett_bound(double nu, double b, double t, double *out);

/**
 * Attempts to certify `D(center, radius)` inside the lemniscate.
 */
LemniStatus lemni_certify_disk(const LemniZeroSet *handle,
                               double center_re,
                               double center_im,
                               double radius,
                               LemniDiskCertificate *out);

/**
 * Rasterizes the lemniscate over `[xmin, xmax] x [ymin, ymax]` with cell
 * size `h`.
 */
LemniStatus lemni_rasterize(const LemniZeroSet *handle,
                            double xmin,
                            double xmax,
                            double ymin,
                            double ymax,
                            double h,
                            LemniRaster **out);

/**
 * Grid dimensions of a raster.
 */
LemniStatus lemni_raster_shape(const LemniRaster *handle, uintptr_t *out_nx, uintptr_t *out_ny);

/**
 * Inradius estimate of a raster.
 */
LemniStatus lemni_inradius(const LemniRaster *handle, LemniInradius *out);

/**
 * Frees a raster; null is a no-op.
 */
void lemni_raster_free(LemniRaster *handle);

/**
 * One sample of the limit inradius for circle-sampled zeros: rasterizes
 * `{g < 0}` for a truncated Gaussian field draw and returns its inradius.
 */
LemniStatus lemni_limit_inradius_sample(uintptr_t k_truncation,
                                        double box_radius,
                                        double h,
                                        uint64_t seed,
                                        double *out);

#endif  /* LEMNI_H */
