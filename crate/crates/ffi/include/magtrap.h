#ifndef MAGTRAP_H
#define MAGTRAP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MagtrapStatus {
  MAGTRAP_STATUS_OK = 0,
  MAGTRAP_STATUS_NULL_POINTER = 1,
  MAGTRAP_STATUS_INVALID_ARGUMENT = 2,
  MAGTRAP_STATUS_CONFIG = 3,
  MAGTRAP_STATUS_NUMERICAL = 4,
  MAGTRAP_STATUS_IO = 5,
  MAGTRAP_STATUS_PANIC = 6,
} MagtrapStatus;

typedef enum MagtrapSymmetry {
  MAGTRAP_SYMMETRY_GAMMA_PLUS = 0,
  MAGTRAP_SYMMETRY_GAMMA_MINUS = 1,
} MagtrapSymmetry;

typedef enum MagtrapSpin {
  MAGTRAP_SPIN_DOWN = 0,
  MAGTRAP_SPIN_UP = 1,
} MagtrapSpin;

/**
 * Opaque trap configuration.
 */
typedef struct MagtrapConfig MagtrapConfig;

/**
 * Opaque lifetime report.
 */
typedef struct MagtrapLifetime MagtrapLifetime;

/**
 * Scalar fields of a lifetime report.
 */
typedef struct MagtrapLifetimeSummary {
  double k;
  double t_vib_s;
  double t_prec_s;
  double log10_t_esc_closed;
  double log10_t_esc_composed;
  double ratio_log10;
  double log10_abs_matrix_element;
  bool outside_validity;
} MagtrapLifetimeSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full message length, or 0 when there is none.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
size_t magtrap_last_error(char *buf, size_t len);

/**
 * `sqrt(4/27)`, the K above which the spin-down stationary point is unstable.
 */
double magtrap_critical_k(void);

/**
 * Builds a config from CGS values.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum MagtrapStatus magtrap_config_new(double b0,
                                      double bperp,
                                      double mu,
                                      double mass,
                                      double spin,
                                      double hbar,
                                      struct MagtrapConfig **out);

/**
 * Builds a config from a preset name (`neutron` or `atom`).
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum MagtrapStatus magtrap_config_preset(const char *name, struct MagtrapConfig **out);

/**
 * Reads a config file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum MagtrapStatus magtrap_config_load(const char *path, struct MagtrapConfig **out);

/**
 * # Safety
 * `cfg` must be null or a handle from a `magtrap_config_*` constructor, freed once.
 */
void magtrap_config_free(struct MagtrapConfig *cfg);

/**
 * The dimensionless parameter K of a config.
 *
 * # Safety
 * `cfg` must be a live handle; `out` must be valid for writes.
 */
enum MagtrapStatus magtrap_config_k(const struct MagtrapConfig *cfg, double *out);

/**
 * The three roots of the secular cubic, by descending real part.
 *
 * # Safety
 * `re` and `im` must each be valid for 3 writes.
 */
enum MagtrapStatus magtrap_secular_roots(double k,
                                         enum MagtrapSymmetry symmetry,
                                         enum MagtrapSpin spin,
                                         double *re,
                                         double *im);

/**
 * Computes the escape-lifetime report for a config.
 *
 * # Safety
 * `cfg` must be a live handle; `out` must be valid for writes.
 */
enum MagtrapStatus magtrap_lifetime_new(const struct MagtrapConfig *cfg,
                                        struct MagtrapLifetime **out);

/**
 * # Safety
 * `report` must be null or a handle from [`magtrap_lifetime_new`], freed once.
 */
void magtrap_lifetime_free(struct MagtrapLifetime *report);

/**
 * # Safety
 * `report` must be a live handle; `out` must be valid for writes.
 */
enum MagtrapStatus magtrap_lifetime_summary(const struct MagtrapLifetime *report,
                                            struct MagtrapLifetimeSummary *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MAGTRAP_H */
