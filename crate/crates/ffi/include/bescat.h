#ifndef BESCAT_H
#define BESCAT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every entry point.
 */
typedef enum BescatStatus {
  Ok = 0,
  DomainError = 1,
  SingularSystem = 2,
  NearResonance = 3,
  ConfigError = 4,
  NullPointer = 5,
  InternalError = 6,
} BescatStatus;

/**
 * Opaque dimensionless medium handle.
 */
typedef struct BescatMedium BescatMedium;

/**
 * Opaque 2D per-mode solution handle.
 */
typedef struct BescatSolution2D BescatSolution2D;

/**
 * Opaque 3D per-mode solution handle.
 */
typedef struct BescatSolution3D BescatSolution3D;

/**
 * Dimensionless parameter set, mirrored into C.
 */
typedef struct BescatParams {
  double k;
  double tau;
  double delta;
  double lambda;
  double mu;
  double k_p;
  double k_s;
} BescatParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Thread-local message for the most recent failure.
 */
const char *bescat_last_error_message(void);

/**
 * Build a medium from dimensional inputs (SI units) and nondimensionalize.
 *
 * # Safety
 * `out` must be a valid pointer to receive the handle.
 */
enum BescatStatus bescat_medium_create(double rho_b,
                                       double kappa,
                                       double rho_e,
                                       double lambda_t,
                                       double mu_t,
                                       double omega,
                                       double l_d,
                                       struct BescatMedium **out);

/**
 * Copy the dimensionless parameters out of a medium handle.
 *
 * # Safety
 * `medium` must be a live handle from `bescat_medium_create`.
 */
enum BescatStatus bescat_medium_params(const struct BescatMedium *medium, struct BescatParams *out);

/**
 * # Safety
 * `medium` must come from `bescat_medium_create` and not be freed twice.
 */
void bescat_medium_free(struct BescatMedium *medium);

/**
 * Solve the 3D per-mode transmission problem for a single-coefficient
 * incident wave of order n, coefficient index m, optionally normalized.
 *
 * # Safety
 * `medium` must be live; `out` must be valid.
 */
enum BescatStatus bescat_solve3d(const struct BescatMedium *medium,
                                 uint32_t n,
                                 int32_t m,
                                 uint8_t normalized,
                                 struct BescatSolution3D **out);

/**
 * Interior acoustic field at a point with |x| < 1.
 *
 * # Safety
 * Pointers must be valid.
 */
enum BescatStatus bescat_solution3d_interior(const struct BescatSolution3D *sol,
                                             double x,
                                             double y,
                                             double z,
                                             double *out_re,
                                             double *out_im);

/**
 * Exterior total displacement at a point with |x| > 1; writes
 * re/im interleaved as (x_re, x_im, y_re, y_im, z_re, z_im).
 *
 * # Safety
 * `out6` must point to six writable doubles.
 */
enum BescatStatus bescat_solution3d_total_exterior(const struct BescatSolution3D *sol,
                                                   double x,
                                                   double y,
                                                   double z,
                                                   double *out6);

/**
 * Strain-energy density of the exterior total field at a point.
 *
 * # Safety
 * Pointers must be valid.
 */
enum BescatStatus bescat_solution3d_stress_density(const struct BescatSolution3D *sol,
                                                   double x,
                                                   double y,
                                                   double z,
                                                   double *out);

/**
 * # Safety
 * `sol` must come from `bescat_solve3d` and not be freed twice.
 */
void bescat_solution3d_free(struct BescatSolution3D *sol);

/**
 * Solve the 2D disk transmission problem.
 *
 * # Safety
 * `medium` must be live; `out` must be valid.
 */
enum BescatStatus bescat_solve2d(const struct BescatMedium *medium,
                                 uint32_t n,
                                 double amplitude_re,
                                 double amplitude_im,
                                 uint8_t normalized,
                                 struct BescatSolution2D **out);

/**
 * Boundary-localization ratios of the disk solution.
 *
 * # Safety
 * Pointers must be valid.
 */
enum BescatStatus bescat_solution2d_localization(const struct BescatSolution2D *sol,
                                                 double zeta1,
                                                 double zeta2,
                                                 double r_outer,
                                                 double *out_eta_u,
                                                 double *out_eta_us);

/**
 * # Safety
 * `sol` must come from `bescat_solve2d` and not be freed twice.
 */
void bescat_solution2d_free(struct BescatSolution2D *sol);

/**
 * Full diagnostics report as a JSON string (schema 1). The caller owns the
 * string and must release it with `bescat_string_free`.
 *
 * # Safety
 * `medium` must be live; `out_json` must be valid.
 */
enum BescatStatus bescat_diagnostics_json(const struct BescatMedium *medium,
                                          uint32_t n,
                                          int32_t m,
                                          double zeta1,
                                          double zeta2,
                                          double r_outer,
                                          double eta,
                                          double m_level,
                                          char **out_json);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void bescat_string_free(char *s);

/**
 * Parse an experiment configuration and report only its validity; a
 * convenience for bindings that reuse the CLI config format.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string.
 */
enum BescatStatus bescat_config_validate(const char *text);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BESCAT_H */
