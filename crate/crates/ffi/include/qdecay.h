/* C interface of the qdecay resonant-state decay library. */

#ifndef QDECAY_H
#define QDECAY_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Initial-state kind selector for `qd_model_new`.
enum QdKind
#ifdef __cplusplus
  : int32_t
#endif // __cplusplus
 {
  // Both particles in box level alpha; beta is ignored.
  QD_KIND_FACTORIZED_SYMMETRIC = 0,
  // Symmetrized combination of distinct levels alpha and beta.
  QD_KIND_ENTANGLED_SYMMETRIC = 1,
  // Antisymmetrized combination of distinct levels alpha and beta.
  QD_KIND_ENTANGLED_ANTISYMMETRIC = 2,
};
#ifndef __cplusplus
typedef int32_t QdKind;
#endif // __cplusplus

// Status code returned by every fallible entry point.
enum QdStatus
#ifdef __cplusplus
  : int32_t
#endif // __cplusplus
 {
  // Success.
  QD_STATUS_OK = 0,
  // A required pointer argument was null.
  QD_STATUS_NULL_POINTER = 1,
  // Arguments were rejected before any computation (bad kind, bad spec,
  // out-of-range r or t, non-finite input).
  QD_STATUS_INVALID_ARGUMENT = 2,
  // The computation itself failed (pole solver, degenerate state, fit).
  QD_STATUS_NUMERICAL = 3,
};
#ifndef __cplusplus
typedef int32_t QdStatus;
#endif // __cplusplus

// Opaque handle holding the pole table and coefficient matrices for one
// (lambda, a, N, initial state) configuration.
typedef struct QdModel QdModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copy the message of the most recent error on this thread into `buf`
// (NUL-terminated, truncated to `len` bytes). Returns the full message
// length in bytes, or -1 if `buf` is null and `len` nonzero.
int64_t qd_last_error_message(char *buf, size_t len);

// Build a model. `beta` is ignored for the factorized kind. On success
// writes an owned handle to `out`; release it with `qd_model_free`.
QdStatus qd_model_new(double lambda,
                      double a,
                      size_t n_poles,
                      QdKind kind,
                      size_t alpha,
                      size_t beta,
                      struct QdModel **out);

// Release a handle returned by `qd_model_new`. Null is a no-op.
void qd_model_free(struct QdModel *model);

// Number of proper poles in the model's basis.
QdStatus qd_pole_count(const struct QdModel *model, size_t *out);

// Complex wave number kappa_p of proper pole p (1-based).
QdStatus qd_pole(const struct QdModel *model, size_t p, double *out_re, double *out_im);

// Lifetime 1/Gamma_1 of the longest-lived resonance.
QdStatus qd_tau1(const struct QdModel *model, double *out);

// Survival probability S(t), switching from the exact coefficient sums to
// the asymptotic form at the model's switch time.
QdStatus qd_survival(const struct QdModel *model, double t, double *out);

// Nonescape probability P(t), with the same switch policy as S(t).
QdStatus qd_nonescape(const struct QdModel *model, double t, double *out);

// Two-particle wave function Psi(r1, r2; t) in the exact Moshinsky form.
QdStatus qd_psi_exact(const struct QdModel *model,
                      double r1,
                      double r2,
                      double t,
                      double *out_re,
                      double *out_im);

// Single-particle wave function psi_s(r; t) in the exact expansion, for
// the model's potential and box level s.
QdStatus qd_psi_single(const struct QdModel *model,
                       size_t s,
                       double r,
                       double t,
                       double *out_re,
                       double *out_im);

// Faddeyeva function w(z) = exp(-z^2) erfc(-iz).
QdStatus qd_faddeyeva(double z_re, double z_im, double *out_re, double *out_im);

// Moshinsky function M(kappa, t) = w(iz)/2 at z = -exp(-i pi/4) kappa sqrt(t).
QdStatus qd_moshinsky(double kappa_re, double kappa_im, double t, double *out_re, double *out_im);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QDECAY_H */
