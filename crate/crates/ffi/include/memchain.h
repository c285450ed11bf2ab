#ifndef MEMCHAIN_H
#define MEMCHAIN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

typedef enum MemStatus {
  MEM_STATUS_OK = 0,
  MEM_STATUS_NULL_POINTER = 1,
  MEM_STATUS_INVALID_ARGUMENT = 2,
  MEM_STATUS_DOMAIN = 3,
  MEM_STATUS_CAPABILITY = 4,
  MEM_STATUS_BRANCH_REQUIRED = 5,
  MEM_STATUS_INVALID_CURVE = 6,
  MEM_STATUS_CONFIG = 7,
  MEM_STATUS_NUMERICAL = 8,
  MEM_STATUS_OUT_OF_SCOPE = 9,
  MEM_STATUS_INCONSISTENT = 10,
  MEM_STATUS_BUFFER_TOO_SMALL = 11,
  MEM_STATUS_PANIC = 12,
} MemStatus;

typedef enum MemVerdict {
  MEM_VERDICT_LOCALLY_PASSIVE = 0,
  MEM_VERDICT_LOCALLY_ACTIVE = 1,
  MEM_VERDICT_INCONCLUSIVE = 2,
} MemVerdict;

// Opaque constitutive curve.
typedef struct MemCurve MemCurve;

// Opaque classification report.
typedef struct MemReport MemReport;

// Raised-cosine excitation `offset - amplitude * cos(omega t)`.
typedef struct MemExcitation {
  double amplitude;
  double omega;
  double offset;
} MemExcitation;

// Message of the last failed call on this thread, or null. The pointer
// stays valid until the next call into this library on the same thread.
const char *mem_last_error_message(void);

// Default excitation: amplitude 1, omega 1, offset 1.
struct MemExcitation mem_excitation_default(void);

// Polynomial with ascending coefficients on `[range_min, range_max]`.
//
// # Safety
// `coefficients` must point to `len` readable doubles; `out` must be writable.
enum MemStatus mem_curve_polynomial(const double *coefficients,
                                    uintptr_t len,
                                    double range_min,
                                    double range_max,
                                    struct MemCurve **out);

// `a * tanh(b x)` on `[range_min, range_max]`.
//
// # Safety
// `out` must be writable.
enum MemStatus mem_curve_tanh(double a,
                              double b,
                              double range_min,
                              double range_max,
                              struct MemCurve **out);

// Curve from the JSON curve spec used by the command-line configs.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum MemStatus mem_curve_from_json(const char *json, struct MemCurve **out);

// # Safety
// `curve` must be null or a handle from a `mem_curve_*` constructor that
// has not been freed.
void mem_curve_free(struct MemCurve *curve);

// # Safety
// `curve` must be a live handle; `out` must be writable.
enum MemStatus mem_curve_eval(const struct MemCurve *curve, double x, double *out);

// # Safety
// `curve` must be a live handle; `out` must be writable.
enum MemStatus mem_curve_derivative(const struct MemCurve *curve,
                                    double x,
                                    uint32_t k,
                                    double *out);

// Mean-value point of the curve on `[a, b]`.
//
// # Safety
// `curve` must be a live handle; `out` must be writable.
enum MemStatus mem_curve_mvt(const struct MemCurve *curve, double a, double b, double *out);

// Samples of the depth-`depth` locus over one period of `grid_n` intervals
// into caller buffers of `capacity` doubles each. `written` receives the
// sample count (`grid_n + 1`), also when the buffers are too small.
//
// # Safety
// `curve` must be a live handle; `t`, `u` and `w` must each point to
// `capacity` writable doubles; `written` must be writable.
enum MemStatus mem_analytic_locus(const struct MemCurve *curve,
                                  struct MemExcitation excitation_params,
                                  uint32_t depth,
                                  uintptr_t grid_n,
                                  double *t,
                                  double *u,
                                  double *w,
                                  uintptr_t capacity,
                                  uintptr_t *written);

// Classifies the element `(alpha, beta)` defined by `curve`, using the
// analytic chain and default tolerances.
//
// # Safety
// `curve` must be a live handle; `out` must be writable.
enum MemStatus mem_classify(const struct MemCurve *curve,
                            int32_t alpha,
                            int32_t beta,
                            struct MemExcitation excitation_params,
                            uintptr_t grid_n,
                            struct MemReport **out);

// # Safety
// `report` must be a live handle; `out` must be writable.
enum MemStatus mem_report_verdict(const struct MemReport *report, enum MemVerdict *out);

// The full report as a JSON string, released with [`mem_string_free`].
//
// # Safety
// `report` must be a live handle; `out` must be writable.
enum MemStatus mem_report_to_json(const struct MemReport *report, char **out);

// # Safety
// `report` must be null or a live handle from [`mem_classify`].
void mem_report_free(struct MemReport *report);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void mem_string_free(char *s);

#endif  /* MEMCHAIN_H */
