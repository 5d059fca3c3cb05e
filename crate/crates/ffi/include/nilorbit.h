#ifndef NILORBIT_H
#define NILORBIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum NilorbitStatus {
  NILORBIT_STATUS_OK = 0,
  // The computation ran and answered no.
  NILORBIT_STATUS_NEGATIVE_VERDICT = 1,
  NILORBIT_STATUS_INVALID_ARGUMENT = 2,
  NILORBIT_STATUS_PARSE = 3,
  // The orbit lacks the structure the computation needs.
  NILORBIT_STATUS_NOT_ADMISSIBLE = 4,
  NILORBIT_STATUS_INTERNAL = 5,
} NilorbitStatus;

// An orbit handle.
typedef struct NilorbitOrbit NilorbitOrbit;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or null. Valid until the
// next call into this library on the same thread.
const char *nilorbit_last_error(void);

// Library version, a static string.
const char *nilorbit_version(void);

// Parses an orbit file.
//
// # Safety
// `json` is a nul-terminated string; `out` is writable.
enum NilorbitStatus nilorbit_orbit_from_json(const char *json, struct NilorbitOrbit **out);

// Builds a named built-in orbit such as `split-rank2` or `jordan(3,-1,0)`.
//
// # Safety
// `name` is a nul-terminated string; `out` is writable.
enum NilorbitStatus nilorbit_orbit_from_example(const char *name, struct NilorbitOrbit **out);

// Releases an orbit handle; null is ignored.
//
// # Safety
// `orbit` came from this library and is not used afterwards.
void nilorbit_orbit_free(struct NilorbitOrbit *orbit);

// # Safety
// `orbit` is a live handle; `out` is writable.
enum NilorbitStatus nilorbit_orbit_rank(const struct NilorbitOrbit *orbit, size_t *out);

// # Safety
// `orbit` is a live handle; `out` is writable.
enum NilorbitStatus nilorbit_orbit_weight(const struct NilorbitOrbit *orbit, int32_t *out);

// Canonical orbit file text; release it with [`nilorbit_string_free`].
//
// # Safety
// `orbit` is a live handle; `out` is writable.
enum NilorbitStatus nilorbit_orbit_to_json(const struct NilorbitOrbit *orbit, char **out);

// Releases a string returned by this library; null is ignored.
//
// # Safety
// `s` came from this library and is not used afterwards.
void nilorbit_string_free(char *s);

// Structural checks on the orbit: `OK` if all pass, `NEGATIVE_VERDICT`
// otherwise, with the failing checks in [`nilorbit_last_error`].
//
// # Safety
// `orbit` is a live handle.
enum NilorbitStatus nilorbit_orbit_validate(const struct NilorbitOrbit *orbit);

// Whether the limit filtration is a mixed Hodge structure. On
// `NEGATIVE_VERDICT` the diagnosis is in [`nilorbit_last_error`].
//
// # Safety
// `orbit` is a live handle.
enum NilorbitStatus nilorbit_orbit_limit_is_mixed_hodge(const struct NilorbitOrbit *orbit);

// Empirical ε at the zero target over lattice vectors with coefficients
// in `[-bound, bound]` and a dyadic strip grid above `Im z = r`.
// `NEGATIVE_VERDICT` if ε is not positive; `*out` is written either way.
//
// # Safety
// `orbit` is a live handle; `out` is writable.
enum NilorbitStatus nilorbit_estimate_epsilon(const struct NilorbitOrbit *orbit,
                                              int64_t bound,
                                              double r,
                                              size_t grid_re,
                                              size_t grid_y,
                                              double *out);

// Whether `a_i <= eps2 Σ_j a_j + Σ_{j<i} c_ij a_j` forces `a = 0` for
// nonnegative `a`. `lower` holds the strictly lower triangle row by row,
// `size (size - 1) / 2` entries. `OK` if it forces zero,
// `NEGATIVE_VERDICT` if a nonzero solution exists; the Perron root of the
// system goes to `*perron_root` when it is not null.
//
// # Safety
// `lower` points to the stated number of doubles; `perron_root` is null
// or writable.
enum NilorbitStatus nilorbit_triangular_system(const double *lower,
                                               size_t size,
                                               double eps2,
                                               double *perron_root);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NILORBIT_H */
