#ifndef ISOVERIFY_H
#define ISOVERIFY_H

#include <stdint.h>
#include <stddef.h>

typedef enum IsoStatus {
  ISO_STATUS_OK = 0,
  ISO_STATUS_NULL_POINTER = 1,
  ISO_STATUS_INVALID_UTF8 = 2,
  ISO_STATUS_PARSE = 3,
  ISO_STATUS_INVALID_ARGUMENT = 4,
  ISO_STATUS_SINGULAR_CURVE = 5,
  ISO_STATUS_BAD_REDUCTION = 6,
  ISO_STATUS_IO = 7,
  ISO_STATUS_INTERNAL = 8,
} IsoStatus;

// Opaque elliptic curve over Q.
typedef struct IsoCurve IsoCurve;

// Opaque classical modular polynomial.
typedef struct IsoModPoly IsoModPoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or null. The pointer
// stays valid until the next failing call on this thread.
const char *iso_last_error(void);

// # Safety
// `s` must be null or a string returned by this library.
void iso_string_free(char *s);

// Parses `"a1,a2,a3,a4,a6"` (rationals allowed).
//
// # Safety
// `coeffs` must be a NUL-terminated string; `out` must be writable.
enum IsoStatus iso_curve_new(const char *coeffs, struct IsoCurve **out);

// # Safety
// `c` must be null or a handle from [`iso_curve_new`], freed at most once.
void iso_curve_free(struct IsoCurve *c);

// j-invariant as a reduced fraction string.
//
// # Safety
// `c` must be a live handle; `out` must be writable.
enum IsoStatus iso_curve_j_invariant(const struct IsoCurve *c, char **out);

// Point count and trace of Frobenius at the good prime `p`.
//
// # Safety
// `c` must be a live handle; `count` and `a_p` must be writable.
enum IsoStatus iso_curve_count_points(const struct IsoCurve *c,
                                      uint64_t p,
                                      uint64_t *count,
                                      int64_t *a_p);

// Writes 1 if the reduction at `p` has an `ell`-isogeny over F_p, else 0.
//
// # Safety
// `c` must be a live handle; `admitted` must be writable.
enum IsoStatus iso_curve_local_admits(const struct IsoCurve *c,
                                      uint64_t p,
                                      uint64_t ell,
                                      int *admitted);

// # Safety
// `path` must be a NUL-terminated string; `out` must be writable.
enum IsoStatus iso_modpoly_load(const char *path, struct IsoModPoly **out);

// # Safety
// `m` must be null or a handle from [`iso_modpoly_load`], freed at most once.
void iso_modpoly_free(struct IsoModPoly *m);

// Level N of the polynomial, or 0 for a null handle.
//
// # Safety
// `m` must be null or a live handle.
uint64_t iso_modpoly_level(const struct IsoModPoly *m);

// Distinct roots of `Phi_N(X, j)` in F_p.
//
// # Safety
// `m` must be a live handle; `count` must be writable.
enum IsoStatus iso_modpoly_fp_root_count(const struct IsoModPoly *m,
                                         uint64_t j_mod_p,
                                         uint64_t p,
                                         uint64_t *count);

// Rational roots of `Phi_N(X, j)` with multiplicity, comma-separated and
// sorted; empty when there are none.
//
// # Safety
// `m` must be a live handle, `j` a NUL-terminated rational, `out` writable.
enum IsoStatus iso_modpoly_rational_roots(const struct IsoModPoly *m, const char *j, char **out);

// Class number of the imaginary quadratic discriminant `d`.
//
// # Safety
// `out` must be writable.
enum IsoStatus iso_class_number(int64_t d, uint64_t *out);

// Checks the exceptional-subgroup lemma for `ell` in {2, 3, 5, 7}. Writes
// the number of hypothesis-satisfying classes and whether all conclusions
// hold.
//
// # Safety
// `classes` and `holds` must be writable.
enum IsoStatus iso_lemma_check(uint64_t ell, uint64_t *classes, int *holds);

// Runs the command-line front end on `argv[0..argc]` (without a program
// name). Writes the rendered report to `output` and returns the exit code
// (0 pass, 1 violation, 2 usage or data error); -1 if `output` is null or
// an argument is null or not UTF-8.
//
// # Safety
// `argv` must point to `argc` NUL-terminated strings; `output` writable.
int iso_run(const char *const *argv, uintptr_t argc, char **output);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ISOVERIFY_H */
