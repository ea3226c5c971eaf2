#ifndef ICOSA_H
#define ICOSA_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Verdict on the field discriminant.
 */
typedef enum IcosaDiscStatus {
  ICOSA_DISC_STATUS_ACCEPT = 0,
  ICOSA_DISC_STATUS_REJECT = 1,
  ICOSA_DISC_STATUS_INDETERMINATE = 2,
} IcosaDiscStatus;

/**
 * Result codes.
 */
typedef enum IcosaStatus {
  ICOSA_STATUS_OK = 0,
  ICOSA_STATUS_NULL_POINTER = 1,
  ICOSA_STATUS_INVALID_UTF8 = 2,
  ICOSA_STATUS_PARSE = 3,
  ICOSA_STATUS_INVALID_ARGUMENT = 4,
  ICOSA_STATUS_INTERNAL = 5,
} IcosaStatus;

/**
 * Opaque field certificate.
 */
typedef struct IcosaCertificate IcosaCertificate;

/**
 * Opaque integer polynomial.
 */
typedef struct IcosaPoly IcosaPoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code. Do not free.
 */
const char *icosa_status_message(enum IcosaStatus status);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void icosa_string_free(char *s);

/**
 * Parses an expression such as `x^5 - x^4 - 780x^3 - 1795x^2 + 3106x + 344`.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum IcosaStatus icosa_poly_parse(const char *text, struct IcosaPoly **out);

/**
 * Builds `x^5 - a1 x^4 + a2 x^3 - a3 x^2 + a4 x - a5` from `a[0..5]`.
 *
 * # Safety
 * `a` must point to five readable `int64_t` and `out` must be valid.
 */
enum IcosaStatus icosa_poly_from_search_coeffs(const int64_t *a, struct IcosaPoly **out);

/**
 * Minimal polynomial of the quintic Gauss period for a prime `p = 1 mod 5`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum IcosaStatus icosa_period_polynomial(uint64_t p, struct IcosaPoly **out);

/**
 * Releases a polynomial. Null is ignored.
 *
 * # Safety
 * `poly` must come from this library and not have been freed.
 */
void icosa_poly_free(struct IcosaPoly *poly);

/**
 * Text form of the polynomial; free with [`icosa_string_free`].
 *
 * # Safety
 * `poly` must be a live handle or null.
 */
char *icosa_poly_to_string(const struct IcosaPoly *poly);

/**
 * Decimal discriminant; free with [`icosa_string_free`].
 *
 * # Safety
 * `poly` must be a live handle or null.
 */
char *icosa_poly_discriminant(const struct IcosaPoly *poly);

/**
 * Certifies `poly` against field discriminant `p^e`.
 *
 * # Safety
 * `poly` must be a live handle and `out` a valid pointer.
 */
enum IcosaStatus icosa_verify(const struct IcosaPoly *poly,
                              uint64_t p,
                              uint32_t e,
                              bool certify,
                              uint64_t seed,
                              struct IcosaCertificate **out);

/**
 * Releases a certificate. Null is ignored.
 *
 * # Safety
 * `cert` must come from this library and not have been freed.
 */
void icosa_certificate_free(struct IcosaCertificate *cert);

/**
 * Discriminant verdict of a certificate.
 *
 * # Safety
 * `cert` must be a live handle and `out` a valid pointer.
 */
enum IcosaStatus icosa_certificate_disc_status(const struct IcosaCertificate *cert,
                                               enum IcosaDiscStatus *out);

/**
 * Whether the Galois group was certified to be A5.
 *
 * # Safety
 * `cert` must be a live handle or null.
 */
bool icosa_certificate_is_a5(const struct IcosaCertificate *cert);

/**
 * Ramification index of the most ramified prime above `p`, or 0 if unknown.
 *
 * # Safety
 * `cert` must be a live handle or null.
 */
uint32_t icosa_certificate_e_p(const struct IcosaCertificate *cert);

/**
 * The certificate as a JSON object; free with [`icosa_string_free`].
 *
 * # Safety
 * `cert` must be a live handle or null.
 */
char *icosa_certificate_json(const struct IcosaCertificate *cert);

/**
 * Narrow class number of `Q(sqrt p)` for a prime `p = 1 mod 4`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum IcosaStatus icosa_class_number(uint64_t p, uint64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ICOSA_H */
