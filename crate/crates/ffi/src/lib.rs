//! C ABI over the quintic verifier.
//!
//! Polynomials and certificates are opaque handles owned by the caller and
//! released with their `_free` functions. Strings returned by this library
//! are NUL-terminated and must be released with [`icosa_string_free`].
//! Every fallible call returns an [`IcosaStatus`]; panics are caught at the
//! boundary and reported as [`IcosaStatus::Internal`].

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use icosa_core::cli::certificate_record;
use icosa_core::sanity::{period_polynomial, real_quadratic_class_number};
use icosa_core::verifier::{verify, DiscVerdict, FieldCertificate, GaloisClass, VerifyOptions};
use icosa_core::IntPoly;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IcosaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    Internal = 5,
}

/// Verdict on the field discriminant.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IcosaDiscStatus {
    Accept = 0,
    Reject = 1,
    Indeterminate = 2,
}

/// Opaque integer polynomial.
pub struct IcosaPoly {
    inner: IntPoly,
}

/// Opaque field certificate.
pub struct IcosaCertificate {
    inner: FieldCertificate,
}

fn guard(f: impl FnOnce() -> IcosaStatus) -> IcosaStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(IcosaStatus::Internal)
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Static description of a status code. Do not free.
#[no_mangle]
pub extern "C" fn icosa_status_message(status: IcosaStatus) -> *const c_char {
    let msg: &'static CStr = match status {
        IcosaStatus::Ok => c"ok",
        IcosaStatus::NullPointer => c"null pointer argument",
        IcosaStatus::InvalidUtf8 => c"string is not valid UTF-8",
        IcosaStatus::Parse => c"cannot parse polynomial",
        IcosaStatus::InvalidArgument => c"invalid argument",
        IcosaStatus::Internal => c"internal error",
    };
    msg.as_ptr()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn icosa_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an expression such as `x^5 - x^4 - 780x^3 - 1795x^2 + 3106x + 344`.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn icosa_poly_parse(
    text: *const c_char,
    out: *mut *mut IcosaPoly,
) -> IcosaStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            return IcosaStatus::NullPointer;
        }
        let Ok(s) = CStr::from_ptr(text).to_str() else {
            return IcosaStatus::InvalidUtf8;
        };
        match s.parse::<IntPoly>() {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(IcosaPoly { inner }));
                IcosaStatus::Ok
            }
            Err(_) => IcosaStatus::Parse,
        }
    })
}

/// Builds `x^5 - a1 x^4 + a2 x^3 - a3 x^2 + a4 x - a5` from `a[0..5]`.
///
/// # Safety
/// `a` must point to five readable `int64_t` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn icosa_poly_from_search_coeffs(
    a: *const i64,
    out: *mut *mut IcosaPoly,
) -> IcosaStatus {
    guard(|| {
        if a.is_null() || out.is_null() {
            return IcosaStatus::NullPointer;
        }
        let mut coeffs = [0i64; 5];
        ptr::copy_nonoverlapping(a, coeffs.as_mut_ptr(), 5);
        *out = Box::into_raw(Box::new(IcosaPoly {
            inner: IntPoly::from_search_coeffs(&coeffs),
        }));
        IcosaStatus::Ok
    })
}

/// Minimal polynomial of the quintic Gauss period for a prime `p = 1 mod 5`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn icosa_period_polynomial(p: u64, out: *mut *mut IcosaPoly) -> IcosaStatus {
    guard(|| {
        if out.is_null() {
            return IcosaStatus::NullPointer;
        }
        if p % 5 != 1 || !icosa_core::arith::is_prime_u64(p) || p > 1 << 20 {
            return IcosaStatus::InvalidArgument;
        }
        *out = Box::into_raw(Box::new(IcosaPoly {
            inner: period_polynomial(p),
        }));
        IcosaStatus::Ok
    })
}

/// Releases a polynomial. Null is ignored.
///
/// # Safety
/// `poly` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn icosa_poly_free(poly: *mut IcosaPoly) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// Text form of the polynomial; free with [`icosa_string_free`].
///
/// # Safety
/// `poly` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn icosa_poly_to_string(poly: *const IcosaPoly) -> *mut c_char {
    match poly.as_ref() {
        Some(p) => into_c_string(p.inner.to_string()),
        None => ptr::null_mut(),
    }
}

/// Decimal discriminant; free with [`icosa_string_free`].
///
/// # Safety
/// `poly` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn icosa_poly_discriminant(poly: *const IcosaPoly) -> *mut c_char {
    match poly.as_ref() {
        Some(p) => into_c_string(p.inner.discriminant().to_string()),
        None => ptr::null_mut(),
    }
}

/// Certifies `poly` against field discriminant `p^e`.
///
/// # Safety
/// `poly` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn icosa_verify(
    poly: *const IcosaPoly,
    p: u64,
    e: u32,
    certify: bool,
    seed: u64,
    out: *mut *mut IcosaCertificate,
) -> IcosaStatus {
    guard(|| {
        let Some(poly) = poly.as_ref() else {
            return IcosaStatus::NullPointer;
        };
        if out.is_null() {
            return IcosaStatus::NullPointer;
        }
        let opts = VerifyOptions {
            certify,
            seed,
            ..VerifyOptions::default()
        };
        match verify(&poly.inner, p, e, &opts) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(IcosaCertificate { inner }));
                IcosaStatus::Ok
            }
            Err(_) => IcosaStatus::InvalidArgument,
        }
    })
}

/// Releases a certificate. Null is ignored.
///
/// # Safety
/// `cert` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn icosa_certificate_free(cert: *mut IcosaCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// Discriminant verdict of a certificate.
///
/// # Safety
/// `cert` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn icosa_certificate_disc_status(
    cert: *const IcosaCertificate,
    out: *mut IcosaDiscStatus,
) -> IcosaStatus {
    let (Some(cert), false) = (cert.as_ref(), out.is_null()) else {
        return IcosaStatus::NullPointer;
    };
    *out = match cert.inner.field_disc {
        DiscVerdict::Accept { .. } => IcosaDiscStatus::Accept,
        DiscVerdict::Reject { .. } => IcosaDiscStatus::Reject,
        DiscVerdict::Indeterminate { .. } => IcosaDiscStatus::Indeterminate,
    };
    IcosaStatus::Ok
}

/// Whether the Galois group was certified to be A5.
///
/// # Safety
/// `cert` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn icosa_certificate_is_a5(cert: *const IcosaCertificate) -> bool {
    cert.as_ref()
        .is_some_and(|c| c.inner.galois_class() == Some(GaloisClass::A5Certified))
}

/// Ramification index of the most ramified prime above `p`, or 0 if unknown.
///
/// # Safety
/// `cert` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn icosa_certificate_e_p(cert: *const IcosaCertificate) -> u32 {
    cert.as_ref().and_then(|c| c.inner.e_p()).unwrap_or(0)
}

/// The certificate as a JSON object; free with [`icosa_string_free`].
///
/// # Safety
/// `cert` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn icosa_certificate_json(cert: *const IcosaCertificate) -> *mut c_char {
    let Some(cert) = cert.as_ref() else {
        return ptr::null_mut();
    };
    serde_json_string(&cert.inner).map_or(ptr::null_mut(), into_c_string)
}

fn serde_json_string(cert: &FieldCertificate) -> Option<String> {
    serde_json::to_string(&certificate_record(cert)).ok()
}

/// Narrow class number of `Q(sqrt p)` for a prime `p = 1 mod 4`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn icosa_class_number(p: u64, out: *mut u64) -> IcosaStatus {
    guard(|| {
        if out.is_null() {
            return IcosaStatus::NullPointer;
        }
        if p % 4 != 1 || !icosa_core::arith::is_prime_u64(p) || p > 1 << 24 {
            return IcosaStatus::InvalidArgument;
        }
        *out = real_quadratic_class_number(p);
        IcosaStatus::Ok
    })
}
