//! C ABI for the multicomplex kernel.
//!
//! Numbers are opaque `McxNumber` handles created and destroyed by this
//! library. Fallible calls either return a null pointer or an `McxStatus`;
//! in both cases the failing thread keeps the status code and a message,
//! readable through `mcx_last_error_code` / `mcx_last_error_message`,
//! until its next fallible call. Strings returned by the library are
//! owned by the caller and must be released with `mcx_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use mcx_core::docs::{MatrixDocument, NumberDocument, Rep};
use mcx_core::expr::{self, Value};
use mcx_core::{
    from_idempotent, spectral_decompose, to_idempotent, ConjugationMask, Level, McError,
    Multicomplex,
};

/// Status of the most recent fallible call on the current thread.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum McxStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    LevelError = 4,
    DimensionError = 5,
    IndexError = 6,
    NullCone = 7,
    Singular = 8,
    NotSelfAdjoint = 9,
    NotMultiperplex = 10,
    NumericError = 11,
}

thread_local! {
    static LAST_ERROR: RefCell<(McxStatus, CString)> =
        RefCell::new((McxStatus::Ok, CString::default()));
}

fn set_error(code: McxStatus, msg: &str) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = (code, msg));
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = (McxStatus::Ok, CString::default()));
}

fn core_error(e: &McError) -> McxStatus {
    match e {
        McError::NullCone { .. } => McxStatus::NullCone,
        McError::Singular { .. } => McxStatus::Singular,
        McError::NotSelfAdjoint { .. } | McError::NotHermitian => McxStatus::NotSelfAdjoint,
        McError::NotMultiperplex { .. } => McxStatus::NotMultiperplex,
        McError::LevelOutOfRange { .. }
        | McError::LevelMismatch { .. }
        | McError::LevelTooLow(_) => McxStatus::LevelError,
        McError::CoeffLength { .. }
        | McError::DimensionMismatch { .. }
        | McError::FlavorMismatch { .. } => McxStatus::DimensionError,
        McError::UnitOutOfRange { .. } | McError::IndexOutOfRange { .. } => McxStatus::IndexError,
        McError::NonFinite(_) | McError::NoConvergence(_) => McxStatus::NumericError,
    }
}

fn fail<T>(code: McxStatus, msg: &str) -> Option<T> {
    set_error(code, msg);
    None
}

fn fail_core<T>(e: &McError) -> Option<T> {
    set_error(core_error(e), &e.to_string());
    None
}

/// Opaque multicomplex number.
pub struct McxNumber {
    inner: Multicomplex,
}

fn boxed(inner: Multicomplex) -> *mut McxNumber {
    clear_error();
    Box::into_raw(Box::new(McxNumber { inner }))
}

fn opt_ptr(v: Option<Multicomplex>) -> *mut McxNumber {
    match v {
        Some(inner) => boxed(inner),
        None => std::ptr::null_mut(),
    }
}

unsafe fn number_ref<'a>(h: *const McxNumber) -> Option<&'a McxNumber> {
    if h.is_null() {
        return fail(McxStatus::NullPointer, "null number handle");
    }
    Some(unsafe { &*h })
}

unsafe fn utf8_arg<'a>(s: *const c_char, what: &str) -> Option<&'a str> {
    if s.is_null() {
        return fail(McxStatus::NullPointer, &format!("null {what}"));
    }
    match unsafe { CStr::from_ptr(s) }.to_str() {
        Ok(text) => Some(text),
        Err(_) => fail(
            McxStatus::InvalidUtf8,
            &format!("{what} is not valid UTF-8"),
        ),
    }
}

fn leak_string(s: String) -> *mut c_char {
    clear_error();
    CString::new(s.replace('\0', " "))
        .unwrap_or_default()
        .into_raw()
}

fn level_of(n: usize) -> Option<Level> {
    match Level::new(n) {
        Ok(level) => Some(level),
        Err(e) => fail_core(&e),
    }
}

/// Status code of the most recent fallible call on this thread.
#[no_mangle]
pub extern "C" fn mcx_last_error_code() -> McxStatus {
    LAST_ERROR.with(|slot| slot.borrow().0)
}

/// Message of the most recent fallible call on this thread. The pointer
/// stays valid until the next fallible call on the same thread; do not
/// free it.
#[no_mangle]
pub extern "C" fn mcx_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().1.as_ptr())
}

/// Builds a number from `len` standard coefficients in unit-subset
/// bitmask order; `len` must be 2^n. Returns null on error.
/// # Safety
/// `coeffs` must be null or point to `len` readable doubles.
#[no_mangle]
pub unsafe extern "C" fn mcx_number_new(
    n: usize,
    coeffs: *const f64,
    len: usize,
) -> *mut McxNumber {
    let Some(level) = level_of(n) else {
        return std::ptr::null_mut();
    };
    if coeffs.is_null() {
        set_error(McxStatus::NullPointer, "null coefficient pointer");
        return std::ptr::null_mut();
    }
    let slice = unsafe { std::slice::from_raw_parts(coeffs, len) };
    match Multicomplex::from_coeffs(level, slice.to_vec()) {
        Ok(inner) => boxed(inner),
        Err(e) => opt_ptr(fail_core(&e)),
    }
}

/// Parses and evaluates an expression such as "(1 + i1i2)/2" at level
/// `n`. Returns null on error.
/// # Safety
/// `source` must be null or a NUL-terminated string that stays valid for the call.
#[no_mangle]
pub unsafe extern "C" fn mcx_number_from_expr(n: usize, source: *const c_char) -> *mut McxNumber {
    let Some(level) = level_of(n) else {
        return std::ptr::null_mut();
    };
    let Some(text) = (unsafe { utf8_arg(source, "expression") }) else {
        return std::ptr::null_mut();
    };
    let parsed = match expr::parse(text, level) {
        Ok(p) => p,
        Err(e) => {
            set_error(McxStatus::ParseError, &e.to_string());
            return std::ptr::null_mut();
        }
    };
    match expr::eval(&parsed, level, mcx_core::DEFAULT_TOL) {
        Ok(Value::M1(z)) => boxed(Multicomplex::from_coeffs(level, vec![z.re, z.im]).unwrap()),
        Ok(value) => match value.as_rep() {
            Ok(rep) => boxed(from_idempotent(&rep)),
            Err(e) => opt_ptr(fail_core(&e)),
        },
        Err(e) => opt_ptr(fail_core(&e)),
    }
}

/// Deserializes a number document, either representation.
/// # Safety
/// `text` must be null or a NUL-terminated string that stays valid for the call.
#[no_mangle]
pub unsafe extern "C" fn mcx_number_from_json(text: *const c_char) -> *mut McxNumber {
    let Some(text) = (unsafe { utf8_arg(text, "document") }) else {
        return std::ptr::null_mut();
    };
    let doc: NumberDocument = match serde_json::from_str(text) {
        Ok(d) => d,
        Err(e) => {
            set_error(McxStatus::ParseError, &format!("malformed document: {e}"));
            return std::ptr::null_mut();
        }
    };
    match doc.to_multicomplex() {
        Ok(inner) => boxed(inner),
        Err(e) => opt_ptr(fail_core(&e)),
    }
}

/// Serializes to a number document; `idempotent` selects the
/// representation and requires level 2 or more. Free the result with
/// `mcx_string_free`.
/// # Safety
/// `h` must be null or a live handle returned by this library.
#[no_mangle]
pub unsafe extern "C" fn mcx_number_to_json(h: *const McxNumber, idempotent: bool) -> *mut c_char {
    let Some(num) = (unsafe { number_ref(h) }) else {
        return std::ptr::null_mut();
    };
    let rep = if idempotent {
        Rep::Idempotent
    } else {
        Rep::Standard
    };
    let doc = match NumberDocument::from_multicomplex(&num.inner, rep) {
        Ok(d) => d,
        Err(e) => {
            set_error(core_error(&e), &e.to_string());
            return std::ptr::null_mut();
        }
    };
    match serde_json::to_string(&doc) {
        Ok(text) => leak_string(text),
        Err(e) => {
            set_error(McxStatus::NumericError, &e.to_string());
            std::ptr::null_mut()
        }
    }
}

/// Human-readable standard form, terms in graded order. Free with
/// `mcx_string_free`.
/// # Safety
/// `h` must be null or a live handle returned by this library.
#[no_mangle]
pub unsafe extern "C" fn mcx_number_render(h: *const McxNumber) -> *mut c_char {
    let Some(num) = (unsafe { number_ref(h) }) else {
        return std::ptr::null_mut();
    };
    leak_string(mcx_core::render::fmt_standard(&num.inner))
}

/// # Safety
/// `h` must be null or a live handle returned by this library.
#[no_mangle]
pub unsafe extern "C" fn mcx_number_clone(h: *const McxNumber) -> *mut McxNumber {
    let Some(num) = (unsafe { number_ref(h) }) else {
        return std::ptr::null_mut();
    };
    boxed(num.inner.clone())
}

/// Releases a number handle. Null is ignored.
/// # Safety
/// `h` must be null or an unfreed handle returned by this library; it is invalid after the call.
#[no_mangle]
pub unsafe extern "C" fn mcx_number_free(h: *mut McxNumber) {
    if !h.is_null() {
        drop(unsafe { Box::from_raw(h) });
    }
}

/// Level n of the number, or 0 for a null handle.
/// # Safety
/// `h` must be null or a live handle returned by this library.
#[no_mangle]
pub unsafe extern "C" fn mcx_number_level(h: *const McxNumber) -> usize {
    match unsafe { number_ref(h) } {
        Some(num) => num.inner.level().get(),
        None => 0,
    }
}

/// Number of standard coefficients (2^n), or 0 for a null handle.
/// # Safety
/// `h` must be null or a live handle returned by this library.
#[no_mangle]
pub unsafe extern "C" fn mcx_number_coeff_count(h: *const McxNumber) -> usize {
    match unsafe { number_ref(h) } {
        Some(num) => num.inner.level().coeff_count(),
        None => 0,
    }
}

/// Copies the standard coefficients into `out`, which must hold exactly
/// 2^n values.
/// # Safety
/// `h` must be null or a live handle returned by this library.
/// `out` must be null or point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn mcx_number_coeffs(
    h: *const McxNumber,
    out: *mut f64,
    len: usize,
) -> McxStatus {
    let Some(num) = (unsafe { number_ref(h) }) else {
        return McxStatus::NullPointer;
    };
    if out.is_null() {
        set_error(McxStatus::NullPointer, "null output pointer");
        return McxStatus::NullPointer;
    }
    let want = num.inner.level().coeff_count();
    if len != want {
        set_error(
            McxStatus::DimensionError,
            &format!("output length {len}, need {want}"),
        );
        return McxStatus::DimensionError;
    }
    let out = unsafe { std::slice::from_raw_parts_mut(out, len) };
    out.copy_from_slice(num.inner.coeffs());
    clear_error();
    McxStatus::Ok
}

/// Copies the canonical components into `out` as interleaved re, im
/// pairs; `len` must be 2 * 2^(n-1). Requires level 2 or more.
/// # Safety
/// `h` must be null or a live handle returned by this library.
/// `out` must be null or point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn mcx_number_components(
    h: *const McxNumber,
    out: *mut f64,
    len: usize,
) -> McxStatus {
    let Some(num) = (unsafe { number_ref(h) }) else {
        return McxStatus::NullPointer;
    };
    if out.is_null() {
        set_error(McxStatus::NullPointer, "null output pointer");
        return McxStatus::NullPointer;
    }
    let rep = match to_idempotent(&num.inner) {
        Ok(r) => r,
        Err(e) => {
            set_error(core_error(&e), &e.to_string());
            return core_error(&e);
        }
    };
    let want = 2 * rep.components().len();
    if len != want {
        set_error(
            McxStatus::DimensionError,
            &format!("output length {len}, need {want}"),
        );
        return McxStatus::DimensionError;
    }
    let out = unsafe { std::slice::from_raw_parts_mut(out, len) };
    for (k, z) in rep.components().iter().enumerate() {
        out[2 * k] = z.re;
        out[2 * k + 1] = z.im;
    }
    clear_error();
    McxStatus::Ok
}

unsafe fn binary_op(
    a: *const McxNumber,
    b: *const McxNumber,
    f: impl Fn(&Multicomplex, &Multicomplex) -> Result<Multicomplex, McError>,
) -> *mut McxNumber {
    let (Some(x), Some(y)) = (unsafe { number_ref(a) }, unsafe { number_ref(b) }) else {
        return std::ptr::null_mut();
    };
    match f(&x.inner, &y.inner) {
        Ok(inner) => boxed(inner),
        Err(e) => opt_ptr(fail_core(&e)),
    }
}

/// # Safety
/// `a` and `b` must each be null or live handles returned by this library.
#[no_mangle]
pub unsafe extern "C" fn mcx_number_add(
    a: *const McxNumber,
    b: *const McxNumber,
) -> *mut McxNumber {
    unsafe { binary_op(a, b, |x, y| x.add(y)) }
}

/// # Safety
/// `a` and `b` must each be null or live handles returned by this library.
#[no_mangle]
pub unsafe extern "C" fn mcx_number_sub(
    a: *const McxNumber,
    b: *const McxNumber,
) -> *mut McxNumber {
    unsafe { binary_op(a, b, |x, y| x.sub(y)) }
}

/// Product through the componentwise fast path above level 1.
/// # Safety
/// `a` and `b` must each be null or live handles returned by this library.
#[no_mangle]
pub unsafe extern "C" fn mcx_number_mul(
    a: *const McxNumber,
    b: *const McxNumber,
) -> *mut McxNumber {
    unsafe {
        binary_op(a, b, |x, y| {
            if x.level() != y.level() {
                return Err(McError::LevelMismatch {
                    left: x.level().get(),
                    right: y.level().get(),
                });
            }
            if x.level().get() == 1 {
                x.mul_standard(y)
            } else {
                Ok(from_idempotent(
                    &to_idempotent(x)?.mul_fast(&to_idempotent(y)?)?,
                ))
            }
        })
    }
}

/// # Safety
/// `h` must be null or a live handle returned by this library.
#[no_mangle]
pub unsafe extern "C" fn mcx_number_scale(h: *const McxNumber, factor: f64) -> *mut McxNumber {
    let Some(num) = (unsafe { number_ref(h) }) else {
        return std::ptr::null_mut();
    };
    if !factor.is_finite() {
        set_error(McxStatus::NumericError, "scale factor is not finite");
        return std::ptr::null_mut();
    }
    boxed(num.inner.scale(factor))
}

/// # Safety
/// `h` must be null or a live handle returned by this library.
#[no_mangle]
pub unsafe extern "C" fn mcx_number_neg(h: *const McxNumber) -> *mut McxNumber {
    let Some(num) = (unsafe { number_ref(h) }) else {
        return std::ptr::null_mut();
    };
    boxed(num.inner.neg())
}

/// Applies the conjugation selected by `mask`: bit k-1 flips the sign of
/// unit k. A zero mask is the identity; the all-ones mask is the total
/// conjugation.
/// # Safety
/// `h` must be null or a live handle returned by this library.
#[no_mangle]
pub unsafe extern "C" fn mcx_number_conjugate(h: *const McxNumber, mask: u32) -> *mut McxNumber {
    let Some(num) = (unsafe { number_ref(h) }) else {
        return std::ptr::null_mut();
    };
    match num.inner.conjugate(ConjugationMask::from_bits(mask)) {
        Ok(inner) => boxed(inner),
        Err(e) => opt_ptr(fail_core(&e)),
    }
}

/// Multiplicative inverse. Fails with `MCX_STATUS_NULL_CONE` when some
/// canonical component is within `tol` of zero (relative to the largest
/// component).
/// # Safety
/// `h` must be null or a live handle returned by this library.
#[no_mangle]
pub unsafe extern "C" fn mcx_number_invert(h: *const McxNumber, tol: f64) -> *mut McxNumber {
    let Some(num) = (unsafe { number_ref(h) }) else {
        return std::ptr::null_mut();
    };
    if num.inner.level().get() == 1 {
        let z = num_complex::Complex64::new(num.inner.coeffs()[0], num.inner.coeffs()[1]);
        if z.norm() <= tol * (1.0 + z.norm()) {
            return opt_ptr(fail_core(&McError::NullCone { indices: vec![0] }));
        }
        let w = z.inv();
        return boxed(Multicomplex::from_coeffs(num.inner.level(), vec![w.re, w.im]).unwrap());
    }
    let result = to_idempotent(&num.inner).and_then(|r| r.invert_with_tol(tol));
    match result {
        Ok(rep) => boxed(from_idempotent(&rep)),
        Err(e) => opt_ptr(fail_core(&e)),
    }
}

/// Multiperplex norm, returned as a number with real canonical
/// components. At level 1 this is the complex modulus.
/// # Safety
/// `h` must be null or a live handle returned by this library.
#[no_mangle]
pub unsafe extern "C" fn mcx_number_norm(h: *const McxNumber) -> *mut McxNumber {
    let Some(num) = (unsafe { number_ref(h) }) else {
        return std::ptr::null_mut();
    };
    if num.inner.level().get() == 1 {
        let z = num_complex::Complex64::new(num.inner.coeffs()[0], num.inner.coeffs()[1]);
        return boxed(Multicomplex::from_coeffs(num.inner.level(), vec![z.norm(), 0.0]).unwrap());
    }
    match to_idempotent(&num.inner) {
        Ok(rep) => boxed(from_idempotent(&rep.mnorm().to_rep())),
        Err(e) => opt_ptr(fail_core(&e)),
    }
}

/// # Safety
/// `h` must be null or a live handle returned by this library.
#[no_mangle]
pub unsafe extern "C" fn mcx_number_is_zero(h: *const McxNumber) -> bool {
    matches!(unsafe { number_ref(h) }, Some(num) if num.inner.is_zero())
}

/// True when the number is nonzero yet has a canonical component within
/// `tol` of zero, making it non-invertible.
/// # Safety
/// `h` must be null or a live handle returned by this library.
#[no_mangle]
pub unsafe extern "C" fn mcx_number_is_zero_divisor(h: *const McxNumber, tol: f64) -> bool {
    let Some(num) = (unsafe { number_ref(h) }) else {
        return false;
    };
    if num.inner.level().get() == 1 {
        return false;
    }
    match to_idempotent(&num.inner) {
        Ok(rep) => rep.is_zero_divisor(tol),
        Err(_) => false,
    }
}

/// Componentwise comparison with relative tolerance.
/// # Safety
/// `a` and `b` must each be null or live handles returned by this library.
#[no_mangle]
pub unsafe extern "C" fn mcx_number_equals(
    a: *const McxNumber,
    b: *const McxNumber,
    tol: f64,
) -> bool {
    let (Some(x), Some(y)) = (unsafe { number_ref(a) }, unsafe { number_ref(b) }) else {
        return false;
    };
    x.inner.approx_eq(&y.inner, tol).unwrap_or(false)
}

/// Frees a string returned by this library. Null is ignored.
/// # Safety
/// `s` must be null or an unfreed string returned by this library; it is invalid after the call.
#[no_mangle]
pub unsafe extern "C" fn mcx_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

unsafe fn matrix_arg(text: *const c_char) -> Option<(MatrixDocument, mcx_core::McMatrix)> {
    let text = unsafe { utf8_arg(text, "matrix document") }?;
    let doc: MatrixDocument = match serde_json::from_str(text) {
        Ok(d) => d,
        Err(e) => return fail(McxStatus::ParseError, &format!("malformed document: {e}")),
    };
    match doc.to_matrix() {
        Ok(m) => Some((doc, m)),
        Err(e) => fail_core(&e),
    }
}

fn doc_json<T: serde::Serialize>(value: &T) -> *mut c_char {
    match serde_json::to_string(value) {
        Ok(text) => leak_string(text),
        Err(e) => {
            set_error(McxStatus::NumericError, &e.to_string());
            std::ptr::null_mut()
        }
    }
}

/// Determinant of a matrix document, returned as a number document in
/// the input's representation. `singular` (optional) receives whether
/// some component determinant is within `tol` of zero.
/// # Safety
/// `doc` must be null or a NUL-terminated string that stays valid for the call.
/// `singular` must be null or point to a writable bool.
#[no_mangle]
pub unsafe extern "C" fn mcx_det_json(
    doc: *const c_char,
    tol: f64,
    singular: *mut bool,
) -> *mut c_char {
    let Some((doc, matrix)) = (unsafe { matrix_arg(doc) }) else {
        return std::ptr::null_mut();
    };
    let rep = match doc.effective_rep() {
        Ok(r) => r,
        Err(e) => {
            set_error(core_error(&e), &e.to_string());
            return std::ptr::null_mut();
        }
    };
    let det = match matrix.det() {
        Ok(d) => d,
        Err(e) => {
            set_error(core_error(&e), &e.to_string());
            return std::ptr::null_mut();
        }
    };
    if !singular.is_null() {
        let vanishing = matrix.vanishing_det_components(tol).unwrap_or_default();
        unsafe { *singular = !vanishing.is_empty() };
    }
    doc_json(&NumberDocument::from_rep(&det, rep))
}

/// Inverse of a matrix document, in the input's representation. Fails
/// with `MCX_STATUS_SINGULAR` when some component matrix is singular.
/// # Safety
/// `doc` must be null or a NUL-terminated string that stays valid for the call.
#[no_mangle]
pub unsafe extern "C" fn mcx_inv_json(doc: *const c_char, tol: f64) -> *mut c_char {
    let Some((doc, matrix)) = (unsafe { matrix_arg(doc) }) else {
        return std::ptr::null_mut();
    };
    let rep = match doc.effective_rep() {
        Ok(r) => r,
        Err(e) => {
            set_error(core_error(&e), &e.to_string());
            return std::ptr::null_mut();
        }
    };
    match matrix.invert_with_tol(tol) {
        Ok(inverse) => doc_json(&MatrixDocument::from_matrix(&inverse, rep)),
        Err(e) => {
            set_error(core_error(&e), &e.to_string());
            std::ptr::null_mut()
        }
    }
}

#[derive(serde::Serialize)]
struct EigJson {
    eigenvalues: Vec<NumberDocument>,
    eigenkets: Vec<mcx_core::docs::KetDocument>,
    residual: f64,
}

/// Spectral decomposition of a self-adjoint matrix document. The result
/// object carries multiperplex eigenvalue documents, eigenket documents,
/// and the reconstruction residual. Fails with
/// `MCX_STATUS_NOT_SELF_ADJOINT` when some component slice is not
/// Hermitian within `tol`.
/// # Safety
/// `doc` must be null or a NUL-terminated string that stays valid for the call.
#[no_mangle]
pub unsafe extern "C" fn mcx_eig_json(doc: *const c_char, tol: f64) -> *mut c_char {
    let Some((_, matrix)) = (unsafe { matrix_arg(doc) }) else {
        return std::ptr::null_mut();
    };
    match spectral_decompose(&matrix, tol) {
        Ok(spec) => doc_json(&EigJson {
            eigenvalues: spec
                .eigenvalues
                .iter()
                .map(|d| NumberDocument::from_multiperplex(d, Rep::Idempotent))
                .collect(),
            eigenkets: spec
                .eigenkets
                .iter()
                .map(|k| mcx_core::docs::KetDocument::from_ket(k, Rep::Idempotent))
                .collect(),
            residual: spec.residual,
        }),
        Err(e) => {
            set_error(core_error(&e), &e.to_string());
            std::ptr::null_mut()
        }
    }
}
