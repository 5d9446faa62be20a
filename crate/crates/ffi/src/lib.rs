//! C ABI for `neumann-witness`.
//!
//! Eigenfunctions and certificates are opaque handles created from JSON and
//! released with their `_free` function. Every fallible call returns an
//! [`NwStatus`]; on failure [`nw_last_error`] describes the error until the
//! next call on the same thread. Strings returned by the library are released
//! with [`nw_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use neumann_witness::eigenfunction::Eigenfunction;
use neumann_witness::exact::Edge;
use neumann_witness::oracle::{boundary_min, proposition_sweep};
use neumann_witness::twosquares::{decompose_u64, ParityClass};
use neumann_witness::witness::{check_relation, verify_certificate, witness, WitnessCertificate};
use neumann_witness::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NwStatus {
    Ok = 0,
    /// A required pointer was null or a string was not UTF-8.
    NullOrInvalidArgument = 1,
    /// Malformed JSON or a value outside the domain of the operation.
    InputError = 2,
    /// Constant eigenfunctions have no witness.
    ConstantEigenfunction = 3,
    /// The spectrum of a generic rectangle cannot be enumerated exactly.
    NotExactlyEnumerable = 4,
    /// The trace minimization did not reach the threshold.
    NumericalInconclusive = 5,
    /// A mathematical invariant failed.
    InconsistentSpectrum = 6,
    /// An internal panic was caught at the boundary.
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NwEdge {
    Bottom = 0,
    Top = 1,
    Left = 2,
    Right = 3,
}

impl From<Edge> for NwEdge {
    fn from(e: Edge) -> Self {
        match e {
            Edge::Bottom => NwEdge::Bottom,
            Edge::Top => NwEdge::Top,
            Edge::Left => NwEdge::Left,
            Edge::Right => NwEdge::Right,
        }
    }
}

/// Parity class of a sum of two squares: `I` for `2·4^s(2ℓ+1)`, `J` for `4^s(2ℓ+1)`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NwParityClass {
    I = 0,
    J = 1,
}

/// Opaque eigenfunction handle.
pub struct NwEigenfunction(Eigenfunction);

/// Opaque certificate handle.
pub struct NwCertificate(WitnessCertificate);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> NwStatus {
    match e {
        Error::ConstantEigenfunction => NwStatus::ConstantEigenfunction,
        Error::NotExactlyEnumerable => NwStatus::NotExactlyEnumerable,
        Error::NumericalInconclusive { .. } => NwStatus::NumericalInconclusive,
        Error::InconsistentSpectrum(_) | Error::EmptyLift => NwStatus::InconsistentSpectrum,
        _ => NwStatus::InputError,
    }
}

/// Run `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), NwStatus>) -> NwStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NwStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            NwStatus::Panic
        }
    }
}

fn lib<T>(r: neumann_witness::Result<T>) -> Result<T, NwStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

fn null_arg(name: &str) -> NwStatus {
    set_error(format!("{name} is null"));
    NwStatus::NullOrInvalidArgument
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, NwStatus> {
    if p.is_null() {
        return Err(null_arg(name));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error(format!("{name} is not valid UTF-8"));
        NwStatus::NullOrInvalidArgument
    })
}

unsafe fn ref_arg<'a, T>(p: *const T, name: &str) -> Result<&'a T, NwStatus> {
    p.as_ref().ok_or_else(|| null_arg(name))
}

unsafe fn out_arg<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, NwStatus> {
    p.as_mut().ok_or_else(|| null_arg(name))
}

fn json_in<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, NwStatus> {
    serde_json::from_str(text).map_err(|e| {
        set_error(e.to_string());
        NwStatus::InputError
    })
}

fn string_out(s: String, out: &mut *mut c_char) -> Result<(), NwStatus> {
    let c = CString::new(s).map_err(|_| {
        set_error("output contains a NUL byte");
        NwStatus::Panic
    })?;
    *out = c.into_raw();
    Ok(())
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn nw_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parse an eigenfunction from its JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nw_eigenfunction_from_json(json: *const c_char, out: *mut *mut NwEigenfunction) -> NwStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let u: Eigenfunction = json_in(str_arg(json, "json")?)?;
        *out = Box::into_raw(Box::new(NwEigenfunction(u)));
        Ok(())
    })
}

/// # Safety
/// `u` must come from [`nw_eigenfunction_from_json`] and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn nw_eigenfunction_free(u: *mut NwEigenfunction) {
    if !u.is_null() {
        drop(Box::from_raw(u));
    }
}

/// Value at `(x, y)`; points outside the closed rectangle are an input error.
///
/// # Safety
/// `u` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nw_eigenfunction_evaluate(u: *const NwEigenfunction, x: f64, y: f64, out: *mut f64) -> NwStatus {
    guard(|| {
        let u = ref_arg(u, "u")?;
        *out_arg(out, "out")? = lib(u.0.evaluate(x, y))?;
        Ok(())
    })
}

/// Sampled and refined minimum over the boundary.
///
/// # Safety
/// `u` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nw_eigenfunction_boundary_min(
    u: *const NwEigenfunction,
    samples_per_edge: usize,
    out: *mut f64,
) -> NwStatus {
    guard(|| {
        let u = ref_arg(u, "u")?;
        *out_arg(out, "out")? = lib(boundary_min(&u.0, samples_per_edge))?.0;
        Ok(())
    })
}

/// Build a certificate of boundary non-positivity.
///
/// # Safety
/// `u` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nw_witness(u: *const NwEigenfunction, out: *mut *mut NwCertificate) -> NwStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let u = ref_arg(u, "u")?;
        let cert = lib(witness(&u.0))?;
        *out = Box::into_raw(Box::new(NwCertificate(cert)));
        Ok(())
    })
}

/// Parse a certificate from its JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nw_certificate_from_json(json: *const c_char, out: *mut *mut NwCertificate) -> NwStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let c: WitnessCertificate = json_in(str_arg(json, "json")?)?;
        *out = Box::into_raw(Box::new(NwCertificate(c)));
        Ok(())
    })
}

/// JSON form of a certificate; release it with [`nw_string_free`].
///
/// # Safety
/// `cert` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nw_certificate_to_json(cert: *const NwCertificate, out: *mut *mut c_char) -> NwStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let cert = ref_arg(cert, "cert")?;
        string_out(serde_json::to_string(&cert.0).expect("serializable"), out)
    })
}

/// Number of boundary points in a certificate.
///
/// # Safety
/// `cert` must be a live handle or null (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn nw_certificate_point_count(cert: *const NwCertificate) -> usize {
    cert.as_ref().map_or(0, |c| c.0.points.len())
}

/// Edge and edge parameter of point `index`.
///
/// # Safety
/// `cert` must be a live handle; `edge` and `t` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn nw_certificate_point(
    cert: *const NwCertificate,
    index: usize,
    edge: *mut NwEdge,
    t: *mut f64,
) -> NwStatus {
    guard(|| {
        let cert = ref_arg(cert, "cert")?;
        let bp = cert.0.points.get(index).ok_or_else(|| {
            set_error(format!("point index {index} out of range"));
            NwStatus::InputError
        })?;
        *out_arg(edge, "edge")? = bp.edge.into();
        *out_arg(t, "t")? = bp.t;
        Ok(())
    })
}

/// `verified` is set when the minimum over the certificate points is at most
/// `tol·(1 + max |coefficient|)` and the stated relation between the values holds.
///
/// # Safety
/// `u` and `cert` must be live handles and `verified` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nw_verify(
    u: *const NwEigenfunction,
    cert: *const NwCertificate,
    tol: f64,
    verified: *mut bool,
) -> NwStatus {
    guard(|| {
        let u = ref_arg(u, "u")?;
        let cert = ref_arg(cert, "cert")?;
        let out = out_arg(verified, "verified")?;
        *out = lib(verify_certificate(&u.0, &cert.0, tol))? && lib(check_relation(&u.0, &cert.0, tol))?;
        Ok(())
    })
}

/// # Safety
/// `cert` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn nw_certificate_free(cert: *mut NwCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// # Safety
/// `s` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn nw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `lam = 4^s·(2ℓ+1)` (class J) or `2·4^s·(2ℓ+1)` (class I).
///
/// # Safety
/// All output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn nw_decompose(lam: u64, s: *mut u32, ell: *mut u64, class: *mut NwParityClass) -> NwStatus {
    guard(|| {
        let d = lib(decompose_u64(lam))?;
        *out_arg(s, "s")? = d.s;
        *out_arg(ell, "ell")? = u64::try_from(&d.ell).expect("ell < lam");
        *out_arg(class, "class")? = match d.predicted() {
            ParityClass::ClassJ => NwParityClass::J,
            _ => NwParityClass::I,
        };
        Ok(())
    })
}

/// Count violations of the two-square parity structure for `λ ≤ lam_max`.
///
/// # Safety
/// `violations` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nw_check_proposition(lam_max: u64, violations: *mut u64) -> NwStatus {
    guard(|| {
        let out = out_arg(violations, "violations")?;
        *out = lib(proposition_sweep(lam_max))?.violations.len() as u64;
        Ok(())
    })
}
