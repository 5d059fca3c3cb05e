//! C interface. Every function returns a [`NilorbitStatus`]; on anything
//! other than `NILORBIT_STATUS_OK` or `NILORBIT_STATUS_NEGATIVE_VERDICT` a
//! message is available from [`nilorbit_last_error`] on the same thread.
//!
//! Orbits are opaque handles created by `nilorbit_orbit_from_*` and released
//! with [`nilorbit_orbit_free`]. Strings returned through out-parameters are
//! released with [`nilorbit_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nilorbit::corpus::{recipe, CorpusError};
use nilorbit::estimates::{
    estimate_epsilon, triangular_check, EstimateError, LowerTriangular, SectionModel, StripGrid,
};
use nilorbit::format::{parse_orbit, serialize_orbit, FormatError};
use nilorbit::hodge::{build_limit_mhs, validate_orbit, NilpotentOrbit};
use nilorbit::linalg::GVector;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NilorbitStatus {
    Ok = 0,
    /// The computation ran and answered no.
    NegativeVerdict = 1,
    InvalidArgument = 2,
    Parse = 3,
    /// The orbit lacks the structure the computation needs.
    NotAdmissible = 4,
    Internal = 5,
}

/// An orbit handle.
pub struct NilorbitOrbit(NilpotentOrbit);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

type Failure = (NilorbitStatus, String);

fn guard(f: impl FnOnce() -> Result<NilorbitStatus, Failure>) -> NilorbitStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err((status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            NilorbitStatus::Internal
        }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    (NilorbitStatus::InvalidArgument, message.into())
}

fn estimate_failure(e: EstimateError) -> Failure {
    let status = match e {
        EstimateError::InvalidParameter(_) | EstimateError::TargetDimension { .. } => {
            NilorbitStatus::InvalidArgument
        }
        _ => NilorbitStatus::NotAdmissible,
    };
    (status, e.to_string())
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(invalid(format!("{what} is null")));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| invalid(format!("{what} is not UTF-8")))
}

unsafe fn orbit<'a>(o: *const NilorbitOrbit) -> Result<&'a NilpotentOrbit, Failure> {
    o.as_ref()
        .map(|o| &o.0)
        .ok_or_else(|| invalid("orbit handle is null"))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(invalid(format!("{what} is null")));
    }
    out.write(value);
    Ok(())
}

/// Message of the last failure on this thread, or null. Valid until the
/// next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn nilorbit_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn nilorbit_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses an orbit file.
///
/// # Safety
/// `json` is a nul-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn nilorbit_orbit_from_json(
    json: *const c_char,
    out: *mut *mut NilorbitOrbit,
) -> NilorbitStatus {
    guard(|| {
        let json = text(json, "json")?;
        let o = parse_orbit(json).map_err(|e| match e {
            FormatError::Hodge(_) => (NilorbitStatus::NotAdmissible, e.to_string()),
            _ => (NilorbitStatus::Parse, e.to_string()),
        })?;
        put(out, Box::into_raw(Box::new(NilorbitOrbit(o))), "out")?;
        Ok(NilorbitStatus::Ok)
    })
}

/// Builds a named built-in orbit such as `split-rank2` or `jordan(3,-1,0)`.
///
/// # Safety
/// `name` is a nul-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn nilorbit_orbit_from_example(
    name: *const c_char,
    out: *mut *mut NilorbitOrbit,
) -> NilorbitStatus {
    guard(|| {
        let name = text(name, "name")?;
        let o = recipe(name).map_err(|e| match e {
            CorpusError::UnknownRecipe(_) => invalid(e.to_string()),
            _ => (NilorbitStatus::NotAdmissible, e.to_string()),
        })?;
        put(out, Box::into_raw(Box::new(NilorbitOrbit(o))), "out")?;
        Ok(NilorbitStatus::Ok)
    })
}

/// Releases an orbit handle; null is ignored.
///
/// # Safety
/// `orbit` came from this library and is not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn nilorbit_orbit_free(orbit: *mut NilorbitOrbit) {
    if !orbit.is_null() {
        drop(Box::from_raw(orbit));
    }
}

/// # Safety
/// `orbit` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn nilorbit_orbit_rank(
    orbit: *const NilorbitOrbit,
    out: *mut usize,
) -> NilorbitStatus {
    guard(|| {
        let o = self::orbit(orbit)?;
        put(out, o.rank(), "out")?;
        Ok(NilorbitStatus::Ok)
    })
}

/// # Safety
/// `orbit` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn nilorbit_orbit_weight(
    orbit: *const NilorbitOrbit,
    out: *mut i32,
) -> NilorbitStatus {
    guard(|| {
        let o = self::orbit(orbit)?;
        put(out, o.weight(), "out")?;
        Ok(NilorbitStatus::Ok)
    })
}

/// Canonical orbit file text; release it with [`nilorbit_string_free`].
///
/// # Safety
/// `orbit` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn nilorbit_orbit_to_json(
    orbit: *const NilorbitOrbit,
    out: *mut *mut c_char,
) -> NilorbitStatus {
    guard(|| {
        let o = self::orbit(orbit)?;
        let s = CString::new(serialize_orbit(o))
            .map_err(|e| (NilorbitStatus::Internal, e.to_string()))?;
        put(out, s.into_raw(), "out")?;
        Ok(NilorbitStatus::Ok)
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` came from this library and is not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn nilorbit_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Structural checks on the orbit: `OK` if all pass, `NEGATIVE_VERDICT`
/// otherwise, with the failing checks in [`nilorbit_last_error`].
///
/// # Safety
/// `orbit` is a live handle.
#[no_mangle]
pub unsafe extern "C" fn nilorbit_orbit_validate(orbit: *const NilorbitOrbit) -> NilorbitStatus {
    guard(|| {
        let report = validate_orbit(self::orbit(orbit)?);
        if report.all_pass() {
            Ok(NilorbitStatus::Ok)
        } else {
            Err((NilorbitStatus::NegativeVerdict, format!("{report:?}")))
        }
    })
}

/// Whether the limit filtration is a mixed Hodge structure. On
/// `NEGATIVE_VERDICT` the diagnosis is in [`nilorbit_last_error`].
///
/// # Safety
/// `orbit` is a live handle.
#[no_mangle]
pub unsafe extern "C" fn nilorbit_orbit_limit_is_mixed_hodge(
    orbit: *const NilorbitOrbit,
) -> NilorbitStatus {
    guard(|| match build_limit_mhs(self::orbit(orbit)?) {
        Ok(_) => Ok(NilorbitStatus::Ok),
        Err(e) => Err((NilorbitStatus::NegativeVerdict, e.to_string())),
    })
}

/// Empirical ε at the zero target over lattice vectors with coefficients
/// in `[-bound, bound]` and a dyadic strip grid above `Im z = r`.
/// `NEGATIVE_VERDICT` if ε is not positive; `*out` is written either way.
///
/// # Safety
/// `orbit` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn nilorbit_estimate_epsilon(
    orbit: *const NilorbitOrbit,
    bound: i64,
    r: f64,
    grid_re: usize,
    grid_y: usize,
    out: *mut f64,
) -> NilorbitStatus {
    guard(|| {
        let o = self::orbit(orbit)?;
        if out.is_null() {
            return Err(invalid("out is null"));
        }
        let model = SectionModel::for_orbit(o).map_err(estimate_failure)?;
        let grid = StripGrid::dyadic(r, grid_re, grid_y).map_err(estimate_failure)?;
        let v = GVector::zeros(model.fiber_dim());
        let rep = estimate_epsilon(&model, &v, bound, &grid).map_err(estimate_failure)?;
        put(out, rep.epsilon, "out")?;
        Ok(if rep.epsilon > 0.0 && rep.violations == 0 {
            NilorbitStatus::Ok
        } else {
            NilorbitStatus::NegativeVerdict
        })
    })
}

/// Whether `a_i <= eps2 Σ_j a_j + Σ_{j<i} c_ij a_j` forces `a = 0` for
/// nonnegative `a`. `lower` holds the strictly lower triangle row by row,
/// `size (size - 1) / 2` entries. `OK` if it forces zero,
/// `NEGATIVE_VERDICT` if a nonzero solution exists; the Perron root of the
/// system goes to `*perron_root` when it is not null.
///
/// # Safety
/// `lower` points to the stated number of doubles; `perron_root` is null
/// or writable.
#[no_mangle]
pub unsafe extern "C" fn nilorbit_triangular_system(
    lower: *const f64,
    size: usize,
    eps2: f64,
    perron_root: *mut f64,
) -> NilorbitStatus {
    guard(|| {
        let count = size.saturating_mul(size.saturating_sub(1)) / 2;
        if lower.is_null() && count > 0 {
            return Err(invalid("lower is null"));
        }
        let flat = if count == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(lower, count)
        };
        let mut rows = Vec::with_capacity(size);
        let mut at = 0;
        for i in 0..size {
            rows.push(flat[at..at + i].to_vec());
            at += i;
        }
        let c = LowerTriangular::new(rows).map_err(estimate_failure)?;
        let rep = triangular_check(&c, eps2).map_err(estimate_failure)?;
        if !perron_root.is_null() {
            perron_root.write(rep.perron_root);
        }
        if !rep.agree {
            return Err((
                NilorbitStatus::Internal,
                "eigenvalue and simplex criteria disagree".into(),
            ));
        }
        Ok(if rep.forces_zero {
            NilorbitStatus::Ok
        } else {
            NilorbitStatus::NegativeVerdict
        })
    })
}
