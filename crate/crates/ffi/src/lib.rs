//! C ABI for building and checking MDS elliptic codes.
//!
//! Objects cross the boundary as opaque handles. Every call returns a
//! [`MecStatus`]; on failure `mec_last_error()` describes the problem for the
//! calling thread. Strings returned by the library are released with
//! `mec_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use mec_core::code::{generator_matrix, mds_combinatorial, mds_matrix, CodeError, CodeSpec, CodeSpecJson, MatrixMode};
use mec_core::constructions::{build_max_code, mec_bound, ConstructionError};
use mec_core::group::GroupTable;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MecStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidJson = 3,
    InvalidArgument = 4,
    BudgetExceeded = 5,
    Internal = 6,
}

/// How `mec_code_verify` decides.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MecMode {
    Combinatorial = 0,
    ExhaustiveMinors = 1,
    SampledMinors = 2,
    ExhaustiveDistance = 3,
}

/// An elliptic code together with its group table.
pub struct MecCode {
    spec: CodeSpec,
    table: Option<GroupTable>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = s);
}

fn fail(status: MecStatus, msg: impl Into<String>) -> MecStatus {
    set_error(msg);
    status
}

fn code_status(e: &CodeError) -> MecStatus {
    match e {
        CodeError::BudgetExceeded(_) => MecStatus::BudgetExceeded,
        _ => MecStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> MecStatus) -> MecStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(MecStatus::Internal, "internal error"),
    }
}

fn into_c_string(s: String, out: *mut *mut c_char) -> MecStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            MecStatus::Ok
        }
        Err(_) => fail(MecStatus::Internal, "string contains a NUL byte"),
    }
}

/// Message for the last failed call on this thread. Valid until the next
/// call into the library on the same thread.
#[no_mangle]
pub extern "C" fn mec_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Release a string returned by the library.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn mec_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Maximal length of a nontrivial MDS elliptic code over `F_q`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mec_bound_value(q: u64, k: u64, restricted: bool, out: *mut u64) -> MecStatus {
    if out.is_null() {
        return fail(MecStatus::NullPointer, "out is null");
    }
    guard(|| match mec_bound(q, k, restricted) {
        Ok(b) => {
            *out = b.value;
            MecStatus::Ok
        }
        Err(e) => fail(MecStatus::InvalidArgument, e.to_string()),
    })
}

/// Build a maximum-length MDS code over `GF(p^a)`.
///
/// # Safety
/// `out` must be a valid pointer; the handle is released with `mec_code_free`.
#[no_mangle]
pub unsafe extern "C" fn mec_code_build(
    p: u32,
    a: u32,
    k: u64,
    restricted: bool,
    seed: u64,
    out: *mut *mut MecCode,
) -> MecStatus {
    if out.is_null() {
        return fail(MecStatus::NullPointer, "out is null");
    }
    guard(|| match build_max_code(p, a, k, restricted, seed) {
        Ok(spec) => {
            *out = Box::into_raw(Box::new(MecCode { spec, table: None }));
            MecStatus::Ok
        }
        Err(ConstructionError::Code(e)) => fail(code_status(&e), e.to_string()),
        Err(e) => fail(MecStatus::InvalidArgument, e.to_string()),
    })
}

/// Load a code from its JSON description.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mec_code_from_json(json: *const c_char, out: *mut *mut MecCode) -> MecStatus {
    if json.is_null() || out.is_null() {
        return fail(MecStatus::NullPointer, "null argument");
    }
    guard(|| {
        let Ok(text) = CStr::from_ptr(json).to_str() else {
            return fail(MecStatus::InvalidUtf8, "json is not UTF-8");
        };
        let j: CodeSpecJson = match serde_json::from_str(text) {
            Ok(j) => j,
            Err(e) => return fail(MecStatus::InvalidJson, e.to_string()),
        };
        match CodeSpec::from_json(&j) {
            Ok(spec) => {
                *out = Box::into_raw(Box::new(MecCode { spec, table: None }));
                MecStatus::Ok
            }
            Err(e) => fail(MecStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// # Safety
/// `code` must be null or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn mec_code_free(code: *mut MecCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// # Safety
/// `code` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn mec_code_length(code: *const MecCode) -> usize {
    code.as_ref().map_or(0, |c| c.spec.n())
}

/// # Safety
/// `code` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn mec_code_dimension(code: *const MecCode) -> usize {
    code.as_ref().map_or(0, |c| c.spec.k())
}

/// JSON description of the code.
///
/// # Safety
/// `code` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mec_code_to_json(code: *const MecCode, out: *mut *mut c_char) -> MecStatus {
    let (Some(c), false) = (code.as_ref(), out.is_null()) else {
        return fail(MecStatus::NullPointer, "null argument");
    };
    guard(|| match serde_json::to_string(&c.spec.to_json()) {
        Ok(s) => into_c_string(s, out),
        Err(e) => fail(MecStatus::Internal, e.to_string()),
    })
}

/// Generator matrix as CSV with a JSON header line.
///
/// # Safety
/// `code` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mec_code_generator_csv(code: *const MecCode, out: *mut *mut c_char) -> MecStatus {
    let (Some(c), false) = (code.as_ref(), out.is_null()) else {
        return fail(MecStatus::NullPointer, "null argument");
    };
    guard(|| match generator_matrix(&c.spec) {
        Ok(m) => into_c_string(m.to_csv(&c.spec.provenance), out),
        Err(e) => fail(code_status(&e), e.to_string()),
    })
}

/// Decide whether the code is MDS. `samples` and `seed` are used by
/// `SampledMinors` only. On success `*is_mds` is 1 or 0.
///
/// # Safety
/// `code` must be a valid handle and `is_mds` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mec_code_verify(
    code: *mut MecCode,
    mode: MecMode,
    samples: u64,
    seed: u64,
    is_mds: *mut i32,
) -> MecStatus {
    let (Some(c), false) = (code.as_mut(), is_mds.is_null()) else {
        return fail(MecStatus::NullPointer, "null argument");
    };
    guard(|| {
        let verdict = match mode {
            MecMode::Combinatorial => {
                if c.table.is_none() {
                    match GroupTable::from_curve(&c.spec.curve) {
                        Ok(t) => c.table = Some(t),
                        Err(e) => return fail(MecStatus::InvalidArgument, e.to_string()),
                    }
                }
                mds_combinatorial(&c.spec, c.table.as_ref().expect("just built"))
            }
            m => {
                let mode = match m {
                    MecMode::ExhaustiveMinors => MatrixMode::ExhaustiveMinors,
                    MecMode::SampledMinors => MatrixMode::SampledMinors { count: samples, seed },
                    _ => MatrixMode::ExhaustiveDistance,
                };
                generator_matrix(&c.spec).and_then(|g| mds_matrix(&g, mode, None))
            }
        };
        match verdict {
            Ok(v) => {
                *is_mds = v.is_mds() as i32;
                MecStatus::Ok
            }
            Err(e) => fail(code_status(&e), e.to_string()),
        }
    })
}

#[cfg(test)]
mod tests {
    use std::ptr;

    use super::*;

    #[test]
    fn null_pointers_are_reported() {
        unsafe {
            assert_eq!(mec_bound_value(289, 4, false, ptr::null_mut()), MecStatus::NullPointer);
            let msg = CStr::from_ptr(mec_last_error()).to_str().unwrap();
            assert!(msg.contains("null"));
        }
    }

    #[test]
    fn bad_json_is_reported() {
        let mut h = ptr::null_mut();
        let s = CString::new("{not json").unwrap();
        unsafe {
            assert_eq!(mec_code_from_json(s.as_ptr(), &mut h), MecStatus::InvalidJson);
        }
        assert!(h.is_null());
    }
}
