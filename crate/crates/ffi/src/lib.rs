//! C interface to `partsemi`.
//!
//! Every function returns a [`PsStatus`]; results come back through out
//! pointers. After a non-OK status, `ps_last_error_message` describes the
//! failure on the calling thread. Maps are passed as arrays of `size_t`
//! images whose length is the ground-set size of the instance.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use partsemi::greens::{d_related, j_related, l_related, r_related};
use partsemi::harness::{build_catalog, Harness, Verdict};
use partsemi::regularity::{
    is_idempotent_element, is_inverse_semigroup, is_regular_element, is_regular_semigroup,
};
use partsemi::unit_regularity::{is_unit_regular_element, is_unit_regular_semigroup};
use partsemi::{Ensemble, Error, FiniteMap, Instance, Mode, DEFAULT_ELEMENT_CAP};

/// Status codes returned by every entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Precondition = 4,
    ResourceLimit = 5,
    Parse = 6,
    Validation = 7,
    ModeMismatch = 8,
    Internal = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PsMode {
    Oracle = 0,
    Theorem = 1,
    Both = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PsRelation {
    L = 0,
    R = 1,
    D = 2,
    J = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PsSemigroupProperty {
    Regular = 0,
    Inverse = 1,
    UnitRegular = 2,
}

/// Opaque handle: an instance with its members enumerated.
pub struct PsInstance {
    ens: Ensemble,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(PsStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::InvalidArgument(_) => PsStatus::InvalidArgument,
            Error::Precondition(_) => PsStatus::Precondition,
            Error::ResourceLimit(_) => PsStatus::ResourceLimit,
            Error::Parse(_) => PsStatus::Parse,
            Error::Validation(_) => PsStatus::Validation,
            Error::ModeMismatch(_) => PsStatus::ModeMismatch,
            Error::Internal(_) => PsStatus::Internal,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(PsStatus::NullPointer, format!("{what} is null"))
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> PsStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            PsStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("panic inside partsemi");
            PsStatus::Panic
        }
    }
}

unsafe fn instance<'a>(p: *const PsInstance) -> Result<&'a Ensemble, Failure> {
    p.as_ref().map(|i| &i.ens).ok_or_else(|| null("instance"))
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Failure(PsStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn map_arg(
    ens: &Ensemble,
    data: *const usize,
    len: usize,
    what: &str,
) -> Result<FiniteMap, Failure> {
    if data.is_null() {
        return Err(null(what));
    }
    let n = ens.partition().n();
    if len != n {
        return Err(Failure(
            PsStatus::InvalidArgument,
            format!("{what} has {len} entries, expected {n}"),
        ));
    }
    let images = std::slice::from_raw_parts(data, len).to_vec();
    Ok(FiniteMap::endo(images)?)
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn mode(m: PsMode) -> Mode {
    match m {
        PsMode::Oracle => Mode::Oracle,
        PsMode::Theorem => Mode::Theorem,
        PsMode::Both => Mode::Both,
    }
}

/// Message for the last failure on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ps_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses a JSON instance and enumerates its members.
/// `element_cap` bounds the enumeration; 0 selects the default cap.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ps_instance_from_json(
    json: *const c_char,
    element_cap: usize,
    out: *mut *mut PsInstance,
) -> PsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inst = Instance::from_json_str(text(json, "json")?)?;
        let cap = if element_cap == 0 {
            DEFAULT_ELEMENT_CAP
        } else {
            element_cap
        };
        let ens = Ensemble::with_cap(inst, cap)?;
        out.write(Box::into_raw(Box::new(PsInstance { ens })));
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `inst` must come from `ps_instance_from_json` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ps_instance_free(inst: *mut PsInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Ground-set size, which is the length of every map argument.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ps_instance_degree(inst: *const PsInstance, out: *mut usize) -> PsStatus {
    guard(|| write(out, instance(inst)?.partition().n(), "out"))
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ps_instance_member_count(
    inst: *const PsInstance,
    out: *mut usize,
) -> PsStatus {
    guard(|| write(out, instance(inst)?.len(), "out"))
}

/// Copies member `index` (enumeration order) into `buf`, which holds `len` entries.
///
/// # Safety
/// `buf` must be writable for `len` entries.
#[no_mangle]
pub unsafe extern "C" fn ps_instance_member(
    inst: *const PsInstance,
    index: usize,
    buf: *mut usize,
    len: usize,
) -> PsStatus {
    guard(|| {
        let ens = instance(inst)?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        if index >= ens.len() {
            return Err(Failure(
                PsStatus::InvalidArgument,
                format!("member index {index} out of range (count {})", ens.len()),
            ));
        }
        let images = ens.member(index).images();
        if len != images.len() {
            return Err(Failure(
                PsStatus::InvalidArgument,
                format!("buffer has {len} entries, expected {}", images.len()),
            ));
        }
        std::slice::from_raw_parts_mut(buf, len).copy_from_slice(images);
        Ok(())
    })
}

type ElementCheck = fn(&FiniteMap, &Ensemble, Mode) -> partsemi::Result<bool>;

unsafe fn element(
    inst: *const PsInstance,
    f: *const usize,
    len: usize,
    m: PsMode,
    out: *mut bool,
    check: ElementCheck,
) -> PsStatus {
    guard(|| {
        let ens = instance(inst)?;
        let f = map_arg(ens, f, len, "f")?;
        let v = check(&f, ens, mode(m))?;
        write(out, v, "out")
    })
}

/// Whether member `f` is regular.
///
/// # Safety
/// `f` must be readable for `len` entries and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ps_is_regular(
    inst: *const PsInstance,
    f: *const usize,
    len: usize,
    mode: PsMode,
    out: *mut bool,
) -> PsStatus {
    element(inst, f, len, mode, out, is_regular_element)
}

/// Whether member `f` is idempotent.
///
/// # Safety
/// `f` must be readable for `len` entries and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ps_is_idempotent(
    inst: *const PsInstance,
    f: *const usize,
    len: usize,
    mode: PsMode,
    out: *mut bool,
) -> PsStatus {
    element(inst, f, len, mode, out, is_idempotent_element)
}

/// Whether member `f` is unit-regular. Fails with `PS_STATUS_PRECONDITION`
/// when the index semigroup lacks the identity.
///
/// # Safety
/// `f` must be readable for `len` entries and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ps_is_unit_regular(
    inst: *const PsInstance,
    f: *const usize,
    len: usize,
    mode: PsMode,
    out: *mut bool,
) -> PsStatus {
    element(inst, f, len, mode, out, is_unit_regular_element)
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ps_semigroup_property(
    inst: *const PsInstance,
    property: PsSemigroupProperty,
    mode: PsMode,
    out: *mut bool,
) -> PsStatus {
    guard(|| {
        let ens = instance(inst)?;
        let m = self::mode(mode);
        let v = match property {
            PsSemigroupProperty::Regular => is_regular_semigroup(ens, m)?,
            PsSemigroupProperty::Inverse => is_inverse_semigroup(ens, m)?,
            PsSemigroupProperty::UnitRegular => is_unit_regular_semigroup(ens, m)?,
        };
        write(out, v, "out")
    })
}

/// Whether members `f` and `g` are related by Green's relation `rel`.
/// Needs the identity in the index semigroup.
///
/// # Safety
/// `f` and `g` must be readable for `len` entries and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ps_green_related(
    inst: *const PsInstance,
    rel: PsRelation,
    f: *const usize,
    g: *const usize,
    len: usize,
    mode: PsMode,
    out: *mut bool,
) -> PsStatus {
    guard(|| {
        let ens = instance(inst)?;
        let f = map_arg(ens, f, len, "f")?;
        let g = map_arg(ens, g, len, "g")?;
        let m = self::mode(mode);
        let w = match rel {
            PsRelation::L => l_related(&f, &g, ens, m)?,
            PsRelation::R => r_related(&f, &g, ens, m)?,
            PsRelation::D => d_related(&f, &g, ens, m)?,
            PsRelation::J => j_related(&f, &g, ens, m)?,
        };
        write(out, w.is_some(), "out")
    })
}

/// Runs the verification harness over the catalog for `max_n` and `seed`.
/// `suite` may be null to run every suite. The report is newline-delimited
/// JSON in `*report`, to be released with `ps_string_free`.
///
/// # Safety
/// `suite` must be null or NUL-terminated; out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn ps_verify(
    max_n: usize,
    seed: u64,
    suite: *const c_char,
    report: *mut *mut c_char,
    passed: *mut bool,
) -> PsStatus {
    guard(|| {
        if report.is_null() {
            return Err(null("report"));
        }
        if passed.is_null() {
            return Err(null("passed"));
        }
        let suite = if suite.is_null() {
            None
        } else {
            Some(text(suite, "suite")?)
        };
        let harness = Harness::new(build_catalog(max_n, seed)?)?;
        let reports = match suite {
            Some(id) => vec![harness.run_suite(id)?],
            None => harness.run_all(),
        };
        let ok = reports.iter().all(|r| r.count(Verdict::Fail) == 0);
        let body: String = reports.iter().map(|r| r.to_machine()).collect();
        let c = CString::new(body).map_err(|e| Failure(PsStatus::Internal, e.to_string()))?;
        report.write(c.into_raw());
        passed.write(ok);
        Ok(())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ps_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_mapping_is_total() {
        let cases = [
            (
                Error::InvalidArgument(String::new()),
                PsStatus::InvalidArgument,
            ),
            (Error::Precondition(String::new()), PsStatus::Precondition),
            (Error::ResourceLimit(String::new()), PsStatus::ResourceLimit),
            (Error::Parse(String::new()), PsStatus::Parse),
            (Error::Validation(String::new()), PsStatus::Validation),
            (Error::ModeMismatch(String::new()), PsStatus::ModeMismatch),
            (Error::Internal(String::new()), PsStatus::Internal),
        ];
        for (e, s) in cases {
            assert_eq!(Failure::from(e).0, s);
        }
    }

    #[test]
    fn panics_become_a_status() {
        let s = guard(|| panic!("boom"));
        assert_eq!(s, PsStatus::Panic);
        let msg = unsafe { CStr::from_ptr(ps_last_error_message()) };
        assert!(!msg.to_bytes().is_empty());
    }
}
