//! C interface to fibercheck.
//!
//! Models and classifications are opaque handles freed by their `_free`
//! functions. Every function returns an [`FcStatus`]; on anything but
//! `FC_STATUS_OK` the message is available from [`fc_last_error`] on the
//! same thread. Strings returned through out-parameters are owned by the
//! caller and released with [`fc_string_free`]. Panics never cross the
//! boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use fibercheck::fibered::OverContext;
use fibercheck::mask::Bound;
use fibercheck::model::{self, ModelFile, Resolved};
use fibercheck::report::{self, Format};
use fibercheck::topological::{classify, Classification};
use fibercheck::verify::{verify_resolved, VerifyOptions};

/// Result of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FcStatus {
    Ok = 0,
    /// The call ran and a checked property does not hold.
    Failed = 1,
    /// Malformed model text, unknown identifiers, or invalid models.
    InvalidInput = 2,
    NullArgument = 3,
    NotFound = 4,
    /// A bug inside the library; the handle arguments stay valid.
    Panic = 5,
}

/// Output flavour of text reports.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FcFormat {
    Text = 0,
    Machine = 1,
}

/// A parsed and resolved model file.
pub struct FcModel {
    resolved: Resolved,
}

/// The classification of one functor.
pub struct FcClassification {
    cl: Classification,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

type Outcome = Result<FcStatus, (FcStatus, String)>;

fn guard(f: impl FnOnce() -> Outcome) -> FcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            status
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal error: {msg}"));
            FcStatus::Panic
        }
    }
}

fn input(e: fibercheck::Error) -> (FcStatus, String) {
    (FcStatus::InvalidInput, e.to_string())
}

fn null(what: &str) -> (FcStatus, String) {
    (FcStatus::NullArgument, format!("`{what}` is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, (FcStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (FcStatus::InvalidInput, format!("`{what}` is not UTF-8")))
}

fn out_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("interior NULs removed").into_raw()
}

unsafe fn put<T>(out: *mut T, v: T, what: &str) -> Result<(), (FcStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    *out = v;
    Ok(())
}

fn model_handle(m: ModelFile) -> Result<*mut FcModel, (FcStatus, String)> {
    let resolved = m.resolve().map_err(input)?;
    Ok(Box::into_raw(Box::new(FcModel { resolved })))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// A copy of the last error message on this thread, or null. Free with
/// [`fc_string_free`].
#[no_mangle]
pub extern "C" fn fc_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| match &*e.borrow() {
        Some(c) => c.clone().into_raw(),
        None => ptr::null_mut(),
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses model text.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_model_parse(text: *const c_char, out: *mut *mut FcModel) -> FcStatus {
    guard(|| {
        let text = str_arg(text, "text")?;
        let m = model::parse(text).map_err(|e| (FcStatus::InvalidInput, e.to_string()))?;
        put(out, model_handle(m)?, "out")?;
        Ok(FcStatus::Ok)
    })
}

/// Reads and parses a model file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_model_read(path: *const c_char, out: *mut *mut FcModel) -> FcStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        let m = ModelFile::read(Path::new(path)).map_err(input)?;
        put(out, model_handle(m)?, "out")?;
        Ok(FcStatus::Ok)
    })
}

/// # Safety
/// `model` must come from [`fc_model_parse`] or [`fc_model_read`] and not
/// have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn fc_model_free(model: *mut FcModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Number of functor sections.
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_model_functor_count(model: *const FcModel, out: *mut usize) -> FcStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        put(out, m.resolved.functors.len(), "out")?;
        Ok(FcStatus::Ok)
    })
}

/// Name of the functor section at `index`.
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_model_functor_name(
    model: *const FcModel,
    index: usize,
    out: *mut *mut c_char,
) -> FcStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        let u = m
            .resolved
            .functors
            .get(index)
            .ok_or_else(|| (FcStatus::NotFound, format!("no functor at index {index}")))?;
        put(out, out_string(u.name.clone()), "out")?;
        Ok(FcStatus::Ok)
    })
}

/// Checks every section against the axioms. Returns `FC_STATUS_FAILED` when
/// some section is invalid; the report lists the violations.
///
/// # Safety
/// `model` must be a live handle; `report` must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn fc_validate(model: *const FcModel, report: *mut *mut c_char) -> FcStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        let mut text = String::new();
        let mut ok = true;
        for (what, name, rep) in m.resolved.validate() {
            ok &= rep.is_valid();
            text.push_str(&format!("{what} {name}: {rep}"));
        }
        if !report.is_null() {
            *report = out_string(text);
        }
        Ok(if ok { FcStatus::Ok } else { FcStatus::Failed })
    })
}

/// Classifies the functor named `functor`, or the only functor when
/// `functor` is null. `max_family_size` bounds the enumerated families;
/// zero means every family.
///
/// # Safety
/// `model` must be a live handle; `functor` null or NUL-terminated; `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn fc_classify(
    model: *const FcModel,
    functor: *const c_char,
    max_family_size: usize,
    out: *mut *mut FcClassification,
) -> FcStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        let u = if functor.is_null() {
            match m.resolved.functors.as_slice() {
                [u] => u,
                _ => {
                    return Err((
                        FcStatus::InvalidInput,
                        "name a functor: the model does not have exactly one".into(),
                    ))
                }
            }
        } else {
            let name = str_arg(functor, "functor")?;
            m.resolved
                .functor(name)
                .ok_or_else(|| (FcStatus::NotFound, format!("no functor `{name}`")))?
        };
        let bound = match max_family_size {
            0 => Bound::Auto,
            k => Bound::AtMost(k),
        };
        let ctx = OverContext::new(u.clone()).map_err(input)?;
        let cl = classify(&ctx, bound).map_err(input)?;
        put(out, Box::into_raw(Box::new(FcClassification { cl })), "out")?;
        Ok(FcStatus::Ok)
    })
}

/// # Safety
/// `cl` must come from [`fc_classify`] and not have been freed. Null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn fc_classification_free(cl: *mut FcClassification) {
    if !cl.is_null() {
        drop(Box::from_raw(cl));
    }
}

/// Value of a named flag: faithful, prefibration, fibration,
/// pretopological, topological, e-functor or m-functor.
///
/// # Safety
/// `cl` must be a live handle; `flag` NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fc_classification_flag(
    cl: *const FcClassification,
    flag: *const c_char,
    out: *mut bool,
) -> FcStatus {
    guard(|| {
        let c = cl.as_ref().ok_or_else(|| null("cl"))?;
        let flag = str_arg(flag, "flag")?;
        let v = c
            .cl
            .flags()
            .into_iter()
            .find(|(n, _)| *n == flag)
            .map(|(_, v)| v)
            .ok_or_else(|| (FcStatus::NotFound, format!("unknown flag `{flag}`")))?;
        put(out, v, "out")?;
        Ok(FcStatus::Ok)
    })
}

/// The classification report, as printed by `fibercheck classify`.
///
/// # Safety
/// `cl` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fc_classification_report(
    cl: *const FcClassification,
    format: FcFormat,
    routes: bool,
    out: *mut *mut c_char,
) -> FcStatus {
    guard(|| {
        let c = cl.as_ref().ok_or_else(|| null("cl"))?;
        let f = match format {
            FcFormat::Text => Format::Text,
            FcFormat::Machine => Format::Machine,
        };
        put(out, out_string(report::classification(&c.cl, routes, f)), "out")?;
        Ok(FcStatus::Ok)
    })
}

/// Runs every invariant suite on the model's functors and pseudofunctors.
/// Returns `FC_STATUS_FAILED` when some check fails.
///
/// # Safety
/// `model` must be a live handle; `report` writable or null.
#[no_mangle]
pub unsafe extern "C" fn fc_verify(model: *const FcModel, report: *mut *mut c_char) -> FcStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        let rep = verify_resolved(&m.resolved, VerifyOptions::default()).map_err(input)?;
        if !report.is_null() {
            *report = out_string(rep.to_string());
        }
        Ok(if rep.passed() { FcStatus::Ok } else { FcStatus::Failed })
    })
}
