//! C interface for the nilcontact kernel.
//!
//! Problems come in as JSON documents (or built-in example names) and results
//! go out as report handles that render to JSON or text. Handles are opaque;
//! every constructor has a matching `_free`, and strings returned by the
//! library are released with `nc_string_free`. Functions set a thread-local
//! error message retrievable with `nc_last_error_message`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use nilcontact::catalog;
use nilcontact::document::{DocumentError, Problem, ReportDocument};
use nilcontact::run::{
    run_classify, run_connection, run_contact, run_subalgebra, run_validate, RunOptions,
};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NcStatus {
    NcOk = 0,
    NcErrNullArgument = 1,
    NcErrUtf8 = 2,
    NcErrParse = 3,
    NcErrUnknownExample = 4,
    NcErrInvalidInput = 5,
    NcErrInternal = 6,
}

/// Options shared by every command runner.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct NcOptions {
    /// Absolute tolerance for residual verdicts.
    pub tolerance: f64,
    /// Random directions drawn by sampled checks.
    pub samples: u32,
    /// Seed for sampled checks.
    pub seed: u64,
    /// Rescale the basis so the largest structure constant has unit size.
    pub normalize: bool,
}

/// Opaque problem handle.
pub struct NcProblem(Problem);

/// Opaque report handle.
pub struct NcReport(ReportDocument);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let owned = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|cell| *cell.borrow_mut() = Some(owned));
}

fn clear_error() {
    LAST_ERROR.with(|cell| *cell.borrow_mut() = None);
}

/// Default options: tolerance 1e-9, 64 samples, seed 0, normalization on.
#[no_mangle]
pub extern "C" fn nc_options_default() -> NcOptions {
    let d = RunOptions::default();
    NcOptions {
        tolerance: d.tolerance,
        samples: d.samples,
        seed: d.seed,
        normalize: d.normalize,
    }
}

/// Library version as a static NUL-terminated string; do not free.
#[no_mangle]
pub extern "C" fn nc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// The last error message on this thread as a newly allocated string
/// (empty when no error is recorded); release with `nc_string_free`.
#[no_mangle]
pub extern "C" fn nc_last_error_message() -> *mut c_char {
    let msg = LAST_ERROR
        .with(|cell| cell.borrow().clone())
        .unwrap_or_default();
    msg.into_raw()
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, NcStatus> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(NcStatus::NcErrNullArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        NcStatus::NcErrUtf8
    })
}

/// Parse a JSON problem document.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid location; on
/// success `*out` owns a problem released with `nc_problem_free`.
#[no_mangle]
pub unsafe extern "C" fn nc_problem_from_json(
    json: *const c_char,
    out: *mut *mut NcProblem,
) -> NcStatus {
    if out.is_null() {
        set_error("null output argument");
        return NcStatus::NcErrNullArgument;
    }
    *out = std::ptr::null_mut();
    let text = match read_str(json) {
        Ok(t) => t,
        Err(status) => return status,
    };
    match Problem::from_json(text) {
        Ok(problem) => {
            clear_error();
            *out = Box::into_raw(Box::new(NcProblem(problem)));
            NcStatus::NcOk
        }
        Err(e @ DocumentError::Json { .. }) => {
            set_error(&e.to_string());
            NcStatus::NcErrParse
        }
        Err(e) => {
            set_error(&e.to_string());
            NcStatus::NcErrInvalidInput
        }
    }
}

/// Load a built-in example by name (see the CLI `examples` listing).
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid location; on
/// success `*out` owns a problem released with `nc_problem_free`.
#[no_mangle]
pub unsafe extern "C" fn nc_problem_from_example(
    name: *const c_char,
    out: *mut *mut NcProblem,
) -> NcStatus {
    if out.is_null() {
        set_error("null output argument");
        return NcStatus::NcErrNullArgument;
    }
    *out = std::ptr::null_mut();
    let name = match read_str(name) {
        Ok(n) => n,
        Err(status) => return status,
    };
    match catalog::lookup(name) {
        Some(ex) => {
            clear_error();
            *out = Box::into_raw(Box::new(NcProblem(Problem::from_example(&ex))));
            NcStatus::NcOk
        }
        None => {
            set_error(&format!("unknown example {name:?}"));
            NcStatus::NcErrUnknownExample
        }
    }
}

/// # Safety
/// `problem` must come from a constructor of this library and not already be
/// freed; passing NULL is a no-op.
#[no_mangle]
pub unsafe extern "C" fn nc_problem_free(problem: *mut NcProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

unsafe fn options_or_default(opts: *const NcOptions) -> RunOptions {
    if opts.is_null() {
        RunOptions::default()
    } else {
        let o = &*opts;
        RunOptions {
            tolerance: o.tolerance,
            samples: o.samples,
            seed: o.seed,
            normalize: o.normalize,
        }
    }
}

unsafe fn run_command<F>(
    problem: *const NcProblem,
    opts: *const NcOptions,
    out: *mut *mut NcReport,
    f: F,
) -> NcStatus
where
    F: FnOnce(&Problem, &RunOptions) -> Result<ReportDocument, DocumentError>,
{
    if out.is_null() {
        set_error("null output argument");
        return NcStatus::NcErrNullArgument;
    }
    *out = std::ptr::null_mut();
    if problem.is_null() {
        set_error("null problem handle");
        return NcStatus::NcErrNullArgument;
    }
    let problem = &(*problem).0;
    let options = options_or_default(opts);
    match catch_unwind(AssertUnwindSafe(|| f(problem, &options))) {
        Ok(Ok(report)) => {
            clear_error();
            *out = Box::into_raw(Box::new(NcReport(report)));
            NcStatus::NcOk
        }
        Ok(Err(e)) => {
            set_error(&e.to_string());
            NcStatus::NcErrInvalidInput
        }
        Err(_) => {
            set_error("internal panic");
            NcStatus::NcErrInternal
        }
    }
}

/// Jacobi identity and almost-contact axioms.
///
/// # Safety
/// `problem` must be a live handle; `opts` may be NULL for defaults; `out`
/// must be valid and on success receives a report to free with
/// `nc_report_free`.
#[no_mangle]
pub unsafe extern "C" fn nc_run_validate(
    problem: *const NcProblem,
    opts: *const NcOptions,
    out: *mut *mut NcReport,
) -> NcStatus {
    run_command(problem, opts, out, |p, o| Ok(run_validate(p, o)))
}

/// Lower central series, center, 2-step flag, nonsingularity verdict.
///
/// # Safety
/// See `nc_run_validate`.
#[no_mangle]
pub unsafe extern "C" fn nc_run_classify(
    problem: *const NcProblem,
    opts: *const NcOptions,
    out: *mut *mut NcReport,
) -> NcStatus {
    run_command(problem, opts, out, |p, o| Ok(run_classify(p, o)))
}

/// Cosymplectic/Sasakian classification and the bracket consequence grids.
///
/// # Safety
/// See `nc_run_validate`.
#[no_mangle]
pub unsafe extern "C" fn nc_run_contact(
    problem: *const NcProblem,
    opts: *const NcOptions,
    out: *mut *mut NcReport,
) -> NcStatus {
    run_command(problem, opts, out, |p, o| Ok(run_contact(p, o)))
}

/// Levi-Civita table with torsion/compatibility residuals.
///
/// # Safety
/// See `nc_run_validate`.
#[no_mangle]
pub unsafe extern "C" fn nc_run_connection(
    problem: *const NcProblem,
    opts: *const NcOptions,
    out: *mut *mut NcReport,
) -> NcStatus {
    run_command(problem, opts, out, |p, o| Ok(run_connection(p, o)))
}

/// Subalgebra geometry; `name` selects one subalgebra from the input or,
/// when NULL, runs all of them.
///
/// # Safety
/// See `nc_run_validate`; `name`, when non-NULL, must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn nc_run_subalg(
    problem: *const NcProblem,
    name: *const c_char,
    opts: *const NcOptions,
    out: *mut *mut NcReport,
) -> NcStatus {
    let filter = if name.is_null() {
        None
    } else {
        match read_str(name) {
            Ok(n) => Some(n.to_string()),
            Err(status) => return status,
        }
    };
    run_command(problem, opts, out, |p, o| {
        run_subalgebra(p, filter.as_deref(), o)
    })
}

/// 1 when every binding check passes, 0 when some check failed,
/// -1 on a NULL handle.
///
/// # Safety
/// `report` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn nc_report_all_pass(report: *const NcReport) -> i32 {
    if report.is_null() {
        return -1;
    }
    if (*report).0.all_pass() {
        1
    } else {
        0
    }
}

/// Deterministic JSON rendering of the report; release with `nc_string_free`.
///
/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn nc_report_to_json(report: *const NcReport) -> *mut c_char {
    if report.is_null() {
        set_error("null report handle");
        return std::ptr::null_mut();
    }
    CString::new((*report).0.to_json())
        .map(CString::into_raw)
        .unwrap_or(std::ptr::null_mut())
}

/// Human-readable rendering of the report; release with `nc_string_free`.
///
/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn nc_report_to_text(report: *const NcReport) -> *mut c_char {
    if report.is_null() {
        set_error("null report handle");
        return std::ptr::null_mut();
    }
    CString::new((*report).0.to_text())
        .map(CString::into_raw)
        .unwrap_or(std::ptr::null_mut())
}

/// # Safety
/// `report` must come from a runner of this library and not already be
/// freed; passing NULL is a no-op.
#[no_mangle]
pub unsafe extern "C" fn nc_report_free(report: *mut NcReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `s` must be a string returned by this library and not already freed;
/// passing NULL is a no-op.
#[no_mangle]
pub unsafe extern "C" fn nc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
