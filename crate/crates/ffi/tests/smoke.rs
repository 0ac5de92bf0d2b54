//! Exercises the C entry points the way a foreign runtime would: build
//! problems, run commands, read reports, free everything, and check that
//! error paths set status codes and messages.

use std::ffi::{CStr, CString};

use nilcontact_ffi::*;

unsafe fn take_string(ptr: *mut std::ffi::c_char) -> String {
    assert!(!ptr.is_null());
    let s = CStr::from_ptr(ptr).to_string_lossy().into_owned();
    nc_string_free(ptr);
    s
}

#[test]
fn example_problem_runs_contact_end_to_end() {
    unsafe {
        let name = CString::new("h3-sasakian").unwrap();
        let mut problem: *mut NcProblem = std::ptr::null_mut();
        assert_eq!(
            nc_problem_from_example(name.as_ptr(), &mut problem),
            NcStatus::NcOk
        );
        assert!(!problem.is_null());

        let opts = nc_options_default();
        let mut report: *mut NcReport = std::ptr::null_mut();
        assert_eq!(nc_run_contact(problem, &opts, &mut report), NcStatus::NcOk);
        assert_eq!(nc_report_all_pass(report), 1);

        let json = take_string(nc_report_to_json(report));
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed["command"], "contact");
        assert_eq!(parsed["sections"][1]["facts"]["verdict"], "sasakian");

        let text = take_string(nc_report_to_text(report));
        assert!(text.contains("sasakian"));

        nc_report_free(report);
        nc_problem_free(problem);
    }
}

#[test]
fn json_problem_parses_and_validates() {
    let doc = r#"{
        "dim": 3,
        "brackets": [{"i": 1, "j": 2, "coeffs": {"3": 1.0}}],
        "metric": "identity"
    }"#;
    unsafe {
        let json = CString::new(doc).unwrap();
        let mut problem: *mut NcProblem = std::ptr::null_mut();
        assert_eq!(
            nc_problem_from_json(json.as_ptr(), &mut problem),
            NcStatus::NcOk
        );
        let mut report: *mut NcReport = std::ptr::null_mut();
        assert_eq!(
            nc_run_validate(problem, std::ptr::null(), &mut report),
            NcStatus::NcOk
        );
        assert_eq!(nc_report_all_pass(report), 1);
        nc_report_free(report);

        // The subalgebra runner rejects names the document does not define.
        let missing = CString::new("missing").unwrap();
        let mut report2: *mut NcReport = std::ptr::null_mut();
        assert_eq!(
            nc_run_subalg(problem, missing.as_ptr(), std::ptr::null(), &mut report2),
            NcStatus::NcErrInvalidInput
        );
        assert!(report2.is_null());
        let message = take_string(nc_last_error_message());
        assert!(message.contains("missing"));

        nc_problem_free(problem);
    }
}

#[test]
fn error_paths_report_status_and_message() {
    unsafe {
        let mut problem: *mut NcProblem = std::ptr::null_mut();

        assert_eq!(
            nc_problem_from_json(std::ptr::null(), &mut problem),
            NcStatus::NcErrNullArgument
        );

        let bad = CString::new("{\"dim\": 3,").unwrap();
        assert_eq!(
            nc_problem_from_json(bad.as_ptr(), &mut problem),
            NcStatus::NcErrParse
        );
        let message = take_string(nc_last_error_message());
        assert!(message.contains("line"), "got {message:?}");

        let schema =
            CString::new(r#"{"dim": 3, "brackets": [{"i": 2, "j": 1, "coeffs": {}}]}"#).unwrap();
        assert_eq!(
            nc_problem_from_json(schema.as_ptr(), &mut problem),
            NcStatus::NcErrInvalidInput
        );

        let unknown = CString::new("not-a-thing").unwrap();
        assert_eq!(
            nc_problem_from_example(unknown.as_ptr(), &mut problem),
            NcStatus::NcErrUnknownExample
        );

        assert_eq!(nc_report_all_pass(std::ptr::null()), -1);
        nc_string_free(std::ptr::null_mut());
        nc_problem_free(std::ptr::null_mut());
        nc_report_free(std::ptr::null_mut());
    }
}

#[test]
fn version_is_exposed() {
    unsafe {
        let v = CStr::from_ptr(nc_version()).to_str().unwrap();
        assert_eq!(v, env!("CARGO_PKG_VERSION"));
    }
}

#[test]
fn generated_header_declares_the_surface() {
    let header = std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/nilcontact.h");
    let text = std::fs::read_to_string(header).expect("header generated at build time");
    for symbol in [
        "nc_problem_from_json",
        "nc_problem_from_example",
        "nc_run_validate",
        "nc_run_subalg",
        "nc_report_to_json",
        "nc_string_free",
        "nc_last_error_message",
        "NcStatus",
        "NcOptions",
    ] {
        assert!(text.contains(symbol), "header is missing {symbol}");
    }
}
