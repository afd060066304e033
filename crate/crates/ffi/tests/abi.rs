use std::ffi::CStr;
use std::os::raw::c_char;
use std::ptr;

use extremal_decomp_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(ed_last_error_message()) }.to_string_lossy().into_owned()
}

unsafe fn take_string(p: *mut c_char) -> String {
    let s = CStr::from_ptr(p).to_string_lossy().into_owned();
    ed_string_free(p);
    s
}

#[test]
fn eval_matches_core() {
    let mut v = 0.0;
    let st = unsafe { ed_eval(EdFunction::Psi1, 0.7, 0.390335, &mut v) };
    assert_eq!(st, EdStatus::Ok);
    assert_eq!(v, extremal_decomp::specfun::eval_psi1(0.7, 0.390335).unwrap());
    assert_eq!(last_error(), "");

    let st = unsafe { ed_eval(EdFunction::F, 0.35, 2.0, &mut v) };
    assert_eq!(st, EdStatus::Ok);
    assert!((v - 2f64.powf(-0.7)).abs() < 1e-15);

    let st = unsafe { ed_eval(EdFunction::X0, 0.0, f64::NAN, &mut v) };
    assert_eq!(st, EdStatus::Ok);
    assert!((v - 1.324_660_7).abs() < 1e-7);
}

#[test]
fn eval_errors_carry_status_and_message() {
    let mut v = 0.0;
    assert_eq!(unsafe { ed_eval(EdFunction::Psi, 0.9, 1.0, &mut v) }, EdStatus::Domain);
    assert!(last_error().contains("delta"));
    assert_eq!(unsafe { ed_eval(EdFunction::Psi2, 0.0, 2.0, &mut v) }, EdStatus::Domain);
    assert_eq!(unsafe { ed_eval(EdFunction::Psi, 0.0, 1.0, ptr::null_mut()) }, EdStatus::NullPointer);
}

#[test]
fn bounds_and_per_alpha_not_applicable() {
    let a = [0.4; 5];
    let (mut t, mut p) = (0.0, 0.0);
    unsafe {
        assert_eq!(ed_theorem_bound(5, 1.0, 0.35, a.as_ptr(), 5, &mut t), EdStatus::Ok);
        assert_eq!(ed_per_alpha_bound(5, 1.0, 0.35, a.as_ptr(), 5, &mut p), EdStatus::Ok);
    }
    assert!(t > 0.0 && (t - p).abs() <= 1e-12 * t);

    let wide = [1.8, 0.05, 0.05, 0.05, 0.05];
    let st = unsafe { ed_per_alpha_bound(5, 1.75, 0.0, wide.as_ptr(), 5, &mut p) };
    assert_eq!(st, EdStatus::Domain);

    let bad = [0.5; 5];
    let st = unsafe { ed_theorem_bound(5, 1.0, 0.0, bad.as_ptr(), 5, &mut t) };
    assert_eq!(st, EdStatus::Constraint);
    let st = unsafe { ed_theorem_bound(4, 1.0, 0.0, a.as_ptr(), 4, &mut t) };
    assert_eq!(st, EdStatus::Validity);
}

#[test]
fn solve_handle_round_trip() {
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(ed_solve(6, 1.0, 0.35, 8, 1, &mut h), EdStatus::Ok);
        assert_eq!(ed_solve_result_len(h), 6);
        let target = 2.0 / 6.0;
        for i in 0..6 {
            let mut x = 0.0;
            assert_eq!(ed_solve_result_x(h, i, &mut x), EdStatus::Ok);
            assert!((x - target).abs() < 1e-6);
        }
        let mut x = 0.0;
        assert_eq!(ed_solve_result_x(h, 6, &mut x), EdStatus::OutOfRange);
        assert!(ed_solve_result_objective(h).is_finite());
        ed_solve_result_free(h);
        ed_solve_result_free(ptr::null_mut());
        assert_eq!(ed_solve_result_len(ptr::null()), 0);
    }
}

#[test]
fn verify_report_json() {
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(ed_verify(5, 1.75, 0.7, &mut h), EdStatus::Ok);
        assert_eq!(ed_report_all_hold(h), 1);
        let mut s = ptr::null_mut();
        assert_eq!(ed_report_json(h, &mut s), EdStatus::Ok);
        let json: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
        assert_eq!(json["n"], 5);
        assert!(json["inequality_chain"].as_array().unwrap().len() > 5);
        ed_report_free(h);
    }
}

#[test]
fn montecarlo_counts() {
    let mut v = u64::MAX;
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(ed_montecarlo(5, 1.0, 0.35, 200, 3, &mut v, &mut s), EdStatus::Ok);
        let json: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
        assert_eq!(v, 0);
        assert_eq!(json["trials"], 200);
    }
}

#[test]
fn quaddiff_critical_points_and_svg() {
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(ed_quaddiff_new(5, 1.0, &mut h), EdStatus::Ok);
        assert_eq!(ed_quaddiff_zero_count(h), 5);
        assert_eq!(ed_quaddiff_pole_count(h), 6);
        let rho = (1.0f64 / 24.0).powf(0.2);
        for i in 0..5 {
            let (mut re, mut im) = (0.0, 0.0);
            assert_eq!(ed_quaddiff_zero(h, i, &mut re, &mut im), EdStatus::Ok);
            assert!((re.hypot(im) - rho).abs() < 1e-12);
            let (mut qr, mut qi) = (0.0, 0.0);
            assert_eq!(ed_quaddiff_eval(h, re, im, &mut qr, &mut qi), EdStatus::Ok);
            assert!(qr.hypot(qi) < 1e-10);
        }
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(ed_quaddiff_eval(h, 1.0, 0.0, &mut re, &mut im), EdStatus::PoleProximity);
        assert_eq!(ed_quaddiff_pole(h, 6, &mut re, &mut im), EdStatus::OutOfRange);

        let mut s = ptr::null_mut();
        assert_eq!(ed_quaddiff_svg(h, false, &mut s), EdStatus::Ok);
        let svg = take_string(s);
        assert!(svg.starts_with("<?xml"));
        assert_eq!(svg.matches("class=\"zero\"").count(), 5);
        ed_quaddiff_free(h);
    }
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { ed_quaddiff_new(3, 9.0, &mut h) }, EdStatus::Validity);
    assert!(h.is_null());
}

#[test]
fn header_is_current_and_valid_c() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/extremal_decomp.h")).unwrap();
    for sym in ["ed_eval", "ed_solve", "ed_verify", "ed_quaddiff_svg", "ed_string_free", "ED_STATUS_OK"] {
        assert!(header.contains(sym), "{sym} missing from header");
    }
    // compile-check with the system C compiler when one is available
    match std::process::Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-x", "c"])
        .arg(dir.join("include/extremal_decomp.h"))
        .output()
    {
        Ok(o) => assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr)),
        Err(_) => eprintln!("no C compiler found; skipped syntax check"),
    }
}
