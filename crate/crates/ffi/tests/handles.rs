use std::ffi::{c_char, CStr, CString};
use std::ptr;

use gevrey_lab_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 256];
    let n = unsafe { gvl_last_error(buf.as_mut_ptr(), buf.len()) };
    assert!(n > 0);
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

fn grid(n: usize, l: f64) -> *mut GvlGrid {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { gvl_grid_new(n, l, 2.0 / 3.0, &mut g) }, GvlStatus::Ok);
    g
}

#[test]
fn invalid_grid_reports_message() {
    let mut g = ptr::null_mut();
    let s = unsafe { gvl_grid_new(7, 1.0, 2.0 / 3.0, &mut g) };
    assert_eq!(s, GvlStatus::InvalidArgument);
    assert!(g.is_null());
    assert!(last_error().contains("grid"));
}

#[test]
fn null_arguments_are_rejected() {
    assert_eq!(unsafe { gvl_grid_new(8, 1.0, 1.0, ptr::null_mut()) }, GvlStatus::NullPointer);
    let mut out = 0.0;
    assert_eq!(unsafe { gvl_field_norm(ptr::null(), 0.0, 0.0, &mut out) }, GvlStatus::NullPointer);
    assert!(last_error().contains("field"));
    unsafe {
        gvl_grid_free(ptr::null_mut());
        gvl_field_free(ptr::null_mut());
    }
}

#[test]
fn samples_round_trip_through_handles() {
    let g = grid(8, 2.0 * std::f64::consts::PI);
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { gvl_field_random(g, 1.0, 5, &mut f) }, GvlStatus::Ok);
    let len = unsafe { gvl_grid_sample_count(g) };
    assert_eq!(len, 3 * 512);
    let mut buf = vec![0.0; len];
    assert_eq!(unsafe { gvl_field_samples(f, buf.as_mut_ptr(), len) }, GvlStatus::Ok);
    assert_eq!(unsafe { gvl_field_samples(f, buf.as_mut_ptr(), len - 1) }, GvlStatus::InvalidArgument);
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { gvl_field_from_samples(g, buf.as_ptr(), len, &mut h) }, GvlStatus::Ok);
    let (mut a, mut b) = (0.0, 0.0);
    unsafe {
        assert_eq!(gvl_field_norm(f, 0.5, 0.0, &mut a), GvlStatus::Ok);
        assert_eq!(gvl_field_norm(h, 0.5, 0.0, &mut b), GvlStatus::Ok);
    }
    assert!((a - b).abs() <= 1e-13 * a);
    unsafe {
        gvl_field_free(f);
        gvl_field_free(h);
        gvl_grid_free(g);
    }
}

#[test]
fn oversized_weight_is_unreliable() {
    let g = grid(16, 2.0 * std::f64::consts::PI);
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { gvl_field_random(g, 4.0, 1, &mut f) }, GvlStatus::Ok);
    let mut v = 0.0;
    assert_eq!(unsafe { gvl_field_norm(f, 0.0, 50.0, &mut v) }, GvlStatus::UnreliableWeight);
    assert!(last_error().contains("theta"));
    unsafe {
        gvl_field_free(f);
        gvl_grid_free(g);
    }
}

#[test]
fn leray_output_is_solenoidal_and_heat_decays() {
    let g = grid(8, 2.0 * std::f64::consts::PI);
    let (mut f, mut p, mut m) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
    unsafe {
        assert_eq!(gvl_field_random(g, 1.0, 2, &mut f), GvlStatus::Ok);
        assert_eq!(gvl_field_leray(f, &mut p), GvlStatus::Ok);
        assert_eq!(gvl_march(p, GvlModel::Heat, 0.0, 0.5, 0.01, &mut m), GvlStatus::Ok);
        assert_eq!(gvl_field_time(m), 0.5);
        let (mut a, mut b) = (0.0, 0.0);
        gvl_field_norm(p, 0.0, 0.0, &mut a);
        gvl_field_norm(m, 0.0, 0.0, &mut b);
        // every retained mode has |k| ≥ 1, so the decay is at least e^{-t}
        assert!(b <= a * (-0.5f64).exp() * (1.0 + 1e-12));
        for h in [f, p, m] {
            gvl_field_free(h);
        }
        gvl_grid_free(g);
    }
}

#[test]
fn exact_radius_and_torus_estimate() {
    let mut exact = 0.0;
    assert_eq!(unsafe { gvl_exact_radius(1.0, &mut exact) }, GvlStatus::Ok);
    assert!((exact - (12.0 * 2f64.ln()).sqrt()).abs() < 1e-14);
    let g = grid(64, 20.0);
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { gvl_field_exact(g, 1.0, &mut f) }, GvlStatus::Ok);
    let (mut r, mut ok) = (0.0, 0);
    assert_eq!(unsafe { gvl_field_radius(f, &mut r, &mut ok) }, GvlStatus::Ok);
    assert_eq!(ok, 1);
    assert!((r / exact - 1.0).abs() < 0.05, "{r} vs {exact}");
    let mut n = 0.0;
    assert_eq!(unsafe { gvl_exact_norm_sq(1.0, 0.0, 0.0, &mut n) }, GvlStatus::Ok);
    assert!(n > 0.0);
    assert_eq!(unsafe { gvl_exact_norm_sq(1.0, 0.0, 10.0, &mut n) }, GvlStatus::UnreliableWeight);
    unsafe {
        gvl_field_free(f);
        gvl_grid_free(g);
    }
}

#[test]
fn snapshot_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = CString::new(dir.path().join("f.gvry").to_str().unwrap()).unwrap();
    let g = grid(8, 3.0);
    let (mut f, mut h) = (ptr::null_mut(), ptr::null_mut());
    unsafe {
        assert_eq!(gvl_field_taylor_green(g, 2.0, &mut f), GvlStatus::Ok);
        assert_eq!(gvl_snapshot_write(f, path.as_ptr()), GvlStatus::Ok);
        assert_eq!(gvl_snapshot_read(path.as_ptr(), &mut h), GvlStatus::Ok);
        let len = gvl_grid_sample_count(g);
        let (mut a, mut b) = (vec![0.0; len], vec![0.0; len]);
        gvl_field_samples(f, a.as_mut_ptr(), len);
        gvl_field_samples(h, b.as_mut_ptr(), len);
        assert_eq!(a, b);
        let missing = CString::new(dir.path().join("nope").to_str().unwrap()).unwrap();
        let mut z = ptr::null_mut();
        assert_eq!(gvl_snapshot_read(missing.as_ptr(), &mut z), GvlStatus::Io);
        std::fs::write(dir.path().join("bad"), b"not a snapshot").unwrap();
        let bad = CString::new(dir.path().join("bad").to_str().unwrap()).unwrap();
        assert_eq!(gvl_snapshot_read(bad.as_ptr(), &mut z), GvlStatus::Format);
        gvl_field_free(f);
        gvl_field_free(h);
        gvl_grid_free(g);
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(gvl_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
