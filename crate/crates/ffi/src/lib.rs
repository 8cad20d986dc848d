//! C interface to the solver, the exact Burgers example and the radius
//! diagnostics.
//!
//! Objects cross the boundary as opaque handles created by `gvl_*_new`-style
//! constructors and released with the matching `*_free`. Every fallible call
//! returns a [`GvlStatus`]; the message of the most recent failure on the
//! calling thread is available through [`gvl_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use gevrey_lab::diagnostics::estimate_radius;
use gevrey_lab::lab::{read_snapshot, taylor_green, write_snapshot};
use gevrey_lab::mild::{march, MarchOptions, NoHook};
use gevrey_lab::oracle::{exact_radius, gevrey_norm_checked, sample_on_torus, ExampleParams, OracleNormOptions, TorusRoute};
use gevrey_lab::spectral::{
    leray_project, norm_l2, ModelConfig, MultiplierSpec, RandomFieldSpec, SpectralField, WavenumberGrid,
};
use gevrey_lab::LabError;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GvlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// An exponential weight exceeds what the field's round-off allows.
    UnreliableWeight = 3,
    /// Blow-up, divergence or another numerical failure.
    Numerical = 4,
    Io = 5,
    /// Malformed or incompatible snapshot.
    Format = 6,
    Panic = 7,
}

/// Models understood by [`gvl_march`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GvlModel {
    NavierStokes = 0,
    Burgers = 1,
    Heat = 2,
}

/// Periodic box with its wavenumber tables.
pub struct GvlGrid(WavenumberGrid);

/// Spectral vector field.
pub struct GvlField(SpectralField);

thread_local! {
    static LAST_ERROR: RefCell<Vec<u8>> = const { RefCell::new(Vec::new()) };
}

fn set_error(msg: &str) {
    LAST_ERROR.with(|e| {
        let mut e = e.borrow_mut();
        e.clear();
        e.extend(msg.bytes().filter(|&b| b != 0));
    });
}

fn status_of(e: &LabError) -> GvlStatus {
    match e {
        LabError::UnreliableWeight { .. } | LabError::UnreliableWeightAtNode { .. } => GvlStatus::UnreliableWeight,
        LabError::Io { .. } => GvlStatus::Io,
        LabError::Format(_) | LabError::VersionMismatch { .. } => GvlStatus::Format,
        LabError::InvalidGrid(_)
        | LabError::ShapeMismatch { .. }
        | LabError::GridMismatch
        | LabError::InvalidArgument(_)
        | LabError::Config(_)
        | LabError::TimeOutOfRange { .. }
        | LabError::SingularPoint
        | LabError::InsufficientSamples { .. } => GvlStatus::InvalidArgument,
        _ => GvlStatus::Numerical,
    }
}

/// Run `f`, translating errors and panics into status codes.
fn guarded<F: FnOnce() -> Result<(), (GvlStatus, String)>>(f: F) -> GvlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GvlStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            GvlStatus::Panic
        }
    }
}

trait IntoFfi<T> {
    fn ffi(self) -> Result<T, (GvlStatus, String)>;
}

impl<T> IntoFfi<T> for Result<T, LabError> {
    fn ffi(self) -> Result<T, (GvlStatus, String)> {
        self.map_err(|e| (status_of(&e), e.to_string()))
    }
}

fn null(what: &str) -> (GvlStatus, String) {
    (GvlStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (GvlStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn store<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

unsafe fn path_arg<'a>(p: *const c_char) -> Result<&'a Path, (GvlStatus, String)> {
    if p.is_null() {
        return Err(null("path"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map(Path::new)
        .map_err(|_| (GvlStatus::InvalidArgument, "path is not valid UTF-8".into()))
}

/// Copy the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length without the NUL.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn gvl_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = e.len().min(len - 1);
            ptr::copy_nonoverlapping(e.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        e.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn gvl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Create an `n³` grid on a box of side `box_length`, keeping modes with
/// `|m_i| ≤ dealias·n/2`.
///
/// # Safety
/// `out` must be a valid pointer to write the handle to.
#[no_mangle]
pub unsafe extern "C" fn gvl_grid_new(n: usize, box_length: f64, dealias: f64, out: *mut *mut GvlGrid) -> GvlStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let g = WavenumberGrid::new(n, box_length, dealias).ffi()?;
        store(out, GvlGrid(g));
        Ok(())
    })
}

/// # Safety
/// `grid` must be null or a handle from [`gvl_grid_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gvl_grid_free(grid: *mut GvlGrid) {
    if !grid.is_null() {
        drop(Box::from_raw(grid));
    }
}

/// Number of real samples `3n³` of a field on this grid.
///
/// # Safety
/// `grid` must be a live grid handle.
#[no_mangle]
pub unsafe extern "C" fn gvl_grid_sample_count(grid: *const GvlGrid) -> usize {
    grid.as_ref().map(|g| 3 * g.0.len()).unwrap_or(0)
}

/// # Safety
/// `field` must be null or a live field handle.
#[no_mangle]
pub unsafe extern "C" fn gvl_field_free(field: *mut GvlField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Seeded random field with `|û(k)| ∝ |k|^{-beta}`, mean zero.
///
/// # Safety
/// `grid` must be a live grid handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gvl_field_random(grid: *const GvlGrid, beta: f64, seed: u64, out: *mut *mut GvlField) -> GvlStatus {
    guarded(|| {
        let g = deref(grid, "grid")?;
        if out.is_null() {
            return Err(null("out"));
        }
        if !beta.is_finite() {
            return Err((GvlStatus::InvalidArgument, "beta must be finite".into()));
        }
        store(out, GvlField(RandomFieldSpec::new(beta, seed).generate(&g.0)));
        Ok(())
    })
}

/// Taylor–Green vortex of the given amplitude.
///
/// # Safety
/// `grid` must be a live grid handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gvl_field_taylor_green(grid: *const GvlGrid, amplitude: f64, out: *mut *mut GvlField) -> GvlStatus {
    guarded(|| {
        let g = deref(grid, "grid")?;
        if out.is_null() {
            return Err(null("out"));
        }
        store(out, GvlField(taylor_green(&g.0, amplitude).ffi()?));
        Ok(())
    })
}

/// The exact Burgers solution at time `t`, periodized onto the grid.
///
/// # Safety
/// `grid` must be a live grid handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gvl_field_exact(grid: *const GvlGrid, t: f64, out: *mut *mut GvlField) -> GvlStatus {
    guarded(|| {
        let g = deref(grid, "grid")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let f = sample_on_torus(t, &g.0, &ExampleParams::default(), TorusRoute::default()).ffi()?;
        store(out, GvlField(f));
        Ok(())
    })
}

/// Field from `3n³` component-major physical samples.
///
/// # Safety
/// `samples` must point to `len` readable doubles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gvl_field_from_samples(
    grid: *const GvlGrid,
    samples: *const f64,
    len: usize,
    out: *mut *mut GvlField,
) -> GvlStatus {
    guarded(|| {
        let g = deref(grid, "grid")?;
        if samples.is_null() {
            return Err(null("samples"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let s = std::slice::from_raw_parts(samples, len);
        store(out, GvlField(SpectralField::from_physical_flat(&g.0, s).ffi()?));
        Ok(())
    })
}

/// Write the `3n³` physical samples, component-major, into `buf`.
///
/// # Safety
/// `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn gvl_field_samples(field: *const GvlField, buf: *mut f64, len: usize) -> GvlStatus {
    guarded(|| {
        let f = deref(field, "field")?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        let s = f.0.to_physical_flat();
        if s.len() != len {
            return Err((GvlStatus::InvalidArgument, format!("buffer holds {len} values, field has {}", s.len())));
        }
        ptr::copy_nonoverlapping(s.as_ptr(), buf, len);
        Ok(())
    })
}

/// `‖A^r e^{θA} u‖`. Fails with `UnreliableWeight` when `θ` is too large
/// for the field's resolved spectrum.
///
/// # Safety
/// `field` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gvl_field_norm(field: *const GvlField, r: f64, theta: f64, out: *mut f64) -> GvlStatus {
    guarded(|| {
        let f = deref(field, "field")?;
        if out.is_null() {
            return Err(null("out"));
        }
        if !(r.is_finite() && theta.is_finite() && theta >= 0.0) {
            return Err((GvlStatus::InvalidArgument, "r must be finite and theta nonnegative".into()));
        }
        let m = MultiplierSpec::Composite(vec![MultiplierSpec::FracPower(r), MultiplierSpec::Gevrey(theta)]);
        *out = norm_l2(&f.0, &m).ffi()?;
        Ok(())
    })
}

/// Leray projection onto divergence-free fields, as a new handle.
///
/// # Safety
/// `field` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gvl_field_leray(field: *const GvlField, out: *mut *mut GvlField) -> GvlStatus {
    guarded(|| {
        let f = deref(field, "field")?;
        if out.is_null() {
            return Err(null("out"));
        }
        store(out, GvlField(leray_project(&f.0)));
        Ok(())
    })
}

/// March `field` (taken at `t_start`) to `t_end` with step at most `dt`.
///
/// # Safety
/// `field` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gvl_march(
    field: *const GvlField,
    model: GvlModel,
    t_start: f64,
    t_end: f64,
    dt: f64,
    out: *mut *mut GvlField,
) -> GvlStatus {
    guarded(|| {
        let f = deref(field, "field")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let cfg = match model {
            GvlModel::NavierStokes => ModelConfig::navier_stokes(),
            GvlModel::Burgers => ModelConfig::burgers(),
            GvlModel::Heat => ModelConfig::heat_only(),
        };
        let traj = march(&f.0, &MarchOptions::new(t_start, t_end, dt), &cfg, &mut NoHook).ffi()?;
        store(out, GvlField(traj.field(traj.len() - 1).clone()));
        Ok(())
    })
}

/// Tail-slope estimate of the analyticity radius. `reliable` is set to 0
/// when too few modes sit above round-off.
///
/// # Safety
/// `field` must be a live handle; `radius` and `reliable` writable.
#[no_mangle]
pub unsafe extern "C" fn gvl_field_radius(field: *const GvlField, radius: *mut f64, reliable: *mut i32) -> GvlStatus {
    guarded(|| {
        let f = deref(field, "field")?;
        if radius.is_null() || reliable.is_null() {
            return Err(null("out"));
        }
        let est = estimate_radius(&f.0);
        *radius = est.slope;
        *reliable = est.reliable as i32;
        Ok(())
    })
}

/// Exact analyticity radius of the Burgers example at time `t`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gvl_exact_radius(t: f64, out: *mut f64) -> GvlStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = exact_radius(t, &ExampleParams::default()).ffi()?;
        Ok(())
    })
}

/// `‖A^r e^{λ√t A} u(t)‖²` for the exact example on ℝ³.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gvl_exact_norm_sq(t: f64, r: f64, lambda: f64, out: *mut f64) -> GvlStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = gevrey_norm_checked(t, r, lambda, &ExampleParams::default(), &OracleNormOptions::default()).ffi()?;
        Ok(())
    })
}

/// Write a binary snapshot; the model is recorded as Navier–Stokes.
///
/// # Safety
/// `field` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn gvl_snapshot_write(field: *const GvlField, path: *const c_char) -> GvlStatus {
    guarded(|| {
        let f = deref(field, "field")?;
        let p = path_arg(path)?;
        write_snapshot(p, &f.0, &ModelConfig::navier_stokes()).ffi()
    })
}

/// Read a binary snapshot into a new field handle.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gvl_snapshot_read(path: *const c_char, out: *mut *mut GvlField) -> GvlStatus {
    guarded(|| {
        let p = path_arg(path)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let (f, _) = read_snapshot(p).ffi()?;
        store(out, GvlField(f));
        Ok(())
    })
}

/// Simulation time carried by the field.
///
/// # Safety
/// `field` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gvl_field_time(field: *const GvlField) -> f64 {
    field.as_ref().map(|f| f.0.time()).unwrap_or(f64::NAN)
}
