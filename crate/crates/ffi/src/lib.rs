//! C ABI over `holonomy-lab`.
//!
//! Objects are opaque handles returned through out-pointers by constructors and
//! released with the matching `hl_*_free`. Every fallible call returns an
//! [`HlStatus`]; on failure `hl_last_error_message` describes the error for
//! the calling thread. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use holonomy_lab::dynamics::landau_zener_probability;
use holonomy_lab::lift::small_loop;
use holonomy_lab::{holonomy, BlochVector, DirectorPath, HolonomyError, HolonomyResult, ParametricModel, Permutation};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HlStatus {
    HlOk = 0,
    /// A required pointer argument was null.
    HlErrNull = 1,
    /// An argument was out of range (zero vector, non-positive rate, ...).
    HlErrInvalidInput = 2,
    /// The computation could not be completed (unresolved endpoint, step too large, ...).
    HlErrNumerical = 3,
    /// Internal panic caught at the boundary.
    HlErrInternal = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HlPermutation {
    HlIdentity = 0,
    HlSwap = 1,
}

/// Opaque parametric model.
pub struct HlModel(ParametricModel);

/// Opaque sampled director path.
pub struct HlDirectorPath(DirectorPath);

/// Opaque holonomy classification result.
pub struct HlHolonomy(HolonomyResult);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &HolonomyError) -> HlStatus {
    use HolonomyError::*;
    match e {
        NonHermitianInput { .. }
        | NonUnitaryInput { .. }
        | ZeroVector { .. }
        | NotAProjector { .. }
        | NonPositiveInput { .. }
        | GridMismatch(_)
        | InvalidArgument(_) => HlStatus::HlErrInvalidInput,
        _ => HlStatus::HlErrNumerical,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (HlStatus, String)>) -> HlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HlStatus::HlOk,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            HlStatus::HlErrInternal
        }
    }
}

fn lib_err(e: HolonomyError) -> (HlStatus, String) {
    (status_of(&e), e.to_string())
}

fn null_err(name: &str) -> (HlStatus, String) {
    (HlStatus::HlErrNull, format!("{name} is null"))
}

unsafe fn out_ptr<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, (HlStatus, String)> {
    p.as_mut().ok_or_else(|| null_err(name))
}

unsafe fn in_ref<'a, T>(p: *const T, name: &str) -> Result<&'a T, (HlStatus, String)> {
    p.as_ref().ok_or_else(|| null_err(name))
}

/// Message for the last failed call on this thread. Valid until the next
/// failing call on the same thread; empty if none.
#[no_mangle]
pub extern "C" fn hl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Exact crossing model.
///
/// # Safety
/// `out` must be a valid pointer to write a handle to.
#[no_mangle]
pub unsafe extern "C" fn hl_model_crossing(out: *mut *mut HlModel) -> HlStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = Box::into_raw(Box::new(HlModel(ParametricModel::crossing())));
        Ok(())
    })
}

/// Avoided crossing with minimum gap `epsilon`.
///
/// # Safety
/// `out` must be a valid pointer to write a handle to.
#[no_mangle]
pub unsafe extern "C" fn hl_model_perturbed(epsilon: f64, out: *mut *mut HlModel) -> HlStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let model = ParametricModel::perturbed(epsilon).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(HlModel(model)));
        Ok(())
    })
}

/// Kicked Floquet map with the default free evolution and kick.
///
/// # Safety
/// `out` must be a valid pointer to write a handle to.
#[no_mangle]
pub unsafe extern "C" fn hl_model_floquet(out: *mut *mut HlModel) -> HlStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = Box::into_raw(Box::new(HlModel(ParametricModel::floquet_map())));
        Ok(())
    })
}

/// # Safety
/// `model` must be null or a handle from an `hl_model_*` constructor that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn hl_model_free(model: *mut HlModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Energies (or quasienergies) at `lambda`, upper level first.
///
/// # Safety
/// `model` must be a live handle; `e1` and `e2` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hl_model_levels(model: *const HlModel, lambda: f64, e1: *mut f64, e2: *mut f64) -> HlStatus {
    guard(|| {
        let model = in_ref(model, "model")?;
        let (e1, e2) = (out_ptr(e1, "e1")?, out_ptr(e2, "e2")?);
        let s = model.0.spectrum_at(lambda);
        *e1 = s.levels.0;
        *e2 = s.levels.1;
        Ok(())
    })
}

/// Samples the eigen-director of `model` at `n` evenly spaced parameter values
/// from `start` to `end`.
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hl_model_director_path(
    model: *const HlModel,
    start: f64,
    end: f64,
    n: usize,
    out: *mut *mut HlDirectorPath,
) -> HlStatus {
    guard(|| {
        let model = in_ref(model, "model")?;
        let out = out_ptr(out, "out")?;
        let path = model.0.director_path(start, end, n).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(HlDirectorPath(path)));
        Ok(())
    })
}

/// Builds a director path from `n` points (`xyz`, `3n` doubles, normalized on
/// entry) and their parameters (`params`, `n` doubles).
///
/// # Safety
/// `xyz` must point to `3 * n` doubles and `params` to `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn hl_path_from_points(
    xyz: *const f64,
    params: *const f64,
    n: usize,
    out: *mut *mut HlDirectorPath,
) -> HlStatus {
    guard(|| {
        if xyz.is_null() {
            return Err(null_err("xyz"));
        }
        if params.is_null() {
            return Err(null_err("params"));
        }
        let out = out_ptr(out, "out")?;
        let xyz = std::slice::from_raw_parts(xyz, 3 * n);
        let params = std::slice::from_raw_parts(params, n).to_vec();
        let points = xyz
            .chunks_exact(3)
            .map(|c| BlochVector::new(c[0], c[1], c[2]))
            .collect::<Result<Vec<_>, _>>()
            .map_err(lib_err)?;
        let path = DirectorPath::from_bloch(&points, params).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(HlDirectorPath(path)));
        Ok(())
    })
}

/// Closed loop of angular radius `radius` through `base` (3 doubles).
///
/// # Safety
/// `base` must point to 3 doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hl_path_small_loop(
    base: *const f64,
    radius: f64,
    n: usize,
    out: *mut *mut HlDirectorPath,
) -> HlStatus {
    guard(|| {
        if base.is_null() {
            return Err(null_err("base"));
        }
        let out = out_ptr(out, "out")?;
        let b = std::slice::from_raw_parts(base, 3);
        let base = BlochVector::new(b[0], b[1], b[2]).map_err(lib_err)?;
        let path = small_loop(&base, radius, n).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(HlDirectorPath(path)));
        Ok(())
    })
}

/// Number of samples, or 0 for a null handle.
///
/// # Safety
/// `path` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hl_path_len(path: *const HlDirectorPath) -> usize {
    path.as_ref().map_or(0, |p| p.0.len())
}

/// Copies the canonical representative of sample `index` into `xyz` (3 doubles).
///
/// # Safety
/// `path` must be a live handle; `xyz` must have room for 3 doubles.
#[no_mangle]
pub unsafe extern "C" fn hl_path_sample(path: *const HlDirectorPath, index: usize, xyz: *mut f64) -> HlStatus {
    guard(|| {
        let path = in_ref(path, "path")?;
        if xyz.is_null() {
            return Err(null_err("xyz"));
        }
        let d = path.0.samples().get(index).ok_or_else(|| {
            (HlStatus::HlErrInvalidInput, format!("index {index} out of range for {} samples", path.0.len()))
        })?;
        let c = d.representative().components();
        std::slice::from_raw_parts_mut(xyz, 3).copy_from_slice(&c);
        Ok(())
    })
}

/// # Safety
/// `path` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hl_path_free(path: *mut HlDirectorPath) {
    if !path.is_null() {
        drop(Box::from_raw(path));
    }
}

/// Lifts `path` from `a0` (3 doubles, or null for the canonical
/// representative of the first sample) and classifies the loop.
///
/// # Safety
/// `path` must be a live handle; `a0` null or 3 doubles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hl_holonomy(
    path: *const HlDirectorPath,
    a0: *const f64,
    out: *mut *mut HlHolonomy,
) -> HlStatus {
    guard(|| {
        let path = in_ref(path, "path")?;
        let out = out_ptr(out, "out")?;
        let a0 = if a0.is_null() {
            path.0.start().representative()
        } else {
            let a = std::slice::from_raw_parts(a0, 3);
            BlochVector::new(a[0], a[1], a[2]).map_err(lib_err)?
        };
        let result = holonomy(&path.0, &a0).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(HlHolonomy(result)));
        Ok(())
    })
}

/// # Safety
/// `result` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hl_holonomy_permutation(result: *const HlHolonomy, out: *mut HlPermutation) -> HlStatus {
    guard(|| {
        let result = in_ref(result, "result")?;
        let out = out_ptr(out, "out")?;
        *out = match result.0.permutation {
            Permutation::Identity => HlPermutation::HlIdentity,
            Permutation::Swap => HlPermutation::HlSwap,
        };
        Ok(())
    })
}

/// Distance from the lifted endpoint to `±a0`.
///
/// # Safety
/// `result` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hl_holonomy_endpoint_defect(result: *const HlHolonomy, out: *mut f64) -> HlStatus {
    guard(|| {
        let result = in_ref(result, "result")?;
        *out_ptr(out, "out")? = result.0.endpoint_defect;
        Ok(())
    })
}

/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hl_holonomy_free(result: *mut HlHolonomy) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Landau-Zener transition estimate for gap `epsilon` crossed at `dλ/dt = rate`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hl_landau_zener(epsilon: f64, rate: f64, out: *mut f64) -> HlStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = landau_zener_probability(epsilon, rate).map_err(lib_err)?;
        Ok(())
    })
}
