//! C ABI for the bubble-elastic scattering solver.
//!
//! Opaque handles own the Rust objects; every function returns a status
//! code and writes results through out-pointers. On failure the thread-local
//! message from `bescat_last_error_message` describes the cause.

use bescat::config::ExperimentConfig;
use bescat::diagnostics::{run_report, ShellRegion};
use bescat::medium::{nondimensionalize, NondimensionalMedium, PhysicalMedium};
use bescat::solver2d::{solve_modes_2d, IncidentSpec2D, ModalSolution2D};
use bescat::solver3d::{solve_modes, IncidentSpec3D, ModalSolution3D};
use num_complex::Complex64;
use std::cell::RefCell;
use std::ffi::{c_char, CString};

/// Status codes returned by every entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum BescatStatus {
    Ok = 0,
    DomainError = 1,
    SingularSystem = 2,
    NearResonance = 3,
    ConfigError = 4,
    NullPointer = 5,
    InternalError = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    LAST_ERROR.with(|e| {
        *e.borrow_mut() = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    });
}

fn status_of(err: &bescat::Error) -> BescatStatus {
    use bescat::Error::*;
    match err {
        Domain(_) | Singularity(_) | QuadratureOrder { .. } => BescatStatus::DomainError,
        SingularSystem { .. } => BescatStatus::SingularSystem,
        NearResonance { .. } => BescatStatus::NearResonance,
        Config { .. } => BescatStatus::ConfigError,
        Io(_) | Serde(_) => BescatStatus::InternalError,
    }
}

/// Thread-local message for the most recent failure.
#[no_mangle]
pub extern "C" fn bescat_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Opaque dimensionless medium handle.
pub struct BescatMedium {
    nm: NondimensionalMedium,
}

/// Opaque 3D per-mode solution handle.
pub struct BescatSolution3D {
    sol: ModalSolution3D,
}

/// Opaque 2D per-mode solution handle.
pub struct BescatSolution2D {
    sol: ModalSolution2D,
}

/// Dimensionless parameter set, mirrored into C.
#[repr(C)]
pub struct BescatParams {
    pub k: f64,
    pub tau: f64,
    pub delta: f64,
    pub lambda: f64,
    pub mu: f64,
    pub k_p: f64,
    pub k_s: f64,
}

/// Build a medium from dimensional inputs (SI units) and nondimensionalize.
///
/// # Safety
/// `out` must be a valid pointer to receive the handle.
#[no_mangle]
pub unsafe extern "C" fn bescat_medium_create(
    rho_b: f64,
    kappa: f64,
    rho_e: f64,
    lambda_t: f64,
    mu_t: f64,
    omega: f64,
    l_d: f64,
    out: *mut *mut BescatMedium,
) -> BescatStatus {
    if out.is_null() {
        set_error("out pointer is null");
        return BescatStatus::NullPointer;
    }
    let pm = PhysicalMedium {
        rho_b,
        kappa,
        rho_e,
        lambda_t,
        mu_t,
        omega,
        l_d,
    };
    match nondimensionalize(&pm) {
        Ok(nm) => {
            *out = Box::into_raw(Box::new(BescatMedium { nm }));
            BescatStatus::Ok
        }
        Err(e) => {
            set_error(&e.to_string());
            status_of(&e)
        }
    }
}

/// Copy the dimensionless parameters out of a medium handle.
///
/// # Safety
/// `medium` must be a live handle from `bescat_medium_create`.
#[no_mangle]
pub unsafe extern "C" fn bescat_medium_params(
    medium: *const BescatMedium,
    out: *mut BescatParams,
) -> BescatStatus {
    if medium.is_null() || out.is_null() {
        set_error("null pointer");
        return BescatStatus::NullPointer;
    }
    let nm = &(*medium).nm;
    *out = BescatParams {
        k: nm.k,
        tau: nm.tau,
        delta: nm.delta,
        lambda: nm.lambda,
        mu: nm.mu,
        k_p: nm.k_p,
        k_s: nm.k_s,
    };
    BescatStatus::Ok
}

/// # Safety
/// `medium` must come from `bescat_medium_create` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn bescat_medium_free(medium: *mut BescatMedium) {
    if !medium.is_null() {
        drop(Box::from_raw(medium));
    }
}

/// Solve the 3D per-mode transmission problem for a single-coefficient
/// incident wave of order n, coefficient index m, optionally normalized.
///
/// # Safety
/// `medium` must be live; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bescat_solve3d(
    medium: *const BescatMedium,
    n: u32,
    m: i32,
    normalized: u8,
    out: *mut *mut BescatSolution3D,
) -> BescatStatus {
    if medium.is_null() || out.is_null() {
        set_error("null pointer");
        return BescatStatus::NullPointer;
    }
    let spec = match IncidentSpec3D::single_mode(n as usize, m, normalized != 0) {
        Ok(s) => s,
        Err(e) => {
            set_error(&e.to_string());
            return status_of(&e);
        }
    };
    match solve_modes(&spec, &(*medium).nm) {
        Ok(sol) => {
            *out = Box::into_raw(Box::new(BescatSolution3D { sol }));
            BescatStatus::Ok
        }
        Err(e) => {
            set_error(&e.to_string());
            status_of(&e)
        }
    }
}

/// Interior acoustic field at a point with |x| < 1.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn bescat_solution3d_interior(
    sol: *const BescatSolution3D,
    x: f64,
    y: f64,
    z: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> BescatStatus {
    if sol.is_null() || out_re.is_null() || out_im.is_null() {
        set_error("null pointer");
        return BescatStatus::NullPointer;
    }
    let v = (*sol).sol.eval_interior([x, y, z]);
    *out_re = v.re;
    *out_im = v.im;
    BescatStatus::Ok
}

/// Exterior total displacement at a point with |x| > 1; writes
/// re/im interleaved as (x_re, x_im, y_re, y_im, z_re, z_im).
///
/// # Safety
/// `out6` must point to six writable doubles.
#[no_mangle]
pub unsafe extern "C" fn bescat_solution3d_total_exterior(
    sol: *const BescatSolution3D,
    x: f64,
    y: f64,
    z: f64,
    out6: *mut f64,
) -> BescatStatus {
    if sol.is_null() || out6.is_null() {
        set_error("null pointer");
        return BescatStatus::NullPointer;
    }
    let (u, _) = (*sol).sol.eval_total_exterior([x, y, z]);
    for (i, c) in u.iter().enumerate() {
        *out6.add(2 * i) = c.re;
        *out6.add(2 * i + 1) = c.im;
    }
    BescatStatus::Ok
}

/// Strain-energy density of the exterior total field at a point.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn bescat_solution3d_stress_density(
    sol: *const BescatSolution3D,
    x: f64,
    y: f64,
    z: f64,
    out: *mut f64,
) -> BescatStatus {
    if sol.is_null() || out.is_null() {
        set_error("null pointer");
        return BescatStatus::NullPointer;
    }
    let (e, _) = (*sol).sol.stress_density([x, y, z]);
    *out = e;
    BescatStatus::Ok
}

/// # Safety
/// `sol` must come from `bescat_solve3d` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn bescat_solution3d_free(sol: *mut BescatSolution3D) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}

/// Solve the 2D disk transmission problem.
///
/// # Safety
/// `medium` must be live; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bescat_solve2d(
    medium: *const BescatMedium,
    n: u32,
    amplitude_re: f64,
    amplitude_im: f64,
    normalized: u8,
    out: *mut *mut BescatSolution2D,
) -> BescatStatus {
    if medium.is_null() || out.is_null() {
        set_error("null pointer");
        return BescatStatus::NullPointer;
    }
    let spec = match IncidentSpec2D::new(
        n as usize,
        Complex64::new(amplitude_re, amplitude_im),
        normalized != 0,
    ) {
        Ok(s) => s,
        Err(e) => {
            set_error(&e.to_string());
            return status_of(&e);
        }
    };
    match solve_modes_2d(&spec, &(*medium).nm) {
        Ok(sol) => {
            *out = Box::into_raw(Box::new(BescatSolution2D { sol }));
            BescatStatus::Ok
        }
        Err(e) => {
            set_error(&e.to_string());
            status_of(&e)
        }
    }
}

/// Boundary-localization ratios of the disk solution.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn bescat_solution2d_localization(
    sol: *const BescatSolution2D,
    zeta1: f64,
    zeta2: f64,
    r_outer: f64,
    out_eta_u: *mut f64,
    out_eta_us: *mut f64,
) -> BescatStatus {
    if sol.is_null() || out_eta_u.is_null() || out_eta_us.is_null() {
        set_error("null pointer");
        return BescatStatus::NullPointer;
    }
    if !(0.0 < zeta1 && zeta1 < 1.0 && 1.0 < zeta2 && zeta2 < r_outer) {
        set_error("shell ordering 0 < zeta1 < 1 < zeta2 < R violated");
        return BescatStatus::DomainError;
    }
    let (eu, eus) = (*sol).sol.localization_ratio(zeta1, zeta2, r_outer, 96);
    *out_eta_u = eu;
    *out_eta_us = eus;
    BescatStatus::Ok
}

/// # Safety
/// `sol` must come from `bescat_solve2d` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn bescat_solution2d_free(sol: *mut BescatSolution2D) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}

/// Full diagnostics report as a JSON string (schema 1). The caller owns the
/// string and must release it with `bescat_string_free`.
///
/// # Safety
/// `medium` must be live; `out_json` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bescat_diagnostics_json(
    medium: *const BescatMedium,
    n: u32,
    m: i32,
    zeta1: f64,
    zeta2: f64,
    r_outer: f64,
    eta: f64,
    m_level: f64,
    out_json: *mut *mut c_char,
) -> BescatStatus {
    if medium.is_null() || out_json.is_null() {
        set_error("null pointer");
        return BescatStatus::NullPointer;
    }
    let inner = || -> Result<String, bescat::Error> {
        let region = ShellRegion::new(zeta1, zeta2, r_outer)?;
        let spec = IncidentSpec3D::single_mode(n as usize, m, true)?;
        let sol = solve_modes(&spec, &(*medium).nm)?;
        let rep = run_report(&sol, &region, eta, m_level)?;
        Ok(serde_json::to_string_pretty(&rep)?)
    };
    match inner() {
        Ok(js) => match CString::new(js) {
            Ok(c) => {
                *out_json = c.into_raw();
                BescatStatus::Ok
            }
            Err(_) => {
                set_error("interior NUL in JSON");
                BescatStatus::InternalError
            }
        },
        Err(e) => {
            set_error(&e.to_string());
            status_of(&e)
        }
    }
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn bescat_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse an experiment configuration and report only its validity; a
/// convenience for bindings that reuse the CLI config format.
///
/// # Safety
/// `text` must be a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn bescat_config_validate(text: *const c_char) -> BescatStatus {
    if text.is_null() {
        set_error("null pointer");
        return BescatStatus::NullPointer;
    }
    let s = std::ffi::CStr::from_ptr(text);
    let Ok(utf8) = s.to_str() else {
        set_error("config is not valid UTF-8");
        return BescatStatus::ConfigError;
    };
    match bescat::config::parse_config(utf8) {
        Ok(_) => BescatStatus::Ok,
        Err(e) => {
            set_error(&e.to_string());
            BescatStatus::ConfigError
        }
    }
}

// keep the type referenced so the config plumbing stays exercised
#[allow(dead_code)]
fn _config_type_anchor(c: ExperimentConfig) -> usize {
    c.outputs.len()
}
