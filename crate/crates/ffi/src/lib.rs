//! C ABI over `magtrap`.
//!
//! Every fallible call returns a [`MagtrapStatus`] and writes results through
//! out-pointers. Configs and lifetime reports are opaque handles owned by the
//! caller and released with the matching `_free` function. The message of the
//! last failure on the calling thread is available from
//! [`magtrap_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use magtrap::config::{load_config, Preset};
use magtrap::modes::{critical_k, secular_roots, Orientation, Symmetry};
use magtrap::quantum::{lifetime, LifetimeReport};
use magtrap::trap::TrapConfig;
use magtrap::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MagtrapStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Config = 3,
    Numerical = 4,
    Io = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MagtrapSymmetry {
    GammaPlus = 0,
    GammaMinus = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MagtrapSpin {
    Down = 0,
    Up = 1,
}

/// Opaque trap configuration.
pub struct MagtrapConfig(TrapConfig);

/// Opaque lifetime report.
pub struct MagtrapLifetime(LifetimeReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> MagtrapStatus {
    match e {
        Error::InvalidConfig { .. } | Error::Config(_) | Error::Parse(_) => MagtrapStatus::Config,
        Error::Domain(_) => MagtrapStatus::InvalidArgument,
        Error::Io(_) | Error::Json(_) | Error::Csv(_) => MagtrapStatus::Io,
        Error::Numerical(_) | Error::SingularMode | Error::DegenerateMode | Error::ComplexFrequency(_) => {
            MagtrapStatus::Numerical
        }
    }
}

fn fail(status: MagtrapStatus, msg: impl Into<String>) -> MagtrapStatus {
    set_error(msg.into());
    status
}

/// Runs `f`, turning errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), MagtrapStatus>) -> MagtrapStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            MagtrapStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(_) => fail(MagtrapStatus::Panic, "panic inside magtrap"),
    }
}

fn lib(e: Error) -> MagtrapStatus {
    fail(status_of(&e), e.to_string())
}

unsafe fn out_ref<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, MagtrapStatus> {
    p.as_mut().ok_or_else(|| fail(MagtrapStatus::NullPointer, format!("{name} is null")))
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, MagtrapStatus> {
    if p.is_null() {
        return Err(fail(MagtrapStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(MagtrapStatus::InvalidArgument, format!("{name} is not UTF-8")))
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length, or 0 when there is none.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn magtrap_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// `sqrt(4/27)`, the K above which the spin-down stationary point is unstable.
#[no_mangle]
pub extern "C" fn magtrap_critical_k() -> f64 {
    critical_k()
}

/// Builds a config from CGS values.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn magtrap_config_new(
    b0: f64,
    bperp: f64,
    mu: f64,
    mass: f64,
    spin: f64,
    hbar: f64,
    out: *mut *mut MagtrapConfig,
) -> MagtrapStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let cfg = TrapConfig::new(b0, bperp, mu, mass, spin, hbar).map_err(lib)?;
        *out = Box::into_raw(Box::new(MagtrapConfig(cfg)));
        Ok(())
    })
}

/// Builds a config from a preset name (`neutron` or `atom`).
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn magtrap_config_preset(name: *const c_char, out: *mut *mut MagtrapConfig) -> MagtrapStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let name = str_arg(name, "name")?;
        let preset = Preset::from_name(name)
            .ok_or_else(|| fail(MagtrapStatus::InvalidArgument, format!("unknown preset `{name}`")))?;
        *out = Box::into_raw(Box::new(MagtrapConfig(preset.config())));
        Ok(())
    })
}

/// Reads a config file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn magtrap_config_load(path: *const c_char, out: *mut *mut MagtrapConfig) -> MagtrapStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let path = str_arg(path, "path")?;
        let cfg = load_config(path).map_err(lib)?;
        *out = Box::into_raw(Box::new(MagtrapConfig(cfg)));
        Ok(())
    })
}

/// # Safety
/// `cfg` must be null or a handle from a `magtrap_config_*` constructor, freed once.
#[no_mangle]
pub unsafe extern "C" fn magtrap_config_free(cfg: *mut MagtrapConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// The dimensionless parameter K of a config.
///
/// # Safety
/// `cfg` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn magtrap_config_k(cfg: *const MagtrapConfig, out: *mut f64) -> MagtrapStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let cfg = cfg.as_ref().ok_or_else(|| fail(MagtrapStatus::NullPointer, "cfg is null"))?;
        *out = cfg.0.k_closed_form();
        Ok(())
    })
}

/// The three roots of the secular cubic, by descending real part.
///
/// # Safety
/// `re` and `im` must each be valid for 3 writes.
#[no_mangle]
pub unsafe extern "C" fn magtrap_secular_roots(
    k: f64,
    symmetry: MagtrapSymmetry,
    spin: MagtrapSpin,
    re: *mut f64,
    im: *mut f64,
) -> MagtrapStatus {
    guard(|| {
        if re.is_null() || im.is_null() {
            return Err(fail(MagtrapStatus::NullPointer, "output array is null"));
        }
        let sym = match symmetry {
            MagtrapSymmetry::GammaPlus => Symmetry::GammaPlus,
            MagtrapSymmetry::GammaMinus => Symmetry::GammaMinus,
        };
        let o = match spin {
            MagtrapSpin::Down => Orientation::Down,
            MagtrapSpin::Up => Orientation::Up,
        };
        let roots = secular_roots(k, sym, o).map_err(lib)?;
        for (i, w) in roots.iter().enumerate() {
            *re.add(i) = w.re;
            *im.add(i) = w.im;
        }
        Ok(())
    })
}

/// Computes the escape-lifetime report for a config.
///
/// # Safety
/// `cfg` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn magtrap_lifetime_new(
    cfg: *const MagtrapConfig,
    out: *mut *mut MagtrapLifetime,
) -> MagtrapStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let cfg = cfg.as_ref().ok_or_else(|| fail(MagtrapStatus::NullPointer, "cfg is null"))?;
        let report = lifetime(&cfg.0).map_err(lib)?;
        *out = Box::into_raw(Box::new(MagtrapLifetime(report)));
        Ok(())
    })
}

/// # Safety
/// `report` must be null or a handle from [`magtrap_lifetime_new`], freed once.
#[no_mangle]
pub unsafe extern "C" fn magtrap_lifetime_free(report: *mut MagtrapLifetime) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Scalar fields of a lifetime report.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MagtrapLifetimeSummary {
    pub k: f64,
    pub t_vib_s: f64,
    pub t_prec_s: f64,
    pub log10_t_esc_closed: f64,
    pub log10_t_esc_composed: f64,
    pub ratio_log10: f64,
    pub log10_abs_matrix_element: f64,
    pub outside_validity: bool,
}

/// # Safety
/// `report` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn magtrap_lifetime_summary(
    report: *const MagtrapLifetime,
    out: *mut MagtrapLifetimeSummary,
) -> MagtrapStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let r = &report.as_ref().ok_or_else(|| fail(MagtrapStatus::NullPointer, "report is null"))?.0;
        *out = MagtrapLifetimeSummary {
            k: r.k,
            t_vib_s: r.t_vib_s,
            t_prec_s: r.t_prec_s,
            log10_t_esc_closed: r.log10_t_esc_closed,
            log10_t_esc_composed: r.log10_t_esc_composed,
            ratio_log10: r.ratio_log10,
            log10_abs_matrix_element: r.log10_abs_matrix_element_closed,
            outside_validity: r.outside_validity,
        };
        Ok(())
    })
}
