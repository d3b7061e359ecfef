//! C ABI for cvdmap.
//!
//! Every fallible function returns a [`CvdmapStatus`]; on failure the
//! message is available from [`cvdmap_last_error_message`] on the same
//! thread. Colormaps are opaque handles owned by the caller and released
//! with [`cvdmap_colormap_free`]. Colors cross the boundary as `double[3]`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cvdmap::analyze::perceptual_deltas;
use cvdmap::colorspace::Cam02Ucs;
use cvdmap::cvd::{gamut_fraction, simulate_cvd};
use cvdmap::io::{load_colormap, lut_bytes, LUT_LEN};
use cvdmap::{
    optimize_colormap, Colormap, CvdKind, CvdSpec, Error, JabColor, LinearizationMethod, SrgbColor,
    ViewingConditions,
};

pub const CVDMAP_DEUTERANOMALY: u32 = 0;
pub const CVDMAP_PROTANOMALY: u32 = 1;
pub const CVDMAP_TRITANOMALY: u32 = 2;

pub const CVDMAP_METHOD_FIT_ORIGINAL: u32 = 0;
pub const CVDMAP_METHOD_MAX_RANGE: u32 = 1;

/// Size in bytes of a binary LUT.
pub const CVDMAP_LUT_LEN: usize = 768;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CvdmapStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// The inverse appearance model had no solution.
    Math = 3,
    Degenerate = 4,
    /// No displayable line or lightness exists; try the fit-original method.
    Infeasible = 5,
    Parse = 6,
    UnknownName = 7,
    Io = 8,
    /// A Rust panic was caught at the boundary.
    Panic = 9,
}

/// Opaque colormap handle.
pub struct CvdmapColormap {
    inner: Colormap,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> CvdmapStatus {
    match e {
        Error::InvalidViewingConditions(_) | Error::InvalidArgument(_) => CvdmapStatus::InvalidArgument,
        Error::Math(_) => CvdmapStatus::Math,
        Error::Degenerate(_) => CvdmapStatus::Degenerate,
        Error::InfeasiblePoint { .. } | Error::NoFeasibleLine { .. } => CvdmapStatus::Infeasible,
        Error::Parse { .. } | Error::Json(_) => CvdmapStatus::Parse,
        Error::UnknownColormap { .. } => CvdmapStatus::UnknownName,
        Error::Io(_) | Error::Image(_) => CvdmapStatus::Io,
    }
}

struct Fail(CvdmapStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(CvdmapStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: String) -> Fail {
    Fail(CvdmapStatus::InvalidArgument, msg)
}

/// Runs `f`, records any failure and converts panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> CvdmapStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            CvdmapStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            CvdmapStatus::Panic
        }
    }
}

fn kind_of(code: u32) -> Result<CvdKind, Fail> {
    match code {
        CVDMAP_DEUTERANOMALY => Ok(CvdKind::Deuteranomaly),
        CVDMAP_PROTANOMALY => Ok(CvdKind::Protanomaly),
        CVDMAP_TRITANOMALY => Ok(CvdKind::Tritanomaly),
        _ => Err(invalid(format!("unknown deficiency type {code}"))),
    }
}

fn method_of(code: u32) -> Result<LinearizationMethod, Fail> {
    match code {
        CVDMAP_METHOD_FIT_ORIGINAL => Ok(LinearizationMethod::FitOriginal),
        CVDMAP_METHOD_MAX_RANGE => Ok(LinearizationMethod::MaxRange),
        _ => Err(invalid(format!("unknown linearization method {code}"))),
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| invalid(format!("{what} is not valid UTF-8")))
}

unsafe fn map_arg<'a>(p: *const CvdmapColormap) -> Result<&'a Colormap, Fail> {
    p.as_ref().map(|m| &m.inner).ok_or_else(|| null("colormap"))
}

unsafe fn rgb_arg(p: *const f64, what: &str) -> Result<SrgbColor, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    let v = std::slice::from_raw_parts(p, 3);
    Ok(SrgbColor::new(v[0], v[1], v[2]))
}

unsafe fn write3(p: *mut f64, v: [f64; 3], what: &str) -> Result<(), Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    std::slice::from_raw_parts_mut(p, 3).copy_from_slice(&v);
    Ok(())
}

unsafe fn give(out: *mut *mut CvdmapColormap, inner: Colormap) {
    *out = Box::into_raw(Box::new(CvdmapColormap { inner }));
}

/// Message for the last failed call on this thread, or null after a
/// success. Valid until the next cvdmap call on the same thread.
#[no_mangle]
pub extern "C" fn cvdmap_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Looks up a built-in map ("viridis", "jet", "grayscale-jp", "cividis").
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cvdmap_builtin(name: *const c_char, out: *mut *mut CvdmapColormap) -> CvdmapStatus {
    guard(|| {
        let name = str_arg(name, "name")?;
        if out.is_null() {
            return Err(null("out"));
        }
        give(out, cvdmap::builtins::builtin(name)?);
        Ok(())
    })
}

/// Loads a table or LUT file, falling back to the built-in registry.
///
/// # Safety
/// `path_or_name` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cvdmap_load_colormap(
    path_or_name: *const c_char,
    out: *mut *mut CvdmapColormap,
) -> CvdmapStatus {
    guard(|| {
        let arg = str_arg(path_or_name, "path_or_name")?;
        if out.is_null() {
            return Err(null("out"));
        }
        give(out, load_colormap(arg)?);
        Ok(())
    })
}

/// Builds a map from `n` interleaved sRGB triples in [0, 1].
///
/// # Safety
/// `rgb` must point to `3 * n` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cvdmap_colormap_from_rgb(
    rgb: *const f64,
    n: usize,
    out: *mut *mut CvdmapColormap,
) -> CvdmapStatus {
    guard(|| {
        if rgb.is_null() {
            return Err(null("rgb"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let flat = std::slice::from_raw_parts(rgb, n.checked_mul(3).ok_or_else(|| invalid("n overflows".into()))?);
        let entries = flat.chunks_exact(3).map(|c| SrgbColor::new(c[0], c[1], c[2])).collect();
        give(out, Colormap::new("ffi", entries)?);
        Ok(())
    })
}

/// Number of entries, or 0 for a null handle.
///
/// # Safety
/// `map` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cvdmap_colormap_len(map: *const CvdmapColormap) -> usize {
    map.as_ref().map_or(0, |m| m.inner.len())
}

/// # Safety
/// `map` must be a live handle and `rgb_out` must hold 3 doubles.
#[no_mangle]
pub unsafe extern "C" fn cvdmap_colormap_get(
    map: *const CvdmapColormap,
    index: usize,
    rgb_out: *mut f64,
) -> CvdmapStatus {
    guard(|| {
        let m = map_arg(map)?;
        let c = m
            .entries()
            .get(index)
            .ok_or_else(|| invalid(format!("index {index} out of range for {} entries", m.len())))?;
        write3(rgb_out, c.to_array(), "rgb_out")
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `map` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cvdmap_colormap_free(map: *mut CvdmapColormap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// Optimizes `map` for the given deficiency under default viewing
/// conditions, producing `n_out` entries.
///
/// # Safety
/// `map` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cvdmap_optimize(
    map: *const CvdmapColormap,
    cvd_type: u32,
    severity: f64,
    method: u32,
    n_out: usize,
    out: *mut *mut CvdmapColormap,
) -> CvdmapStatus {
    guard(|| {
        let m = map_arg(map)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = CvdSpec::new(kind_of(cvd_type)?, severity)?;
        let result = optimize_colormap(m, spec, method_of(method)?, &ViewingConditions::default(), n_out)?;
        give(out, result);
        Ok(())
    })
}

/// Simulates one sRGB color as seen with the given deficiency.
///
/// # Safety
/// `rgb_in` and `rgb_out` must each hold 3 doubles.
#[no_mangle]
pub unsafe extern "C" fn cvdmap_simulate(
    rgb_in: *const f64,
    cvd_type: u32,
    severity: f64,
    rgb_out: *mut f64,
) -> CvdmapStatus {
    guard(|| {
        let c = rgb_arg(rgb_in, "rgb_in")?;
        let s = simulate_cvd(c, CvdSpec::new(kind_of(cvd_type)?, severity)?)?;
        write3(rgb_out, s.to_array(), "rgb_out")
    })
}

/// sRGB to J'a'b' under default viewing conditions.
///
/// # Safety
/// `rgb` and `jab_out` must each hold 3 doubles.
#[no_mangle]
pub unsafe extern "C" fn cvdmap_srgb_to_jab(rgb: *const f64, jab_out: *mut f64) -> CvdmapStatus {
    guard(|| {
        let c = rgb_arg(rgb, "rgb")?;
        let j = Cam02Ucs::new(&ViewingConditions::default())?.srgb_to_jab(c);
        write3(jab_out, [j.jp, j.ap, j.bp], "jab_out")
    })
}

/// J'a'b' to unclamped sRGB under default viewing conditions.
///
/// # Safety
/// `jab` and `rgb_out` must each hold 3 doubles.
#[no_mangle]
pub unsafe extern "C" fn cvdmap_jab_to_srgb(jab: *const f64, rgb_out: *mut f64) -> CvdmapStatus {
    guard(|| {
        if jab.is_null() {
            return Err(null("jab"));
        }
        let v = std::slice::from_raw_parts(jab, 3);
        let c = Cam02Ucs::new(&ViewingConditions::default())?.jab_to_srgb(JabColor::new(v[0], v[1], v[2]))?;
        write3(rgb_out, c.to_array(), "rgb_out")
    })
}

/// Writes the `len - 1` consecutive J'a'b' distances of `map`.
///
/// # Safety
/// `map` must be a live handle and `out` must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn cvdmap_perceptual_deltas(
    map: *const CvdmapColormap,
    out: *mut f64,
    capacity: usize,
) -> CvdmapStatus {
    guard(|| {
        let m = map_arg(map)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let d = perceptual_deltas(m, &ViewingConditions::default())?;
        if capacity < d.len() {
            return Err(invalid(format!("capacity {capacity} < {} deltas", d.len())));
        }
        std::slice::from_raw_parts_mut(out, d.len()).copy_from_slice(&d);
        Ok(())
    })
}

/// Writes the 768-byte binary LUT (256 reds, 256 greens, 256 blues).
///
/// # Safety
/// `map` must be a live handle and `out` must hold `capacity` bytes.
#[no_mangle]
pub unsafe extern "C" fn cvdmap_lut_bytes(map: *const CvdmapColormap, out: *mut u8, capacity: usize) -> CvdmapStatus {
    guard(|| {
        let m = map_arg(map)?;
        if out.is_null() {
            return Err(null("out"));
        }
        if capacity < LUT_LEN {
            return Err(invalid(format!("capacity {capacity} < {LUT_LEN}")));
        }
        let bytes = lut_bytes(m)?;
        std::slice::from_raw_parts_mut(out, bytes.len()).copy_from_slice(&bytes);
        Ok(())
    })
}

/// Fraction of lattice colors that stay distinct after simulation.
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cvdmap_gamut_fraction(
    cvd_type: u32,
    severity: f64,
    resolution: usize,
    out: *mut f64,
) -> CvdmapStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = gamut_fraction(kind_of(cvd_type)?, severity, resolution)?;
        Ok(())
    })
}
