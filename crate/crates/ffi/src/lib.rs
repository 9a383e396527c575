//! C ABI over the streaming estimators.
//!
//! Every function returns an [`SdStatus`]. On failure a message is kept per
//! thread and can be read with [`sd_last_error`]. Handles are opaque and must
//! be released with their matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use streamdesc::estimator::{EstimatorConfig, StreamEstimator};
use streamdesc::gabe::{GabeState, GABE_DIM};
use streamdesc::graph::Edge;
use streamdesc::maeve::{MaeveState, MAEVE_DIM};
use streamdesc::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    BudgetTooSmall = 3,
    StreamTooLong = 4,
    SelfLoop = 5,
    BufferTooSmall = 6,
    LengthMismatch = 7,
    Internal = 99,
}

/// Opaque GABE estimator.
pub struct SdGabe(GabeState);

/// Opaque MAEVE estimator.
pub struct SdMaeve(MaeveState);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SdStatus {
    match e {
        Error::BudgetTooSmall { .. } => SdStatus::BudgetTooSmall,
        Error::StreamLongerThanDeclared { .. } => SdStatus::StreamTooLong,
        Error::SelfLoop(_) => SdStatus::SelfLoop,
        Error::LengthMismatch(..) => SdStatus::LengthMismatch,
        _ => SdStatus::InvalidArgument,
    }
}

/// Runs `f`, mapping errors and panics to status codes.
fn guard(f: impl FnOnce() -> Result<(), (SdStatus, String)>) -> SdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SdStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            SdStatus::Internal
        }
    }
}

fn lib_err(e: Error) -> (SdStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (SdStatus, String) {
    (SdStatus::NullPointer, format!("{what} is null"))
}

fn config(budget: usize, seed: u64, n_hint: usize, stream_len: usize) -> EstimatorConfig {
    let mut cfg = EstimatorConfig::new(budget, seed);
    if n_hint > 0 {
        cfg = cfg.with_n_hint(n_hint);
    }
    if stream_len > 0 {
        cfg = cfg.with_stream_len(stream_len);
    }
    cfg
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length in bytes, or 0 when
/// there is no error.
///
/// # Safety
/// `buf` must be null or valid for `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn sd_last_error(buf: *mut c_char, len: usize) -> usize {
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

/// Length of a GABE descriptor.
#[no_mangle]
pub extern "C" fn sd_gabe_dim() -> usize {
    GABE_DIM
}

/// Length of a MAEVE descriptor.
#[no_mangle]
pub extern "C" fn sd_maeve_dim() -> usize {
    MAEVE_DIM
}

/// Creates a GABE estimator storing at most `budget` edges. `n_hint` and
/// `stream_len` are optional (0 means unknown); a budget below the minimum
/// is accepted only when it covers a declared `stream_len`.
///
/// # Safety
/// `out` must be valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn sd_gabe_new(
    budget: usize,
    seed: u64,
    n_hint: usize,
    stream_len: usize,
    out: *mut *mut SdGabe,
) -> SdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let st = GabeState::new(config(budget, seed, n_hint, stream_len)).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(SdGabe(st)));
        Ok(())
    })
}

/// Feeds one edge of the stream.
///
/// # Safety
/// `h` must be a live handle from [`sd_gabe_new`].
#[no_mangle]
pub unsafe extern "C" fn sd_gabe_push_edge(h: *mut SdGabe, u: u32, v: u32) -> SdStatus {
    guard(|| {
        let h = h.as_mut().ok_or_else(|| null("handle"))?;
        let e = Edge::new(u, v).map_err(lib_err)?;
        h.0.process_edge(e).map_err(lib_err)
    })
}

/// Writes the descriptor of the stream so far into `out[0..len]`;
/// `len` must be at least [`sd_gabe_dim`].
///
/// # Safety
/// `h` must be a live handle and `out` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn sd_gabe_finalize(h: *const SdGabe, out: *mut f64, len: usize) -> SdStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| null("handle"))?;
        write_values(&h.0.finalize().phi, out, len)
    })
}

/// # Safety
/// `h` must be null or a handle from [`sd_gabe_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sd_gabe_free(h: *mut SdGabe) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Creates a MAEVE estimator; arguments as for [`sd_gabe_new`].
///
/// # Safety
/// `out` must be valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn sd_maeve_new(
    budget: usize,
    seed: u64,
    n_hint: usize,
    stream_len: usize,
    out: *mut *mut SdMaeve,
) -> SdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let st = MaeveState::new(config(budget, seed, n_hint, stream_len)).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(SdMaeve(st)));
        Ok(())
    })
}

/// # Safety
/// `h` must be a live handle from [`sd_maeve_new`].
#[no_mangle]
pub unsafe extern "C" fn sd_maeve_push_edge(h: *mut SdMaeve, u: u32, v: u32) -> SdStatus {
    guard(|| {
        let h = h.as_mut().ok_or_else(|| null("handle"))?;
        let e = Edge::new(u, v).map_err(lib_err)?;
        h.0.process_edge(e).map_err(lib_err)
    })
}

/// # Safety
/// `h` must be a live handle and `out` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn sd_maeve_finalize(
    h: *const SdMaeve,
    out: *mut f64,
    len: usize,
) -> SdStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| null("handle"))?;
        write_values(&h.0.finalize().values, out, len)
    })
}

/// # Safety
/// `h` must be null or a handle from [`sd_maeve_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sd_maeve_free(h: *mut SdMaeve) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Canberra distance between `x[0..len]` and `y[0..len]`.
///
/// # Safety
/// `x` and `y` must be valid for `len` reads (or `len == 0`), `out` for one
/// write.
#[no_mangle]
pub unsafe extern "C" fn sd_canberra(
    x: *const f64,
    y: *const f64,
    len: usize,
    out: *mut f64,
) -> SdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let (xs, ys) = if len == 0 {
            (&[][..], &[][..])
        } else {
            if x.is_null() || y.is_null() {
                return Err(null("input vector"));
            }
            (
                std::slice::from_raw_parts(x, len),
                std::slice::from_raw_parts(y, len),
            )
        };
        *out = streamdesc::canberra(xs, ys).map_err(lib_err)?;
        Ok(())
    })
}

unsafe fn write_values(
    values: &[f64],
    out: *mut f64,
    len: usize,
) -> Result<(), (SdStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    if len < values.len() {
        return Err((
            SdStatus::BufferTooSmall,
            format!("buffer holds {len} values, need {}", values.len()),
        ));
    }
    ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
    Ok(())
}
