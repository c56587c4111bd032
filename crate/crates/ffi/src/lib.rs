//! C ABI over `moire-core`.
//!
//! Images cross the boundary as opaque `MoireImage` handles owned by the
//! caller and released with `moire_image_free`. Every fallible call returns a
//! `MoireStatus`; on failure a human-readable message is available from
//! `moire_last_error_message` on the same thread until the next failing call.
//! Panics never unwind into C: they are caught and reported as
//! `MOIRE_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use moire_core::noise::{self, MoireSpec};
use moire_core::{
    Error, GrayImage, MedianEstimator, Method, MethodConfig, PgmFormat, RepairParams,
    SpectralMethod,
};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoireStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    BadPgm = 4,
    Numeric = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// Opaque grayscale image with `f64` samples in row-major order.
pub struct MoireImage {
    inner: GrayImage,
}

/// One sinusoid `amplitude * sin(2*pi*(freq_u*row + freq_v*col) + phase)`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct MoireComponent {
    pub amplitude: f64,
    pub freq_u: f64,
    pub freq_v: f64,
    pub phase: f64,
}

/// Spectral repair settings. `guard_dc_radius < 0` selects the automatic guard.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct MoireRepairParams {
    pub repair_radius: usize,
    pub window: usize,
    pub guard_dc_radius: i64,
    pub detect_threshold: f64,
    pub min_amplitude: f64,
    /// 0 = phase-preserving, 1 = component-wise.
    pub componentwise: c_int,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> MoireStatus {
    match err {
        Error::DimensionMismatch(..) => MoireStatus::DimensionMismatch,
        Error::Pgm(_) => MoireStatus::BadPgm,
        Error::BrokenSymmetry { .. } => MoireStatus::Numeric,
        _ => MoireStatus::InvalidArgument,
    }
}

fn fail(status: MoireStatus, msg: impl Into<String>) -> MoireStatus {
    set_last_error(msg.into());
    status
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), MoireStatus>) -> MoireStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MoireStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(MoireStatus::Panic, "internal panic"),
    }
}

fn core<T>(r: moire_core::Result<T>) -> Result<T, MoireStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

unsafe fn image_ref<'a>(img: *const MoireImage) -> Result<&'a GrayImage, MoireStatus> {
    img.as_ref()
        .map(|h| &h.inner)
        .ok_or_else(|| fail(MoireStatus::NullPointer, "image handle is null"))
}

unsafe fn emit(out: *mut *mut MoireImage, img: GrayImage) -> Result<(), MoireStatus> {
    if out.is_null() {
        return Err(fail(MoireStatus::NullPointer, "output pointer is null"));
    }
    *out = Box::into_raw(Box::new(MoireImage { inner: img }));
    Ok(())
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn moire_status_string(status: MoireStatus) -> *const c_char {
    let s: &'static CStr = match status {
        MoireStatus::Ok => c"ok",
        MoireStatus::NullPointer => c"null pointer",
        MoireStatus::InvalidArgument => c"invalid argument",
        MoireStatus::DimensionMismatch => c"dimension mismatch",
        MoireStatus::BadPgm => c"malformed PGM",
        MoireStatus::Numeric => c"numerical failure",
        MoireStatus::BufferTooSmall => c"buffer too small",
        MoireStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}

/// Message of the last failure on this thread, or NULL. Valid until the next
/// failing call on the same thread.
#[no_mangle]
pub extern "C" fn moire_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Creates a `width x height` image. `data` holds `width * height` samples
/// in row-major order, or is NULL for an all-zero image.
///
/// # Safety
/// `data` must be NULL or point to `width * height` readable doubles; `out`
/// must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn moire_image_new(
    width: usize,
    height: usize,
    data: *const f64,
    out: *mut *mut MoireImage,
) -> MoireStatus {
    guard(|| {
        let n = width
            .checked_mul(height)
            .ok_or_else(|| fail(MoireStatus::InvalidArgument, "image size overflows"))?;
        let samples = if data.is_null() || n == 0 {
            vec![0.0; n]
        } else {
            slice::from_raw_parts(data, n).to_vec()
        };
        emit(out, core(GrayImage::new(width, height, samples))?)
    })
}

/// Releases an image. NULL is ignored.
///
/// # Safety
/// `img` must be NULL or a handle returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn moire_image_free(img: *mut MoireImage) {
    if !img.is_null() {
        drop(Box::from_raw(img));
    }
}

/// Width in pixels; 0 for NULL.
///
/// # Safety
/// `img` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn moire_image_width(img: *const MoireImage) -> usize {
    img.as_ref().map_or(0, |h| h.inner.width())
}

/// Height in pixels; 0 for NULL.
///
/// # Safety
/// `img` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn moire_image_height(img: *const MoireImage) -> usize {
    img.as_ref().map_or(0, |h| h.inner.height())
}

/// Copies the samples into `buf`, which must hold at least `width * height`
/// doubles (`len` is its capacity).
///
/// # Safety
/// `img` must be a live handle and `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn moire_image_copy_data(
    img: *const MoireImage,
    buf: *mut f64,
    len: usize,
) -> MoireStatus {
    guard(|| {
        let img = image_ref(img)?;
        if buf.is_null() {
            return Err(fail(MoireStatus::NullPointer, "buffer is null"));
        }
        if len < img.len() {
            return Err(fail(
                MoireStatus::BufferTooSmall,
                format!("buffer holds {len} samples, image has {}", img.len()),
            ));
        }
        slice::from_raw_parts_mut(buf, img.len()).copy_from_slice(img.data());
        Ok(())
    })
}

/// Decodes a P2 or P5 PGM held in memory.
///
/// # Safety
/// `bytes` must point to `len` readable bytes; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn moire_image_read_pgm(
    bytes: *const u8,
    len: usize,
    out: *mut *mut MoireImage,
) -> MoireStatus {
    guard(|| {
        if bytes.is_null() {
            return Err(fail(MoireStatus::NullPointer, "PGM buffer is null"));
        }
        let img = core(moire_core::read_pgm(slice::from_raw_parts(bytes, len)))?;
        emit(out, img)
    })
}

/// Encodes as PGM (`ascii != 0` selects P2). Always stores the encoded size
/// in `*written`; if `buf` is NULL or `cap` is too small nothing is copied and
/// `MOIRE_STATUS_BUFFER_TOO_SMALL` is returned, so callers can size a buffer
/// with a first call.
///
/// # Safety
/// `img` must be a live handle, `written` valid, and `buf` NULL or pointing
/// to `cap` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn moire_image_write_pgm(
    img: *const MoireImage,
    ascii: c_int,
    buf: *mut u8,
    cap: usize,
    written: *mut usize,
) -> MoireStatus {
    guard(|| {
        let img = image_ref(img)?;
        if written.is_null() {
            return Err(fail(MoireStatus::NullPointer, "written pointer is null"));
        }
        let format = if ascii != 0 {
            PgmFormat::Ascii
        } else {
            PgmFormat::Binary
        };
        let encoded = moire_core::write_pgm(img, format);
        *written = encoded.len();
        if buf.is_null() || cap < encoded.len() {
            return Err(fail(
                MoireStatus::BufferTooSmall,
                format!("PGM needs {} bytes, buffer has {cap}", encoded.len()),
            ));
        }
        slice::from_raw_parts_mut(buf, encoded.len()).copy_from_slice(&encoded);
        Ok(())
    })
}

/// PSNR in dB against a 255 peak; identical images give `INFINITY`.
///
/// # Safety
/// Both handles must be live and `out_db` valid.
#[no_mangle]
pub unsafe extern "C" fn moire_psnr(
    reference: *const MoireImage,
    test: *const MoireImage,
    out_db: *mut f64,
) -> MoireStatus {
    guard(|| {
        let (a, b) = (image_ref(reference)?, image_ref(test)?);
        if out_db.is_null() {
            return Err(fail(MoireStatus::NullPointer, "output pointer is null"));
        }
        *out_db = core(moire_core::psnr(a, b))?.psnr_db.as_f64();
        Ok(())
    })
}

/// Default spectral repair settings.
#[no_mangle]
pub extern "C" fn moire_repair_params_default() -> MoireRepairParams {
    let d = RepairParams::default();
    MoireRepairParams {
        repair_radius: d.repair_radius,
        window: d.window,
        guard_dc_radius: -1,
        detect_threshold: d.detect_threshold,
        min_amplitude: d.min_amplitude,
        componentwise: 0,
    }
}

fn repair_params(p: &MoireRepairParams) -> RepairParams {
    RepairParams {
        repair_radius: p.repair_radius,
        window: p.window,
        guard_dc_radius: usize::try_from(p.guard_dc_radius).ok(),
        detect_threshold: p.detect_threshold,
        min_amplitude: p.min_amplitude,
        estimator: if p.componentwise != 0 {
            MedianEstimator::Componentwise
        } else {
            MedianEstimator::PhasePreserving
        },
    }
}

/// Denoises with a registered method by name (`"spectral-median"`,
/// `"notch"`, `"median"`, `"mode"`, `"bilateral"`, `"diffusion"`, `"tv"`,
/// `"nlm"`) using default parameters.
///
/// # Safety
/// `img` must be a live handle, `method` a NUL-terminated string, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn moire_denoise(
    img: *const MoireImage,
    method: *const c_char,
    out: *mut *mut MoireImage,
) -> MoireStatus {
    guard(|| {
        let img = image_ref(img)?;
        if method.is_null() {
            return Err(fail(MoireStatus::NullPointer, "method name is null"));
        }
        let name = CStr::from_ptr(method)
            .to_str()
            .map_err(|_| fail(MoireStatus::InvalidArgument, "method name is not UTF-8"))?;
        let method: Method = core(name.parse())?;
        let (denoised, _) = core(moire_core::apply(method, img, &MethodConfig::default()))?;
        emit(out, denoised)
    })
}

/// Spectral repair with explicit settings. `median != 0` selects the
/// spectral median, otherwise the notch baseline. The number of detected
/// peaks is stored in `*peak_count` when it is not NULL.
///
/// # Safety
/// `img` and `params` must be valid, `out` valid, `peak_count` NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn moire_denoise_spectral(
    img: *const MoireImage,
    params: *const MoireRepairParams,
    median: c_int,
    out: *mut *mut MoireImage,
    peak_count: *mut usize,
) -> MoireStatus {
    guard(|| {
        let img = image_ref(img)?;
        let params = params
            .as_ref()
            .ok_or_else(|| fail(MoireStatus::NullPointer, "params pointer is null"))?;
        let method = if median != 0 {
            SpectralMethod::Median
        } else {
            SpectralMethod::Notch
        };
        let (denoised, peaks) = core(moire_core::denoise_moire(
            img,
            method,
            &repair_params(params),
        ))?;
        if let Some(count) = peak_count.as_mut() {
            *count = peaks.len();
        }
        emit(out, denoised)
    })
}

/// Adds a sum of sinusoids (frequencies in cycles per pixel) to `img`.
///
/// # Safety
/// `img` must be live, `components` must point to `count` items (or be NULL
/// when `count == 0`), `out` valid.
#[no_mangle]
pub unsafe extern "C" fn moire_synthesize(
    img: *const MoireImage,
    components: *const MoireComponent,
    count: usize,
    out: *mut *mut MoireImage,
) -> MoireStatus {
    guard(|| {
        let img = image_ref(img)?;
        let comps = if count == 0 {
            &[][..]
        } else if components.is_null() {
            return Err(fail(MoireStatus::NullPointer, "components pointer is null"));
        } else {
            slice::from_raw_parts(components, count)
        };
        let spec = MoireSpec::new(
            comps
                .iter()
                .map(|c| noise::MoireComponent {
                    amplitude: c.amplitude,
                    freq_u: c.freq_u,
                    freq_v: c.freq_v,
                    phase: c.phase,
                })
                .collect(),
        );
        emit(out, core(noise::synthesize_moire(img, &spec))?)
    })
}
