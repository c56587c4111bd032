//! Classical spatial-domain denoisers used as baselines.
//!
//! All filters use replicate padding at the borders and read from an
//! immutable input frame, so per-pixel work can run in parallel without
//! affecting the result.

mod bilateral;
mod diffusion;
mod median;
mod mode;
mod nlm;
mod tv;

pub use bilateral::{bilateral_filter, gaussian, BilateralParams};
pub use diffusion::{anisotropic_diffusion, Conductance, DiffusionParams};
pub use median::{median_filter, MedianParams};
pub use mode::{mode_filter, ModeKind, ModeParams};
pub use nlm::{nlm_denoise, nlm_weights, NlmParams};
pub use tv::{discrete_tv, tv_denoise, tv_energy, tv_step, TvParams};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::image::GrayImage;

pub(crate) fn check_odd_window(window: usize) -> Result<()> {
    if window < 3 || window.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "window must be odd and >= 3, got {window}"
        )));
    }
    Ok(())
}

pub(crate) fn check_positive(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be positive, got {value}"
        )))
    }
}

/// Evaluates `f(row, col)` for every pixel in parallel, row by row.
pub(crate) fn per_pixel<F>(img: &GrayImage, f: F) -> GrayImage
where
    F: Fn(usize, usize) -> f64 + Sync,
{
    let (w, h) = (img.width(), img.height());
    let data: Vec<f64> = (0..h)
        .into_par_iter()
        .flat_map_iter(|r| (0..w).map(|c| f(r, c)).collect::<Vec<_>>())
        .collect();
    GrayImage::from_parts(w, h, data)
}

/// Square neighbourhood of side `2 * half + 1` with replicate padding, row-major.
pub(crate) fn neighborhood(
    img: &GrayImage,
    row: usize,
    col: usize,
    half: usize,
    out: &mut Vec<f64>,
) {
    out.clear();
    let half = half as isize;
    let (r, c) = (row as isize, col as isize);
    for dr in -half..=half {
        for dc in -half..=half {
            out.push(img.get_clamped(r + dr, c + dc));
        }
    }
}
