//! Mean squared error and peak signal-to-noise ratio.

use std::fmt;

use crate::error::Result;
use crate::image::GrayImage;

/// Peak intensity used for PSNR (8-bit convention).
pub const PEAK_VALUE: f64 = 255.0;

/// PSNR in decibels, with an explicit sentinel for identical images so that
/// an infinite value never leaks into arithmetic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Psnr {
    Finite(f64),
    Infinite,
}

impl Psnr {
    pub fn is_infinite(self) -> bool {
        matches!(self, Psnr::Infinite)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Psnr::Finite(v) => Some(v),
            Psnr::Infinite => None,
        }
    }

    /// Lossy conversion for ordering and aggregation; the sentinel maps to `f64::INFINITY`.
    pub fn as_f64(self) -> f64 {
        match self {
            Psnr::Finite(v) => v,
            Psnr::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for Psnr {
    /// Two decimals, or `inf`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Psnr::Finite(v) => write!(f, "{v:.2}"),
            Psnr::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QualityReport {
    pub mse: f64,
    pub psnr_db: Psnr,
    pub peak_value: f64,
}

/// Mean squared error over all pixels (divides by the pixel count).
pub fn mse(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    a.same_dims(b)?;
    let sum: f64 = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    Ok(sum / a.len() as f64)
}

pub fn psnr_from_mse(mse: f64) -> Psnr {
    if mse == 0.0 {
        Psnr::Infinite
    } else {
        Psnr::Finite(10.0 * (PEAK_VALUE * PEAK_VALUE / mse).log10())
    }
}

pub fn psnr(a: &GrayImage, b: &GrayImage) -> Result<QualityReport> {
    let mse = mse(a, b)?;
    Ok(QualityReport {
        mse,
        psnr_db: psnr_from_mse(mse),
        peak_value: PEAK_VALUE,
    })
}
