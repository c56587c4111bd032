//! Non-local means: each pixel becomes a weighted average over a search
//! window, weighted by the Gaussian-weighted squared difference of the
//! surrounding patches.

use super::{check_positive, per_pixel};
use crate::error::{Error, Result};
use crate::image::GrayImage;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NlmParams {
    /// Decay of the weight kernel, intensity units.
    pub h: f64,
    pub patch_radius: usize,
    pub search_radius: usize,
}

impl Default for NlmParams {
    fn default() -> Self {
        Self {
            h: 10.0,
            patch_radius: 3,
            search_radius: 10,
        }
    }
}

impl NlmParams {
    fn validate(&self) -> Result<()> {
        check_positive("h", self.h)?;
        if self.patch_radius < 1 {
            return Err(Error::InvalidParameter("patch_radius must be >= 1".into()));
        }
        if self.search_radius < self.patch_radius {
            return Err(Error::InvalidParameter(format!(
                "search_radius {} must be >= patch_radius {}",
                self.search_radius, self.patch_radius
            )));
        }
        Ok(())
    }

    /// Normalized patch kernel, Gaussian with sigma = patch_radius / 2.
    fn patch_kernel(&self) -> Vec<f64> {
        let r = self.patch_radius as isize;
        let sigma = self.patch_radius as f64 / 2.0;
        let raw: Vec<f64> = (-r..=r)
            .flat_map(|dr| (-r..=r).map(move |dc| (dr * dr + dc * dc) as f64))
            .map(|d2| (-d2 / (2.0 * sigma * sigma)).exp())
            .collect();
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|k| k / total).collect()
    }
}

fn patch_distance(
    img: &GrayImage,
    p: (usize, usize),
    q: (usize, usize),
    r: isize,
    kernel: &[f64],
) -> f64 {
    let mut d = 0.0;
    let mut k = 0;
    for dr in -r..=r {
        for dc in -r..=r {
            let a = img.get_clamped(p.0 as isize + dr, p.1 as isize + dc);
            let b = img.get_clamped(q.0 as isize + dr, q.1 as isize + dc);
            d += kernel[k] * (a - b) * (a - b);
            k += 1;
        }
    }
    d
}

fn weights_at(
    img: &GrayImage,
    p: &NlmParams,
    kernel: &[f64],
    row: usize,
    col: usize,
) -> Vec<(usize, usize, f64)> {
    let s = p.search_radius;
    let r0 = row.saturating_sub(s);
    let r1 = (row + s + 1).min(img.height());
    let c0 = col.saturating_sub(s);
    let c1 = (col + s + 1).min(img.width());
    let h2 = p.h * p.h;
    let pr = p.patch_radius as isize;
    let mut out = Vec::with_capacity((r1 - r0) * (c1 - c0));
    for qr in r0..r1 {
        for qc in c0..c1 {
            let d = patch_distance(img, (row, col), (qr, qc), pr, kernel);
            out.push((qr, qc, (-d / h2).exp()));
        }
    }
    let z: f64 = out.iter().map(|x| x.2).sum();
    for x in &mut out {
        x.2 /= z;
    }
    out
}

/// Normalized weights `w(p, q)` of every `q` in the search window of `(row, col)`.
pub fn nlm_weights(
    img: &GrayImage,
    p: &NlmParams,
    row: usize,
    col: usize,
) -> Result<Vec<(usize, usize, f64)>> {
    p.validate()?;
    if row >= img.height() || col >= img.width() {
        return Err(Error::InvalidParameter(format!(
            "pixel ({row}, {col}) outside {}x{} image",
            img.width(),
            img.height()
        )));
    }
    Ok(weights_at(img, p, &p.patch_kernel(), row, col))
}

pub fn nlm_denoise(img: &GrayImage, p: &NlmParams) -> Result<GrayImage> {
    p.validate()?;
    let kernel = p.patch_kernel();
    Ok(per_pixel(img, |r, c| {
        weights_at(img, p, &kernel, r, c)
            .into_iter()
            .map(|(qr, qc, wgt)| wgt * img.get(qr, qc))
            .sum()
    }))
}
