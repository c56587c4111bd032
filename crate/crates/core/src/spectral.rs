//! Detection and repair of conjugate impulse pairs in a centered spectrum.
//!
//! A real sinusoid shows up as two isolated bright bins mirrored about DC.
//! [`detect_peaks`] finds them; [`notch_reject`] zeroes a disk around each
//! one, while [`spectral_median`] re-estimates the disk from the median of
//! the surrounding uncontaminated bins.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::transform::{center_shift, dft2d, idft2d, Spectrum};

/// Half-size of the square neighbourhood used as detection background (21x21).
const ANNULUS_HALF: usize = 10;
/// Half-size of the excluded core of that neighbourhood (5x5).
const CORE_HALF: usize = 2;
/// Smallest spectrum side accepted by [`detect_peaks`].
pub const MIN_DETECT_SIZE: usize = 16;
/// Minimum donor count for a repair median.
pub const MIN_DONORS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    /// Row in centered indexing.
    pub u: usize,
    /// Column in centered indexing.
    pub v: usize,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PeakSet {
    /// Sorted by `(u, v)`.
    pub peaks: Vec<Peak>,
}

impl PeakSet {
    pub fn len(&self) -> usize {
        self.peaks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.peaks.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Peak> {
        self.peaks.iter()
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.peaks.iter().any(|p| p.u == u && p.v == v)
    }

    /// `u,v,magnitude` with a header row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("u,v,magnitude\n");
        for p in &self.peaks {
            let _ = writeln!(out, "{},{},{}", p.u, p.v, p.magnitude);
        }
        out
    }
}

/// How a contaminated bin is re-estimated from its donors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MedianEstimator {
    /// Outlier bins (magnitude above `detect_threshold` times the donors'
    /// median magnitude) take the component-wise median of the donors.
    /// Other bins keep their own phase and have their magnitude clipped to
    /// the donors' median magnitude.
    #[default]
    PhasePreserving,
    /// Every contaminated bin takes the median of the donors' real parts and
    /// the median of their imaginary parts.
    Componentwise,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepairParams {
    /// Radius in bins of the disk re-estimated around each peak.
    pub repair_radius: usize,
    /// Side of the square median window (odd).
    pub window: usize,
    /// Bins within this radius of DC are never peaks. `None` selects
    /// `max(8, ceil(0.02 * min(H, W)))`.
    pub guard_dc_radius: Option<usize>,
    /// A peak must exceed this multiple of its local background.
    pub detect_threshold: f64,
    /// Peaks weaker than a sinusoid of this amplitude (intensity units) are ignored.
    pub min_amplitude: f64,
    pub estimator: MedianEstimator,
}

impl Default for RepairParams {
    fn default() -> Self {
        Self {
            repair_radius: 3,
            window: 9,
            guard_dc_radius: None,
            detect_threshold: 10.0,
            min_amplitude: 1.0,
            estimator: MedianEstimator::default(),
        }
    }
}

impl RepairParams {
    pub fn guard_radius(&self, height: usize, width: usize) -> usize {
        self.guard_dc_radius.unwrap_or_else(|| {
            let side = height.min(width) as f64;
            8usize.max((0.02 * side).ceil() as usize)
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.repair_radius < 1 {
            return Err(Error::InvalidParameter("repair_radius must be >= 1".into()));
        }
        if self.window < 3 || self.window.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "median window must be odd and >= 3, got {}",
                self.window
            )));
        }
        if !(self.detect_threshold > 1.0 && self.detect_threshold.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "detect_threshold must be > 1, got {}",
                self.detect_threshold
            )));
        }
        if !(self.min_amplitude >= 0.0 && self.min_amplitude.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "min_amplitude must be >= 0, got {}",
                self.min_amplitude
            )));
        }
        let half = (self.window / 2) as isize;
        let r2 = (self.repair_radius * self.repair_radius) as isize;
        let inside = (-half..=half)
            .flat_map(|i| (-half..=half).map(move |j| i * i + j * j))
            .filter(|&d| d <= r2)
            .count();
        if self.window * self.window - inside < MIN_DONORS {
            return Err(Error::InvalidParameter(format!(
                "window {} leaves fewer than {MIN_DONORS} donors around a repair disk of radius {}",
                self.window, self.repair_radius
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralMethod {
    Notch,
    Median,
}

fn require_centered(spec: &Spectrum, what: &'static str) -> Result<()> {
    if spec.is_centered() {
        Ok(())
    } else {
        Err(Error::NotCentered(what))
    }
}

/// Median of a non-empty slice; even lengths average the two middle values.
/// Reorders the slice.
pub(crate) fn median_in_place(values: &mut [f64]) -> f64 {
    let n = values.len();
    debug_assert!(n > 0);
    let mid = n / 2;
    let (lower, hi, _) = values.select_nth_unstable_by(mid, f64::total_cmp);
    let hi = *hi;
    if n % 2 == 1 {
        hi
    } else {
        let lo = lower.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        0.5 * (lo + hi)
    }
}

fn window_bounds(center: usize, half: usize, len: usize) -> (usize, usize) {
    (center.saturating_sub(half), (center + half + 1).min(len))
}

fn within(u: usize, v: usize, pu: usize, pv: usize, r: usize) -> bool {
    let du = u.abs_diff(pu);
    let dv = v.abs_diff(pv);
    du * du + dv * dv <= r * r
}

/// Finds conjugate impulse pairs in a centered spectrum.
///
/// A bin is a peak when it lies outside the DC guard, is at least as strong
/// as a sinusoid of `min_amplitude`, is the largest magnitude within its
/// `repair_radius` disk, and exceeds `detect_threshold` times the median
/// magnitude of the surrounding 21x21 block (minus its 5x5 core). The result
/// always contains both members of each pair.
pub fn detect_peaks(spec: &Spectrum, params: &RepairParams) -> Result<PeakSet> {
    require_centered(spec, "peak detection")?;
    params.validate()?;
    let (h, w) = (spec.height(), spec.width());
    if h < MIN_DETECT_SIZE || w < MIN_DETECT_SIZE {
        return Err(Error::SpectrumTooSmall {
            width: w,
            height: h,
            min: MIN_DETECT_SIZE,
        });
    }
    let mags: Vec<f64> = spec.data().iter().map(|c| c.norm()).collect();
    let (cu, cv) = spec.dc();
    let guard = params.guard_radius(h, w);
    let floor = params.min_amplitude * (h * w) as f64 / 2.0;
    let r = params.repair_radius;

    let is_local_max = |u: usize, v: usize| {
        let m = mags[u * w + v];
        let (u0, u1) = window_bounds(u, r, h);
        let (v0, v1) = window_bounds(v, r, w);
        (u0..u1).all(|a| (v0..v1).all(|b| !within(a, b, u, v, r) || mags[a * w + b] <= m))
    };

    let background = |u: usize, v: usize| {
        let (u0, u1) = window_bounds(u, ANNULUS_HALF, h);
        let (v0, v1) = window_bounds(v, ANNULUS_HALF, w);
        let mut ring = Vec::with_capacity((u1 - u0) * (v1 - v0));
        for a in u0..u1 {
            for b in v0..v1 {
                if a.abs_diff(u) > CORE_HALF || b.abs_diff(v) > CORE_HALF {
                    ring.push(mags[a * w + b]);
                }
            }
        }
        median_in_place(&mut ring)
    };

    let mut candidates: Vec<Peak> = (0..h)
        .into_par_iter()
        .flat_map_iter(|u| {
            let mags = &mags;
            let is_local_max = &is_local_max;
            let background = &background;
            (0..w).filter_map(move |v| {
                let m = mags[u * w + v];
                if m < floor || m == 0.0 || within(u, v, cu, cv, guard) {
                    return None;
                }
                if !is_local_max(u, v) || m <= params.detect_threshold * background(u, v) {
                    return None;
                }
                Some(Peak { u, v, magnitude: m })
            })
        })
        .collect();

    // Plateaus can leave several equal maxima inside one disk; keep the first.
    candidates.sort_by(|a, b| {
        b.magnitude
            .total_cmp(&a.magnitude)
            .then(a.u.cmp(&b.u))
            .then(a.v.cmp(&b.v))
    });
    let mut kept: Vec<Peak> = Vec::new();
    for c in candidates {
        if kept.iter().all(|k| !within(c.u, c.v, k.u, k.v, r)) {
            kept.push(c);
        }
    }

    let mut coords: BTreeSet<(usize, usize)> = kept.iter().map(|p| (p.u, p.v)).collect();
    for p in &kept {
        coords.insert(spec.mirror(p.u, p.v));
    }
    let peaks = coords
        .into_iter()
        .map(|(u, v)| Peak {
            u,
            v,
            magnitude: mags[u * w + v],
        })
        .collect();
    Ok(PeakSet { peaks })
}

/// Union of the repair disks, closed under the Hermitian mirror so that edits
/// confined to it keep the spectrum conjugate-symmetric.
pub fn contamination_mask(spec: &Spectrum, peaks: &PeakSet, radius: usize) -> Vec<bool> {
    let (h, w) = (spec.height(), spec.width());
    let mut mask = vec![false; h * w];
    for p in peaks.iter() {
        for (pu, pv) in [(p.u, p.v), spec.mirror(p.u, p.v)] {
            let (u0, u1) = window_bounds(pu, radius, h);
            let (v0, v1) = window_bounds(pv, radius, w);
            for u in u0..u1 {
                for v in v0..v1 {
                    if within(u, v, pu, pv, radius) {
                        mask[u * w + v] = true;
                    }
                }
            }
        }
    }
    // Clipping at the spectrum border can break the mirror closure; restore it.
    for u in 0..h {
        for v in 0..w {
            if mask[u * w + v] {
                let (mu, mv) = spec.mirror(u, v);
                mask[mu * w + mv] = true;
            }
        }
    }
    mask
}

/// Ideal notch: zeroes every bin within `repair_radius` of a peak.
pub fn notch_reject(spec: &Spectrum, peaks: &PeakSet, params: &RepairParams) -> Result<Spectrum> {
    require_centered(spec, "notch rejection")?;
    let mut out = spec.clone();
    if peaks.is_empty() {
        return Ok(out);
    }
    let mask = contamination_mask(spec, peaks, params.repair_radius);
    for (bin, &hit) in out.data_mut().iter_mut().zip(&mask) {
        if hit {
            *bin = Complex64::new(0.0, 0.0);
        }
    }
    Ok(out)
}

fn estimate(
    value: Complex64,
    donors: &[Complex64],
    estimator: MedianEstimator,
    threshold: f64,
) -> Complex64 {
    let componentwise = || {
        let mut re: Vec<f64> = donors.iter().map(|c| c.re).collect();
        let mut im: Vec<f64> = donors.iter().map(|c| c.im).collect();
        Complex64::new(median_in_place(&mut re), median_in_place(&mut im))
    };
    match estimator {
        MedianEstimator::Componentwise => componentwise(),
        MedianEstimator::PhasePreserving => {
            let mut mags: Vec<f64> = donors.iter().map(|c| c.norm()).collect();
            let level = median_in_place(&mut mags);
            let m = value.norm();
            if m > threshold * level {
                componentwise()
            } else if m > level {
                value * (level / m)
            } else {
                value
            }
        }
    }
}

/// Re-estimates every contaminated bin from the `window` x `window`
/// neighbourhood, never using contaminated bins as donors, then restores
/// conjugate symmetry by averaging each repaired bin with its mirror.
pub fn spectral_median(
    spec: &Spectrum,
    peaks: &PeakSet,
    params: &RepairParams,
) -> Result<Spectrum> {
    require_centered(spec, "spectral median repair")?;
    params.validate()?;
    if peaks.is_empty() {
        return Ok(spec.clone());
    }
    let (h, w) = (spec.height(), spec.width());
    let mask = contamination_mask(spec, peaks, params.repair_radius);
    let half = params.window / 2;
    let targets: Vec<usize> = (0..h * w).filter(|&i| mask[i]).collect();

    let estimates: Vec<Complex64> = targets
        .par_iter()
        .map(|&i| {
            let (u, v) = (i / w, i % w);
            let (u0, u1) = window_bounds(u, half, h);
            let (v0, v1) = window_bounds(v, half, w);
            let mut donors = Vec::with_capacity((u1 - u0) * (v1 - v0));
            for a in u0..u1 {
                for b in v0..v1 {
                    if !mask[a * w + b] {
                        donors.push(spec.get(a, b));
                    }
                }
            }
            if donors.len() < MIN_DONORS {
                return Err(Error::InsufficientDonors {
                    u,
                    v,
                    found: donors.len(),
                });
            }
            Ok(estimate(
                spec.data()[i],
                &donors,
                params.estimator,
                params.detect_threshold,
            ))
        })
        .collect::<Result<_>>()?;

    let mut repaired = spec.clone();
    for (&i, &e) in targets.iter().zip(&estimates) {
        repaired.data_mut()[i] = e;
    }
    let mut out = repaired.clone();
    for &i in &targets {
        let (mu, mv) = spec.mirror(i / w, i % w);
        let mirrored = repaired.get(mu, mv).conj();
        out.data_mut()[i] = 0.5 * (repaired.data()[i] + mirrored);
    }
    Ok(out)
}

/// Full pipeline: transform, center, detect, repair, un-center, invert.
pub fn denoise_moire(
    img: &GrayImage,
    method: SpectralMethod,
    params: &RepairParams,
) -> Result<(GrayImage, PeakSet)> {
    let centered = center_shift(&dft2d(img));
    let peaks = detect_peaks(&centered, params)?;
    if peaks.is_empty() {
        return Ok((idft2d(&center_shift(&centered))?, peaks));
    }
    let repaired = match method {
        SpectralMethod::Notch => notch_reject(&centered, &peaks, params)?,
        SpectralMethod::Median => spectral_median(&centered, &peaks, params)?,
    };
    Ok((idft2d(&center_shift(&repaired))?, peaks))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn median_odd_and_even() {
        assert_eq!(median_in_place(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median_in_place(&mut [4.0, 1.0, 3.0, 2.0]), 2.5);
        assert_eq!(median_in_place(&mut [5.0]), 5.0);
    }

    #[test]
    fn params_validation() {
        RepairParams::default().validate().unwrap();
        let bad = |f: fn(&mut RepairParams)| {
            let mut p = RepairParams::default();
            f(&mut p);
            p.validate().is_err()
        };
        assert!(bad(|p| p.window = 8));
        assert!(bad(|p| p.window = 1));
        assert!(bad(|p| p.repair_radius = 0));
        assert!(bad(|p| p.detect_threshold = 1.0));
        assert!(bad(|p| p.window = 5));
        assert!(!bad(|p| p.window = 7));
    }

    #[test]
    fn default_guard_radius() {
        let p = RepairParams::default();
        assert_eq!(p.guard_radius(256, 256), 8);
        assert_eq!(p.guard_radius(1000, 600), 12);
        let p = RepairParams {
            guard_dc_radius: Some(2),
            ..p
        };
        assert_eq!(p.guard_radius(1000, 600), 2);
    }

    #[test]
    fn uncentered_input_rejected() {
        let s = Spectrum::zeros(32, 32, false).unwrap();
        let p = RepairParams::default();
        assert!(matches!(detect_peaks(&s, &p), Err(Error::NotCentered(_))));
        assert!(notch_reject(&s, &PeakSet::default(), &p).is_err());
        assert!(spectral_median(&s, &PeakSet::default(), &p).is_err());
    }

    #[test]
    fn small_spectrum_rejected() {
        let s = Spectrum::zeros(15, 32, true).unwrap();
        assert!(matches!(
            detect_peaks(&s, &RepairParams::default()),
            Err(Error::SpectrumTooSmall { .. })
        ));
    }

    #[test]
    fn mask_is_mirror_closed() {
        let s = Spectrum::zeros(20, 18, true).unwrap();
        let peaks = PeakSet {
            peaks: vec![Peak {
                u: 1,
                v: 17,
                magnitude: 1.0,
            }],
        };
        let mask = contamination_mask(&s, &peaks, 3);
        for u in 0..18 {
            for v in 0..20 {
                if mask[u * 20 + v] {
                    let (mu, mv) = s.mirror(u, v);
                    assert!(mask[mu * 20 + mv]);
                }
            }
        }
    }

    #[test]
    fn constant_spectrum_spike_repaired_exactly() {
        for estimator in [
            MedianEstimator::PhasePreserving,
            MedianEstimator::Componentwise,
        ] {
            let value = c(5.0, 0.0);
            let mut s = Spectrum::new(32, 32, vec![value; 32 * 32], true).unwrap();
            s.set(10, 12, c(900.0, 0.0));
            s.set(22, 20, c(900.0, 0.0));
            let peaks = PeakSet {
                peaks: vec![
                    Peak {
                        u: 10,
                        v: 12,
                        magnitude: 900.0,
                    },
                    Peak {
                        u: 22,
                        v: 20,
                        magnitude: 900.0,
                    },
                ],
            };
            let params = RepairParams {
                estimator,
                ..RepairParams::default()
            };
            let out = spectral_median(&s, &peaks, &params).unwrap();
            assert!(out.data().iter().all(|&b| b == value), "{estimator:?}");
        }
    }

    #[test]
    fn phase_preserving_rules() {
        let donors = vec![c(3.0, 4.0); 9];
        let t = 10.0;
        // outlier: component-wise median of the donors
        assert_eq!(
            estimate(c(0.0, 100.0), &donors, MedianEstimator::PhasePreserving, t),
            c(3.0, 4.0)
        );
        // above the donor level: magnitude clipped to 5, phase kept
        let e = estimate(c(0.0, 20.0), &donors, MedianEstimator::PhasePreserving, t);
        assert!((e - c(0.0, 5.0)).norm() < 1e-12);
        // at or below the donor level: unchanged
        assert_eq!(
            estimate(c(-2.0, 0.0), &donors, MedianEstimator::PhasePreserving, t),
            c(-2.0, 0.0)
        );
        assert_eq!(
            estimate(c(-2.0, 0.0), &donors, MedianEstimator::Componentwise, t),
            c(3.0, 4.0)
        );
    }

    #[test]
    fn empty_peak_set_is_noop() {
        let data: Vec<Complex64> = (0..400).map(|i| c(i as f64, (i % 7) as f64)).collect();
        let s = Spectrum::new(20, 20, data, true).unwrap();
        let p = RepairParams::default();
        assert_eq!(notch_reject(&s, &PeakSet::default(), &p).unwrap(), s);
        assert_eq!(spectral_median(&s, &PeakSet::default(), &p).unwrap(), s);
    }

    #[test]
    fn insufficient_donors_reported() {
        let s = Spectrum::zeros(20, 20, true).unwrap();
        // a dense grid of peaks contaminates the whole window
        let peaks = PeakSet {
            peaks: (0..20)
                .step_by(3)
                .flat_map(|u| {
                    (0..20).step_by(3).map(move |v| Peak {
                        u,
                        v,
                        magnitude: 1.0,
                    })
                })
                .collect(),
        };
        assert!(matches!(
            spectral_median(&s, &peaks, &RepairParams::default()),
            Err(Error::InsufficientDonors { .. })
        ));
    }

    #[test]
    fn csv_layout() {
        let set = PeakSet {
            peaks: vec![Peak {
                u: 3,
                v: 4,
                magnitude: 2.5,
            }],
        };
        assert_eq!(set.to_csv(), "u,v,magnitude\n3,4,2.5\n");
    }
}
