//! Exact 2D DFT for arbitrary dimensions, DC-centering and display views.
//!
//! Forward transform is unnormalized; the inverse carries the `1/(H*W)` factor.
//! Row and column passes use `rustfft`, which handles any length (including
//! primes) exactly.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::image::GrayImage;

/// Relative bound on the imaginary residue tolerated by [`idft2d`].
pub const IMAG_RESIDUE_TOLERANCE: f64 = 1e-6;
/// Imaginary residue (intensity units) that is always accepted, so an
/// all-but-zero result is not rejected for round-off alone.
pub const IMAG_RESIDUE_FLOOR: f64 = 1e-9;

/// Complex 2D spectrum, row-major. Row index `u` is the vertical frequency,
/// column index `v` the horizontal one. When `centered`, DC sits at
/// `(height / 2, width / 2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    width: usize,
    height: usize,
    data: Vec<Complex64>,
    centered: bool,
}

impl Spectrum {
    pub fn new(width: usize, height: usize, data: Vec<Complex64>, centered: bool) -> Result<Self> {
        if width == 0 || height == 0 || data.len() != width * height {
            return Err(Error::InvalidParameter(format!(
                "spectrum {width}x{height} with {} bins",
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            data,
            centered,
        })
    }

    pub fn zeros(width: usize, height: usize, centered: bool) -> Result<Self> {
        Self::new(
            width,
            height,
            vec![Complex64::new(0.0, 0.0); width * height],
            centered,
        )
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn is_centered(&self) -> bool {
        self.centered
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> Complex64 {
        self.data[u * self.width + v]
    }

    #[inline]
    pub fn set(&mut self, u: usize, v: usize, value: Complex64) {
        self.data[u * self.width + v] = value;
    }

    /// Location of the DC bin in the current layout.
    pub fn dc(&self) -> (usize, usize) {
        if self.centered {
            (self.height / 2, self.width / 2)
        } else {
            (0, 0)
        }
    }

    /// Index of the Hermitian mirror of `(u, v)` in the current layout.
    #[inline]
    pub fn mirror(&self, u: usize, v: usize) -> (usize, usize) {
        let (cu, cv) = self.dc();
        (
            (2 * cu + self.height - u) % self.height,
            (2 * cv + self.width - v) % self.width,
        )
    }

    pub fn energy(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Largest relative deviation from `S(u,v) = conj(S(mirror(u,v)))`,
    /// normalized by the largest bin magnitude.
    pub fn hermitian_residual(&self) -> f64 {
        let scale = self.data.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst: f64 = 0.0;
        for u in 0..self.height {
            for v in 0..self.width {
                let (mu, mv) = self.mirror(u, v);
                worst = worst.max((self.get(u, v) - self.get(mu, mv).conj()).norm());
            }
        }
        worst / scale
    }

    /// Circular roll so that element `(u, v)` moves to `(u + du, v + dv)`.
    fn rolled(&self, du: usize, dv: usize) -> Vec<Complex64> {
        let (h, w) = (self.height, self.width);
        let mut out = vec![Complex64::new(0.0, 0.0); w * h];
        for u in 0..h {
            let nu = (u + du) % h;
            for v in 0..w {
                out[nu * w + (v + dv) % w] = self.data[u * w + v];
            }
        }
        out
    }
}

fn fft_rows(data: &mut [Complex64], width: usize, height: usize, inverse: bool) {
    let mut planner = FftPlanner::<f64>::new();
    let row = if inverse {
        planner.plan_fft_inverse(width)
    } else {
        planner.plan_fft_forward(width)
    };
    row.process(data);

    let col = if inverse {
        planner.plan_fft_inverse(height)
    } else {
        planner.plan_fft_forward(height)
    };
    let mut column = vec![Complex64::new(0.0, 0.0); height];
    for v in 0..width {
        for u in 0..height {
            column[u] = data[u * width + v];
        }
        col.process(&mut column);
        for u in 0..height {
            data[u * width + v] = column[u];
        }
    }
}

/// Unnormalized forward transform, not centered.
pub fn dft2d(img: &GrayImage) -> Spectrum {
    let (w, h) = (img.width(), img.height());
    let mut data: Vec<Complex64> = img.data().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft_rows(&mut data, w, h, false);
    Spectrum {
        width: w,
        height: h,
        data,
        centered: false,
    }
}

/// Normalized inverse transform of an un-centered, Hermitian spectrum.
///
/// Fails if the imaginary part of the result is not negligible, which means an
/// upstream edit broke the conjugate symmetry.
pub fn idft2d(spec: &Spectrum) -> Result<GrayImage> {
    if spec.centered {
        return Err(Error::InvalidParameter(
            "spectrum must be un-centered before the inverse transform".into(),
        ));
    }
    let (w, h) = (spec.width, spec.height);
    let mut data = spec.data.clone();
    fft_rows(&mut data, w, h, true);
    let norm = 1.0 / (w * h) as f64;
    let mut max_re: f64 = 0.0;
    let mut max_im: f64 = 0.0;
    for c in &data {
        max_re = max_re.max((c.re * norm).abs());
        max_im = max_im.max((c.im * norm).abs());
    }
    if !max_re.is_finite() || !max_im.is_finite() {
        return Err(Error::InvalidParameter(
            "spectrum contains non-finite bins".into(),
        ));
    }
    if max_im > IMAG_RESIDUE_TOLERANCE * max_re + IMAG_RESIDUE_FLOOR {
        return Err(Error::BrokenSymmetry {
            imag: max_im,
            real: max_re,
        });
    }
    Ok(GrayImage::from_parts(
        w,
        h,
        data.into_iter().map(|c| c.re * norm).collect(),
    ))
}

/// Moves DC to `(H/2, W/2)` (or back, if already centered) and toggles the flag.
/// Applying it twice is the identity for every size.
pub fn center_shift(spec: &Spectrum) -> Spectrum {
    let (h, w) = (spec.height, spec.width);
    let data = if spec.centered {
        spec.rolled(h - h / 2, w - w / 2)
    } else {
        spec.rolled(h / 2, w / 2)
    };
    Spectrum {
        width: w,
        height: h,
        data,
        centered: !spec.centered,
    }
}

/// `log(1 + |S|)` rescaled linearly to `[0, 255]`; constant input maps to zeros.
pub fn log_magnitude(spec: &Spectrum) -> GrayImage {
    let logs: Vec<f64> = spec.data.iter().map(|c| c.norm().ln_1p()).collect();
    let (lo, hi) = logs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
            (a.min(v), b.max(v))
        });
    let range = hi - lo;
    let data = if range > 0.0 && range.is_finite() {
        logs.iter().map(|v| (v - lo) / range * 255.0).collect()
    } else {
        vec![0.0; logs.len()]
    };
    GrayImage::from_parts(spec.width, spec.height, data)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_pixel() {
        let s = dft2d(&GrayImage::filled(1, 1, 42.5).unwrap());
        assert_eq!(s.data(), &[c(42.5, 0.0)]);
        assert_eq!(idft2d(&s).unwrap().data(), &[42.5]);
    }

    #[test]
    fn constant_image_has_only_dc() {
        let s = dft2d(&GrayImage::filled(7, 5, 3.0).unwrap());
        assert!((s.get(0, 0) - c(105.0, 0.0)).norm() < 1e-9);
        for (i, bin) in s.data().iter().enumerate().skip(1) {
            assert!(bin.norm() < 1e-9, "bin {i} = {bin}");
        }
    }

    #[test]
    fn dc_only_inverse_is_constant() {
        let mut s = Spectrum::zeros(6, 4, false).unwrap();
        s.set(0, 0, c(24.0 * 9.0, 0.0));
        let img = idft2d(&s).unwrap();
        assert!(img.data().iter().all(|&v| (v - 9.0).abs() < 1e-12));
    }

    #[test]
    fn idft_rejects_centered_and_asymmetric() {
        let s = Spectrum::zeros(4, 4, true).unwrap();
        assert!(idft2d(&s).is_err());
        let mut s = Spectrum::zeros(4, 4, false).unwrap();
        s.set(0, 1, c(10.0, 0.0));
        assert!(matches!(idft2d(&s), Err(Error::BrokenSymmetry { .. })));
        // round-off on a vanishing result is tolerated
        let mut s = Spectrum::zeros(4, 4, false).unwrap();
        s.set(0, 1, c(1e-12, 0.0));
        assert!(idft2d(&s).is_ok());
    }

    #[test]
    fn center_shift_even() {
        let mut s = Spectrum::zeros(4, 4, false).unwrap();
        s.set(0, 0, c(1.0, 0.0));
        let shifted = center_shift(&s);
        assert!(shifted.is_centered());
        assert_eq!(shifted.get(2, 2), c(1.0, 0.0));
        assert_eq!(center_shift(&shifted), s);
    }

    #[test]
    fn center_shift_odd() {
        let data: Vec<Complex64> = (0..25).map(|i| c(i as f64, -(i as f64))).collect();
        let s = Spectrum::new(5, 5, data, false).unwrap();
        let shifted = center_shift(&s);
        assert_eq!(shifted.get(2, 2), s.get(0, 0));
        // index-permutation oracle: (u, v) -> ((u + 2) % 5, (v + 2) % 5)
        for u in 0..5 {
            for v in 0..5 {
                assert_eq!(shifted.get((u + 2) % 5, (v + 2) % 5), s.get(u, v));
            }
        }
        assert_eq!(center_shift(&shifted), s);
    }

    #[test]
    fn mirror_about_center() {
        let s = Spectrum::zeros(8, 6, true).unwrap();
        assert_eq!(s.dc(), (3, 4));
        assert_eq!(s.mirror(3, 4), (3, 4));
        assert_eq!(s.mirror(5, 4), (1, 4));
        assert_eq!(s.mirror(0, 0), (0, 0));
        let s = Spectrum::zeros(8, 6, false).unwrap();
        assert_eq!(s.mirror(1, 2), (5, 6));
    }

    #[test]
    fn log_magnitude_views() {
        let s = Spectrum::zeros(5, 3, true).unwrap();
        assert!(log_magnitude(&s).data().iter().all(|&v| v == 0.0));
        let mut s = Spectrum::zeros(5, 3, true).unwrap();
        s.set(1, 3, c(3.0, 4.0));
        let img = log_magnitude(&s);
        let nonzero: Vec<_> = img.data().iter().filter(|&&v| v != 0.0).collect();
        assert_eq!(nonzero, vec![&255.0]);
        assert_eq!(img.get(1, 3), 255.0);
    }
}
