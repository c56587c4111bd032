//! Procedurally generated stand-in test images for the benchmark corpus.

use std::f64::consts::PI;

use crate::error::Result;
use crate::image::GrayImage;
use crate::noise::add_gaussian;

/// Separable Gaussian blur; `wrap` selects periodic borders, otherwise replicate.
fn gaussian_blur(img: &GrayImage, sigma: f64, wrap: bool) -> GrayImage {
    let radius = (3.0 * sigma).ceil() as isize;
    let kernel: Vec<f64> = (-radius..=radius)
        .map(|i| (-((i * i) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let total: f64 = kernel.iter().sum();
    let kernel: Vec<f64> = kernel.into_iter().map(|k| k / total).collect();
    let (w, h) = (img.width() as isize, img.height() as isize);
    let index = |i: isize, n: isize| {
        if wrap {
            i.rem_euclid(n)
        } else {
            i.clamp(0, n - 1)
        }
    };
    let pass = |src: &[f64], horizontal: bool| -> Vec<f64> {
        let mut out = vec![0.0; src.len()];
        for r in 0..h {
            for c in 0..w {
                let mut acc = 0.0;
                for (k, &kv) in kernel.iter().enumerate() {
                    let off = k as isize - radius;
                    let (rr, cc) = if horizontal {
                        (r, index(c + off, w))
                    } else {
                        (index(r + off, h), c)
                    };
                    acc += kv * src[(rr * w + cc) as usize];
                }
                out[(r * w + c) as usize] = acc;
            }
        }
        out
    };
    let tmp = pass(img.data(), true);
    GrayImage::from_parts(img.width(), img.height(), pass(&tmp, false))
}

fn rescale(img: &GrayImage, mean: f64, std: f64) -> GrayImage {
    let (m, s) = (img.mean(), img.variance().sqrt());
    let data = img
        .data()
        .iter()
        .map(|v| mean + std * (v - m) / s)
        .collect();
    GrayImage::from_parts(img.width(), img.height(), data)
}

/// Periodic low-pass random texture with mean 128 and standard deviation 40.
pub fn random_field(size: usize, correlation: f64, seed: u64) -> Result<GrayImage> {
    let white = add_gaussian(&GrayImage::filled(size, size, 0.0)?, 1.0, seed)?;
    Ok(rescale(
        &gaussian_blur(&white, correlation, true),
        128.0,
        40.0,
    ))
}

/// Diagonal ramp with low-frequency shading.
pub fn gradient(size: usize) -> Result<GrayImage> {
    let n = size as f64;
    GrayImage::from_fn(size, size, |r, c| {
        let (x, y) = (r as f64 / n, c as f64 / n);
        40.0 + 170.0 * (0.6 * x + 0.4 * y)
            + 15.0 * (2.0 * PI * 1.3 * x).sin() * (2.0 * PI * 0.7 * y).cos()
    })
}

/// Sum of Gaussian blobs on a flat background.
pub fn blobs(size: usize) -> Result<GrayImage> {
    let n = size as f64;
    // (row, col, radius) as fractions of the side, amplitude in intensity units
    let spots = [
        (0.25, 0.30, 0.08, 80.0),
        (0.60, 0.70, 0.12, -60.0),
        (0.80, 0.20, 0.05, 90.0),
        (0.40, 0.85, 0.06, 50.0),
        (0.15, 0.65, 0.10, -40.0),
    ];
    GrayImage::from_fn(size, size, |r, c| {
        let (x, y) = (r as f64 / n, c as f64 / n);
        120.0
            + spots
                .iter()
                .map(|&(cx, cy, rad, amp)| {
                    amp * (-((x - cx).powi(2) + (y - cy).powi(2)) / (2.0 * rad * rad)).exp()
                })
                .sum::<f64>()
    })
}

/// A bright disk and a dark rectangle on a mid-gray background, lightly blurred.
pub fn shapes(size: usize) -> Result<GrayImage> {
    let n = size as f64;
    let sharp = GrayImage::from_fn(size, size, |r, c| {
        let (x, y) = (r as f64 / n, c as f64 / n);
        if (x - 0.45).powi(2) + (y - 0.4).powi(2) < 0.2 * 0.2 {
            200.0
        } else if (0.16..0.39).contains(&x) && (0.625..0.9).contains(&y) {
            40.0
        } else {
            90.0
        }
    })?;
    Ok(gaussian_blur(&sharp, 2.0, false))
}

/// The standard stand-in corpus, sorted by name.
pub fn standard_corpus(size: usize) -> Result<Vec<(String, GrayImage)>> {
    Ok(vec![
        ("blobs".to_string(), blobs(size)?),
        ("field-coarse".to_string(), random_field(size, 8.0, 11)?),
        ("field-fine".to_string(), random_field(size, 5.0, 12)?),
        ("gradient".to_string(), gradient(size)?),
        ("shapes".to_string(), shapes(size)?),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blur_preserves_constants_and_mean() {
        let img = GrayImage::filled(16, 16, 3.0).unwrap();
        for wrap in [true, false] {
            let out = gaussian_blur(&img, 2.0, wrap);
            assert!(out.data().iter().all(|v| (v - 3.0).abs() < 1e-12));
        }
        let img = GrayImage::from_fn(16, 16, |r, c| ((r * 31 + c * 17) % 11) as f64).unwrap();
        let out = gaussian_blur(&img, 1.5, true);
        assert!((out.mean() - img.mean()).abs() < 1e-9);
    }

    #[test]
    fn corpus_is_deterministic_and_named() {
        let a = standard_corpus(32).unwrap();
        let b = standard_corpus(32).unwrap();
        assert_eq!(a, b);
        let names: Vec<&str> = a.iter().map(|x| x.0.as_str()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
        let field = &a[1].1;
        assert!((field.mean() - 128.0).abs() < 1e-9);
        assert!((field.variance().sqrt() - 40.0).abs() < 1e-9);
    }
}
