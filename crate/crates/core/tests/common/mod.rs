//! Oracles and fixtures shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use moire_core::GrayImage;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_image(
    rng: &mut ChaCha8Rng,
    width: usize,
    height: usize,
    lo: f64,
    hi: f64,
) -> GrayImage {
    let data = (0..width * height)
        .map(|_| lo + (hi - lo) * rng.random::<f64>())
        .collect();
    GrayImage::new(width, height, data).unwrap()
}

/// Direct O(N^4) evaluation of `S(u,v) = sum x(r,c) exp(-2 pi i (u r / H + v c / W))`,
/// returned as (re, im) in row-major order.
pub fn brute_dft(img: &GrayImage) -> Vec<(f64, f64)> {
    let (w, h) = (img.width(), img.height());
    let mut out = Vec::with_capacity(w * h);
    for u in 0..h {
        for v in 0..w {
            let (mut re, mut im) = (0.0, 0.0);
            for r in 0..h {
                for c in 0..w {
                    // reduce the phase index exactly before converting to an angle
                    let k = ((u * r) % h) as f64 / h as f64 + ((v * c) % w) as f64 / w as f64;
                    let angle = -2.0 * PI * k;
                    let x = img.get(r, c);
                    re += x * angle.cos();
                    im += x * angle.sin();
                }
            }
            out.push((re, im));
        }
    }
    out
}

/// Median filter by sorting each replicate-padded window.
pub fn sort_median(img: &GrayImage, window: usize) -> GrayImage {
    let half = (window / 2) as isize;
    GrayImage::from_fn(img.width(), img.height(), |r, c| {
        let mut vals = Vec::new();
        for dr in -half..=half {
            for dc in -half..=half {
                vals.push(img.get_clamped(r as isize + dr, c as isize + dc));
            }
        }
        vals.sort_by(f64::total_cmp);
        vals[vals.len() / 2]
    })
    .unwrap()
}

/// Normalized Gaussian blur with replicate padding and the bilateral window.
pub fn gaussian_blur_reference(img: &GrayImage, sigma: f64) -> GrayImage {
    let radius = (3.0 * sigma).ceil() as isize;
    GrayImage::from_fn(img.width(), img.height(), |r, c| {
        let (mut acc, mut norm) = (0.0, 0.0);
        for dr in -radius..=radius {
            for dc in -radius..=radius {
                let w = (-((dr * dr + dc * dc) as f64) / (2.0 * sigma * sigma)).exp();
                acc += w * img.get_clamped(r as isize + dr, c as isize + dc);
                norm += w;
            }
        }
        acc / norm
    })
    .unwrap()
}

/// A single real sinusoid at integer bin offsets `(du, dv)` from DC.
pub fn pure_sinusoid(size: usize, du: i64, dv: i64, amplitude: f64, phase: f64) -> GrayImage {
    let n = size as f64;
    GrayImage::from_fn(size, size, |r, c| {
        amplitude * (2.0 * PI * (du as f64 * r as f64 / n + dv as f64 * c as f64 / n) + phase).sin()
    })
    .unwrap()
}
