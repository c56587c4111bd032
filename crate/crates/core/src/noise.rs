//! Ground-truth contamination: moire (sum of sinusoids), Gaussian and
//! salt-and-pepper noise.
//!
//! Random generators derive each pixel's samples from its own ChaCha8 stream
//! keyed by `(seed, pixel index)`, so results do not depend on evaluation order.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::image::GrayImage;

/// One sinusoid `A * sin(2*pi*(freq_u*row + freq_v*col) + phase)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoireComponent {
    pub amplitude: f64,
    /// Vertical frequency, cycles per pixel.
    pub freq_u: f64,
    /// Horizontal frequency, cycles per pixel.
    pub freq_v: f64,
    pub phase: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MoireSpec {
    pub components: Vec<MoireComponent>,
}

impl MoireSpec {
    pub fn new(components: Vec<MoireComponent>) -> Self {
        Self { components }
    }

    pub fn validate(&self) -> Result<()> {
        for c in &self.components {
            if ![c.amplitude, c.freq_u, c.freq_v, c.phase]
                .iter()
                .all(|v| v.is_finite())
            {
                return Err(Error::InvalidParameter("non-finite moire component".into()));
            }
            if c.amplitude < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "negative moire amplitude {}",
                    c.amplitude
                )));
            }
            if c.freq_u.abs() > 0.5 || c.freq_v.abs() > 0.5 {
                return Err(Error::AboveNyquist {
                    freq_u: c.freq_u,
                    freq_v: c.freq_v,
                });
            }
        }
        Ok(())
    }

    /// Parses `amplitude,freq_u,freq_v,phase` lines. Blank lines, `#` comments
    /// and a leading header row are skipped.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut components = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if components.is_empty() && line.starts_with("amplitude") {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 4 {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("expected 4 fields, found {}", fields.len()),
                });
            }
            let mut vals = [0.0; 4];
            for (slot, field) in vals.iter_mut().zip(&fields) {
                *slot = field.parse::<f64>().map_err(|e| Error::Parse {
                    line: i + 1,
                    msg: format!("{field:?}: {e}"),
                })?;
            }
            components.push(MoireComponent {
                amplitude: vals[0],
                freq_u: vals[1],
                freq_v: vals[2],
                phase: vals[3],
            });
        }
        let spec = Self { components };
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("amplitude,freq_u,freq_v,phase\n");
        for c in &self.components {
            // `{}` on f64 prints the shortest round-tripping representation.
            let _ = writeln!(out, "{},{},{},{}", c.amplitude, c.freq_u, c.freq_v, c.phase);
        }
        out
    }
}

pub fn synthesize_moire(img: &GrayImage, spec: &MoireSpec) -> Result<GrayImage> {
    spec.validate()?;
    let w = img.width();
    let mut data = img.data().to_vec();
    for c in &spec.components {
        for (i, px) in data.iter_mut().enumerate() {
            let (row, col) = ((i / w) as f64, (i % w) as f64);
            *px += c.amplitude * (2.0 * PI * (c.freq_u * row + c.freq_v * col) + c.phase).sin();
        }
    }
    GrayImage::new(w, img.height(), data)
}

fn pixel_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

pub fn add_gaussian(img: &GrayImage, sigma: f64, seed: u64) -> Result<GrayImage> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "gaussian sigma must be positive, got {sigma}"
        )));
    }
    let data = img
        .data()
        .par_iter()
        .enumerate()
        .map(|(i, &v)| {
            let z: f64 = StandardNormal.sample(&mut pixel_rng(seed, i));
            v + sigma * z
        })
        .collect();
    GrayImage::new(img.width(), img.height(), data)
}

pub fn add_salt_pepper(img: &GrayImage, density: f64, seed: u64) -> Result<GrayImage> {
    if !(density > 0.0 && density < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "salt-and-pepper density must lie in (0, 1), got {density}"
        )));
    }
    let data = img
        .data()
        .par_iter()
        .enumerate()
        .map(|(i, &v)| {
            let mut rng = pixel_rng(seed, i);
            if rng.random::<f64>() < density {
                if rng.random::<bool>() {
                    255.0
                } else {
                    0.0
                }
            } else {
                v
            }
        })
        .collect();
    GrayImage::new(img.width(), img.height(), data)
}

/// The fixed benchmark noise corpus for an image of `height` x `width`.
///
/// Frequencies are whole cycles per image (8/N, 6/M), (12/N, 0), (5/N, 11/M);
/// amplitudes 10, 20, 40; phases 0 and pi/3. Single components come first,
/// then pairs, then all three together.
pub fn default_corpus(height: usize, width: usize) -> Vec<(String, MoireSpec)> {
    let (n, m) = (height as f64, width as f64);
    let comp = |amplitude: f64, cu: f64, cv: f64, phase: f64| MoireComponent {
        amplitude,
        freq_u: cu / n,
        freq_v: cv / m,
        phase,
    };
    let third = PI / 3.0;
    let specs = vec![
        vec![comp(20.0, 8.0, 6.0, 0.0)],
        vec![comp(10.0, 12.0, 0.0, third)],
        vec![comp(40.0, 5.0, 11.0, 0.0)],
        vec![comp(10.0, 8.0, 6.0, third), comp(40.0, 12.0, 0.0, 0.0)],
        vec![comp(20.0, 12.0, 0.0, 0.0), comp(10.0, 5.0, 11.0, third)],
        vec![
            comp(40.0, 8.0, 6.0, 0.0),
            comp(20.0, 12.0, 0.0, third),
            comp(10.0, 5.0, 11.0, 0.0),
        ],
    ];
    specs
        .into_iter()
        .enumerate()
        .map(|(i, c)| (format!("m{}", i + 1), MoireSpec::new(c)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zeros(n: usize) -> GrayImage {
        GrayImage::filled(n, n, 0.0).unwrap()
    }

    #[test]
    fn empty_spec_is_identity() {
        let img = GrayImage::from_fn(5, 3, |r, c| (r * 5 + c) as f64 * 1.5).unwrap();
        assert_eq!(synthesize_moire(&img, &MoireSpec::default()).unwrap(), img);
    }

    #[test]
    fn single_sinusoid_range_and_mean() {
        let spec = MoireSpec::new(vec![MoireComponent {
            amplitude: 20.0,
            freq_u: 2.0 / 64.0,
            freq_v: 0.0,
            phase: 0.0,
        }]);
        let out = synthesize_moire(&zeros(64), &spec).unwrap();
        let (lo, hi) = out.min_max();
        assert!(lo >= -20.0 - 1e-12 && hi <= 20.0 + 1e-12);
        assert!((hi - 20.0).abs() < 1e-9 && (lo + 20.0).abs() < 1e-9);
        assert!(out.mean().abs() < 1e-9);
    }

    #[test]
    fn rejects_above_nyquist() {
        let spec = MoireSpec::new(vec![MoireComponent {
            amplitude: 1.0,
            freq_u: 0.6,
            freq_v: 0.0,
            phase: 0.0,
        }]);
        assert!(matches!(
            synthesize_moire(&zeros(4), &spec),
            Err(Error::AboveNyquist { .. })
        ));
    }

    #[test]
    fn csv_round_trip_and_errors() {
        let spec = &default_corpus(64, 48)[5].1;
        assert_eq!(&MoireSpec::from_csv(&spec.to_csv()).unwrap(), spec);
        let parsed = MoireSpec::from_csv("# comment\n\n20, 0.125, 0, 1.5\n").unwrap();
        assert_eq!(parsed.components.len(), 1);
        assert_eq!(parsed.components[0].freq_u, 0.125);
        assert!(matches!(
            MoireSpec::from_csv("1,2,3"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            MoireSpec::from_csv("1,x,0,0"),
            Err(Error::Parse { .. })
        ));
        assert!(MoireSpec::from_csv("1,0.7,0,0").is_err());
        assert!(MoireSpec::from_csv("-1,0.1,0,0").is_err());
    }

    #[test]
    fn gaussian_is_deterministic_and_calibrated() {
        let img = zeros(256);
        let a = add_gaussian(&img, 10.0, 7).unwrap();
        assert_eq!(a, add_gaussian(&img, 10.0, 7).unwrap());
        assert_ne!(a, add_gaussian(&img, 10.0, 8).unwrap());
        let std = a.variance().sqrt();
        assert!((9.5..=10.5).contains(&std), "std {std}");
        assert!(a.mean().abs() < 5.0 * 10.0 / 256.0);
        assert!(add_gaussian(&img, 0.0, 1).is_err());
        assert!(add_gaussian(&img, -2.0, 1).is_err());
    }

    #[test]
    fn salt_pepper_fraction_and_values() {
        let img = GrayImage::filled(256, 256, 100.0).unwrap();
        let out = add_salt_pepper(&img, 0.1, 3).unwrap();
        assert_eq!(out, add_salt_pepper(&img, 0.1, 3).unwrap());
        let corrupted: Vec<f64> = out.data().iter().copied().filter(|&v| v != 100.0).collect();
        let frac = corrupted.len() as f64 / out.len() as f64;
        assert!((0.08..=0.12).contains(&frac), "fraction {frac}");
        assert!(corrupted.iter().all(|&v| v == 0.0 || v == 255.0));
        let salt = corrupted.iter().filter(|&&v| v == 255.0).count() as f64;
        assert!((salt / corrupted.len() as f64 - 0.5).abs() < 0.05);
        assert!(add_salt_pepper(&img, 0.0, 1).is_err());
        assert!(add_salt_pepper(&img, 1.0, 1).is_err());
    }

    #[test]
    fn corpus_shape() {
        let corpus = default_corpus(256, 128);
        assert_eq!(corpus.len(), 6);
        assert_eq!(corpus[0].1.components[0].freq_u, 8.0 / 256.0);
        assert_eq!(corpus[0].1.components[0].freq_v, 6.0 / 128.0);
        for (_, s) in &corpus {
            s.validate().unwrap();
        }
    }
}
