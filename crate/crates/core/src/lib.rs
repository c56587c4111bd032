//! Moiré removal by spectral median repair of the 2-D Fourier spectrum,
//! together with a notch-reject baseline, six classical spatial denoisers,
//! PSNR scoring, PGM I/O and a benchmark harness.
//!
//! ```
//! use moire_core::{denoise_moire, noise, GrayImage, RepairParams, SpectralMethod};
//!
//! let clean = GrayImage::from_fn(64, 64, |r, c| 100.0 + (r + c) as f64).unwrap();
//! let spec = noise::MoireSpec::new(vec![noise::MoireComponent {
//!     amplitude: 20.0,
//!     freq_u: 10.0 / 64.0,
//!     freq_v: 6.0 / 64.0,
//!     phase: 0.0,
//! }]);
//! let noisy = noise::synthesize_moire(&clean, &spec).unwrap();
//! let (repaired, peaks) =
//!     denoise_moire(&noisy, SpectralMethod::Median, &RepairParams::default()).unwrap();
//! assert_eq!(peaks.len(), 2);
//! assert_eq!(repaired.width(), 64);
//! ```

pub mod bench;
pub mod cli;
mod error;
mod image;
pub mod io;
pub mod methods;
pub mod metrics;
pub mod noise;
pub mod pgm;
pub mod spatial;
pub mod spectral;
pub mod synth;
pub mod transform;

pub use error::{Error, PgmError, Result};
pub use image::GrayImage;
pub use methods::{apply, Method, MethodConfig};
pub use metrics::{mse, psnr, Psnr, QualityReport};
pub use pgm::{read_pgm, write_pgm, PgmFormat};
pub use spectral::{
    denoise_moire, detect_peaks, MedianEstimator, Peak, PeakSet, RepairParams, SpectralMethod,
};
pub use transform::{center_shift, dft2d, idft2d, Spectrum};
