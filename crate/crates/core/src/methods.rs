//! Registry of every denoising method and its parameter set.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::spatial::{
    anisotropic_diffusion, bilateral_filter, median_filter, mode_filter, nlm_denoise, tv_denoise,
    BilateralParams, DiffusionParams, MedianParams, ModeParams, NlmParams, TvParams,
};
use crate::spectral::{denoise_moire, PeakSet, RepairParams, SpectralMethod};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, clap::ValueEnum)]
pub enum Method {
    #[value(name = "spectral-median")]
    SpectralMedian,
    Notch,
    Median,
    Mode,
    Bilateral,
    Diffusion,
    Tv,
    Nlm,
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::SpectralMedian,
        Method::Notch,
        Method::Median,
        Method::Mode,
        Method::Bilateral,
        Method::Diffusion,
        Method::Tv,
        Method::Nlm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::SpectralMedian => "spectral-median",
            Method::Notch => "notch",
            Method::Median => "median",
            Method::Mode => "mode",
            Method::Bilateral => "bilateral",
            Method::Diffusion => "diffusion",
            Method::Tv => "tv",
            Method::Nlm => "nlm",
        }
    }

    pub fn is_spectral(self) -> bool {
        matches!(self, Method::SpectralMedian | Method::Notch)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Method::ALL.iter().map(|m| m.name()).collect();
                Error::InvalidParameter(format!(
                    "unknown method {s:?}; valid methods: {}",
                    names.join(", ")
                ))
            })
    }
}

/// Parameters for every method; each method reads only its own block.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MethodConfig {
    pub repair: RepairParams,
    pub median: MedianParams,
    pub mode: ModeParams,
    pub bilateral: BilateralParams,
    pub diffusion: DiffusionParams,
    pub tv: TvParams,
    pub nlm: NlmParams,
}

/// Runs `method`; spectral methods also return the detected peaks.
pub fn apply(
    method: Method,
    img: &GrayImage,
    cfg: &MethodConfig,
) -> Result<(GrayImage, Option<PeakSet>)> {
    let spatial = |out: Result<GrayImage>| out.map(|img| (img, None));
    match method {
        Method::SpectralMedian => denoise_moire(img, SpectralMethod::Median, &cfg.repair)
            .map(|(img, peaks)| (img, Some(peaks))),
        Method::Notch => denoise_moire(img, SpectralMethod::Notch, &cfg.repair)
            .map(|(img, peaks)| (img, Some(peaks))),
        Method::Median => spatial(median_filter(img, &cfg.median)),
        Method::Mode => spatial(mode_filter(img, &cfg.mode)),
        Method::Bilateral => spatial(bilateral_filter(img, &cfg.bilateral)),
        Method::Diffusion => spatial(anisotropic_diffusion(img, &cfg.diffusion)),
        Method::Tv => spatial(tv_denoise(img, &cfg.tv)),
        Method::Nlm => spatial(nlm_denoise(img, &cfg.nlm)),
    }
}
