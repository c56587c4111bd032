//! Benchmark harness: every image x every moire spec x every method.
//!
//! Work runs in parallel but rows are sorted by (image, noise, method) before
//! reporting, so the CSV is identical across runs. Wall-clock runtimes are only
//! recorded when timing is requested; otherwise the column holds `0.000`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::io::load_image;
use crate::methods::{apply, Method, MethodConfig};
use crate::metrics::{psnr, Psnr};
use crate::noise::{default_corpus, synthesize_moire};

pub const CSV_HEADER: &str = "image,noise,method,psnr_noisy,psnr_denoised,runtime_ms";

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub image_name: String,
    pub noise_spec_id: String,
    pub method: Method,
    pub psnr_noisy_db: Psnr,
    pub psnr_denoised_db: Psnr,
    pub runtime_ms: f64,
}

impl BenchRow {
    /// Denoised minus noisy PSNR; infinite when the output is exact.
    pub fn gain_db(&self) -> f64 {
        self.psnr_denoised_db.as_f64() - self.psnr_noisy_db.as_f64()
    }
}

#[derive(Debug, Clone)]
pub struct BenchOptions {
    pub methods: Vec<Method>,
    pub config: MethodConfig,
    pub timing: bool,
}

impl Default for BenchOptions {
    fn default() -> Self {
        Self {
            methods: vec![Method::Notch, Method::SpectralMedian],
            config: MethodConfig::default(),
            timing: false,
        }
    }
}

/// Mean scores of one method across the whole run.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodSummary {
    pub method: Method,
    pub mean_psnr_noisy: Psnr,
    pub mean_psnr_denoised: Psnr,
    pub mean_runtime_ms: f64,
}

/// Loads all `*.pgm` files from `dir`, named by file stem and sorted by name.
pub fn load_image_dir(dir: &Path) -> Result<Vec<(String, GrayImage)>> {
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path
            .extension()
            .is_some_and(|ext| ext.eq_ignore_ascii_case("pgm"))
        {
            paths.push(path);
        }
    }
    if paths.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "no .pgm images found in {}",
            dir.display()
        )));
    }
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let name = p
                .file_stem()
                .unwrap_or_default()
                .to_string_lossy()
                .into_owned();
            Ok((name, load_image(p)?))
        })
        .collect()
}

pub fn run_bench(images: &[(String, GrayImage)], opts: &BenchOptions) -> Result<Vec<BenchRow>> {
    if images.is_empty() {
        return Err(Error::InvalidParameter(
            "benchmark needs at least one image".into(),
        ));
    }
    if opts.methods.is_empty() {
        return Err(Error::InvalidParameter(
            "benchmark needs at least one method".into(),
        ));
    }
    let mut noisy = Vec::new();
    for (name, clean) in images {
        for (noise_id, spec) in default_corpus(clean.height(), clean.width()) {
            let contaminated = synthesize_moire(clean, &spec)?;
            let before = psnr(clean, &contaminated)?.psnr_db;
            noisy.push((name, clean, noise_id, contaminated, before));
        }
    }
    let jobs: Vec<_> = noisy
        .iter()
        .flat_map(|job| opts.methods.iter().map(move |&m| (job, m)))
        .collect();
    let mut rows = jobs
        .par_iter()
        .map(|&((name, clean, noise_id, contaminated, before), method)| {
            let start = Instant::now();
            let (out, _) = apply(method, contaminated, &opts.config)?;
            let elapsed = start.elapsed().as_secs_f64() * 1e3;
            Ok(BenchRow {
                image_name: (*name).clone(),
                noise_spec_id: noise_id.clone(),
                method,
                psnr_noisy_db: *before,
                psnr_denoised_db: psnr(clean, &out)?.psnr_db,
                runtime_ms: if opts.timing { elapsed } else { 0.0 },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| {
        (&a.image_name, &a.noise_spec_id, a.method.name()).cmp(&(
            &b.image_name,
            &b.noise_spec_id,
            b.method.name(),
        ))
    });
    Ok(rows)
}

fn mean_psnr<'a>(values: impl Iterator<Item = &'a Psnr>) -> Psnr {
    let mut sum = 0.0;
    let mut n = 0usize;
    for p in values {
        match p {
            Psnr::Infinite => return Psnr::Infinite,
            Psnr::Finite(v) => {
                sum += v;
                n += 1;
            }
        }
    }
    Psnr::Finite(sum / n.max(1) as f64)
}

/// Per-method means, sorted by method name.
pub fn summarize(rows: &[BenchRow]) -> Vec<MethodSummary> {
    let mut methods: Vec<Method> = rows.iter().map(|r| r.method).collect();
    methods.sort_by_key(|m| m.name());
    methods.dedup();
    methods
        .into_iter()
        .map(|method| {
            let mine: Vec<&BenchRow> = rows.iter().filter(|r| r.method == method).collect();
            MethodSummary {
                method,
                mean_psnr_noisy: mean_psnr(mine.iter().map(|r| &r.psnr_noisy_db)),
                mean_psnr_denoised: mean_psnr(mine.iter().map(|r| &r.psnr_denoised_db)),
                mean_runtime_ms: mine.iter().map(|r| r.runtime_ms).sum::<f64>() / mine.len() as f64,
            }
        })
        .collect()
}

/// CSV body with one row per run, followed by `summary,mean,<method>,...` lines.
pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{:.3}",
            r.image_name,
            r.noise_spec_id,
            r.method,
            r.psnr_noisy_db,
            r.psnr_denoised_db,
            r.runtime_ms
        );
    }
    for s in summarize(rows) {
        let _ = writeln!(
            out,
            "summary,mean,{},{},{},{:.3}",
            s.method, s.mean_psnr_noisy, s.mean_psnr_denoised, s.mean_runtime_ms
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::gradient;

    #[test]
    fn rows_are_sorted_and_complete() {
        let images = vec![
            ("b".to_string(), gradient(64).unwrap()),
            (
                "a".to_string(),
                gradient(64).unwrap().map(|v| 255.0 - v).unwrap(),
            ),
        ];
        let rows = run_bench(&images, &BenchOptions::default()).unwrap();
        assert_eq!(rows.len(), 2 * 6 * 2);
        assert_eq!(rows[0].image_name, "a");
        assert_eq!(rows[0].method, Method::Notch);
        let csv = to_csv(&rows);
        assert!(csv.starts_with(CSV_HEADER));
        assert_eq!(csv.lines().filter(|l| l.starts_with("summary,")).count(), 2);
        assert!(csv.lines().skip(1).all(|l| l.ends_with(",0.000")));
    }

    #[test]
    fn empty_inputs_are_rejected() {
        assert!(run_bench(&[], &BenchOptions::default()).is_err());
        let dir = tempfile::tempdir().unwrap();
        assert!(load_image_dir(dir.path()).is_err());
    }
}
