//! Command-line front end for the `moire` binary.
//!
//! Exit codes: 0 on success, 1 on runtime failure (I/O, bad image, dimension
//! mismatch, ...), 2 on usage errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{load_image_dir, run_bench, summarize, to_csv, BenchOptions};
use crate::error::{Error, Result};
use crate::io::{load_image, read_text, save_matrix, save_pgm, write_text};
use crate::methods::{apply, Method, MethodConfig};
use crate::metrics::psnr;
use crate::noise::{add_gaussian, add_salt_pepper, synthesize_moire, MoireSpec};
use crate::pgm::PgmFormat;
use crate::spatial::{Conductance, ModeKind};
use crate::spectral::MedianEstimator;
use crate::synth::standard_corpus;
use crate::transform::{center_shift, dft2d, log_magnitude};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "moire",
    version,
    about = "Moire removal by spectral median repair, with classical baselines"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Contaminate an image with moire, Gaussian or salt-and-pepper noise.
    AddNoise(AddNoiseArgs),
    /// Remove noise with one of the registered methods.
    Denoise(DenoiseArgs),
    /// Print the PSNR of a test image against a reference.
    Psnr(PsnrArgs),
    /// Score methods over a directory of images and the standard moire corpus.
    Bench(BenchArgs),
    /// Write the procedural stand-in images as PGM files.
    GenCorpus(GenCorpusArgs),
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("noise").required(true).multiple(false)))]
struct AddNoiseArgs {
    /// Input image (PGM or text matrix).
    #[arg(long = "in")]
    input: PathBuf,
    /// Output PGM (values clamped and rounded to 0..=255).
    #[arg(long)]
    out: PathBuf,
    /// CSV of moire components: amplitude,freq_u,freq_v,phase (cycles/pixel).
    #[arg(long, group = "noise")]
    noise_spec: Option<PathBuf>,
    /// Additive Gaussian noise with this standard deviation.
    #[arg(long, group = "noise")]
    gaussian: Option<f64>,
    /// Salt-and-pepper noise with this pixel density in [0, 1].
    #[arg(long, group = "noise")]
    salt_pepper: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also save the unquantized result as a text matrix.
    #[arg(long)]
    out_float: Option<PathBuf>,
    /// Write ASCII (P2) instead of binary (P5) PGM.
    #[arg(long)]
    ascii: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EstimatorArg {
    PhasePreserving,
    Componentwise,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeKindArg {
    Global,
    Local,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ConductanceArg {
    Exponential,
    Rational,
}

/// Method parameters; unset flags keep the library defaults.
#[derive(Debug, Args, Default)]
struct MethodArgs {
    /// Spectral methods: repair disk radius in bins [3].
    #[arg(long, help_heading = "Spectral")]
    radius: Option<usize>,
    /// Spectral median: odd side of the donor window [9].
    #[arg(long, help_heading = "Spectral")]
    window: Option<usize>,
    /// Spectral methods: DC guard radius [max(8, ceil(0.02*min(H,W)))].
    #[arg(long, help_heading = "Spectral")]
    guard: Option<usize>,
    /// Spectral methods: peak-to-background ratio [10].
    #[arg(long, help_heading = "Spectral")]
    threshold: Option<f64>,
    /// Spectral methods: weakest sinusoid amplitude treated as a peak [1].
    #[arg(long, help_heading = "Spectral")]
    min_amplitude: Option<f64>,
    /// Spectral median: how contaminated bins are re-estimated [phase-preserving].
    #[arg(long, value_enum, help_heading = "Spectral")]
    estimator: Option<EstimatorArg>,
    /// Median filter window [3].
    #[arg(long, help_heading = "Spatial")]
    median_window: Option<usize>,
    /// Mode filter window [5].
    #[arg(long, help_heading = "Spatial")]
    mode_window: Option<usize>,
    /// Mode filter variant [global].
    #[arg(long, value_enum, help_heading = "Spatial")]
    mode_kind: Option<ModeKindArg>,
    /// Mode filter histogram bin width / mean-shift bandwidth [8].
    #[arg(long, help_heading = "Spatial")]
    bin_width: Option<f64>,
    /// Bilateral spatial sigma [2].
    #[arg(long, help_heading = "Spatial")]
    sigma_s: Option<f64>,
    /// Bilateral range sigma [25].
    #[arg(long, help_heading = "Spatial")]
    sigma_r: Option<f64>,
    /// Diffusion edge threshold K [15].
    #[arg(long, help_heading = "Spatial")]
    diffusion_k: Option<f64>,
    /// Diffusion step, at most 0.25 [0.25].
    #[arg(long, help_heading = "Spatial")]
    diffusion_lambda: Option<f64>,
    /// Diffusion iterations [20].
    #[arg(long, help_heading = "Spatial")]
    diffusion_iterations: Option<usize>,
    /// Diffusion conductance function [exponential].
    #[arg(long, value_enum, help_heading = "Spatial")]
    conductance: Option<ConductanceArg>,
    /// TV fidelity weight [0.1].
    #[arg(long, help_heading = "Spatial")]
    tv_lambda: Option<f64>,
    /// TV descent step [0.1].
    #[arg(long, help_heading = "Spatial")]
    tv_step: Option<f64>,
    /// TV iterations [100].
    #[arg(long, help_heading = "Spatial")]
    tv_iterations: Option<usize>,
    /// NLM filtering strength h [10].
    #[arg(long, help_heading = "Spatial")]
    nlm_h: Option<f64>,
    /// NLM patch radius [3].
    #[arg(long, help_heading = "Spatial")]
    patch_radius: Option<usize>,
    /// NLM search radius [10].
    #[arg(long, help_heading = "Spatial")]
    search_radius: Option<usize>,
}

impl MethodArgs {
    fn config(&self) -> MethodConfig {
        let mut c = MethodConfig::default();
        fn set<T: Copy>(slot: &mut T, value: Option<T>) {
            if let Some(v) = value {
                *slot = v;
            }
        }
        set(&mut c.repair.repair_radius, self.radius);
        set(&mut c.repair.window, self.window);
        if self.guard.is_some() {
            c.repair.guard_dc_radius = self.guard;
        }
        set(&mut c.repair.detect_threshold, self.threshold);
        set(&mut c.repair.min_amplitude, self.min_amplitude);
        set(
            &mut c.repair.estimator,
            self.estimator.map(|e| match e {
                EstimatorArg::PhasePreserving => MedianEstimator::PhasePreserving,
                EstimatorArg::Componentwise => MedianEstimator::Componentwise,
            }),
        );
        set(&mut c.median.window, self.median_window);
        set(&mut c.mode.window, self.mode_window);
        set(
            &mut c.mode.kind,
            self.mode_kind.map(|k| match k {
                ModeKindArg::Global => ModeKind::Global,
                ModeKindArg::Local => ModeKind::Local,
            }),
        );
        set(&mut c.mode.bin_width, self.bin_width);
        set(&mut c.bilateral.sigma_s, self.sigma_s);
        set(&mut c.bilateral.sigma_r, self.sigma_r);
        set(&mut c.diffusion.k, self.diffusion_k);
        set(&mut c.diffusion.lambda, self.diffusion_lambda);
        set(&mut c.diffusion.iterations, self.diffusion_iterations);
        set(
            &mut c.diffusion.conductance,
            self.conductance.map(|k| match k {
                ConductanceArg::Exponential => Conductance::Exponential,
                ConductanceArg::Rational => Conductance::Rational,
            }),
        );
        set(&mut c.tv.lambda, self.tv_lambda);
        set(&mut c.tv.step, self.tv_step);
        set(&mut c.tv.iterations, self.tv_iterations);
        set(&mut c.nlm.h, self.nlm_h);
        set(&mut c.nlm.patch_radius, self.patch_radius);
        set(&mut c.nlm.search_radius, self.search_radius);
        c
    }
}

#[derive(Debug, Args)]
struct DenoiseArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum)]
    method: Method,
    /// Spectral methods only: write detected peaks as CSV (u,v,magnitude).
    #[arg(long)]
    dump_peaks: Option<PathBuf>,
    /// Write the log-magnitude of the input's centered spectrum as PGM.
    #[arg(long)]
    dump_spectrum: Option<PathBuf>,
    /// Also save the unquantized result as a text matrix.
    #[arg(long)]
    out_float: Option<PathBuf>,
    #[arg(long)]
    ascii: bool,
    #[command(flatten)]
    params: MethodArgs,
}

#[derive(Debug, Args)]
struct PsnrArgs {
    /// Reference image (PGM or text matrix).
    #[arg(long = "ref")]
    reference: PathBuf,
    /// Image under test (PGM or text matrix).
    #[arg(long)]
    test: PathBuf,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Directory of clean `.pgm` images.
    #[arg(long)]
    images: PathBuf,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Method::Notch, Method::SpectralMedian])]
    methods: Vec<Method>,
    /// Record wall-clock runtimes (makes the CSV differ between runs).
    #[arg(long)]
    timing: bool,
    #[command(flatten)]
    params: MethodArgs,
}

#[derive(Debug, Args)]
struct GenCorpusArgs {
    /// Output directory (created if missing).
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 256)]
    size: usize,
}

fn format_of(ascii: bool) -> PgmFormat {
    if ascii {
        PgmFormat::Ascii
    } else {
        PgmFormat::Binary
    }
}

fn add_noise(a: &AddNoiseArgs) -> Result<()> {
    let img = load_image(&a.input)?;
    let noisy = if let Some(path) = &a.noise_spec {
        synthesize_moire(&img, &MoireSpec::from_csv(&read_text(path)?)?)?
    } else if let Some(sigma) = a.gaussian {
        add_gaussian(&img, sigma, a.seed)?
    } else if let Some(density) = a.salt_pepper {
        add_salt_pepper(&img, density, a.seed)?
    } else {
        unreachable!("clap requires one noise source")
    };
    save_pgm(&a.out, &noisy, format_of(a.ascii))?;
    if let Some(path) = &a.out_float {
        save_matrix(path, &noisy)?;
    }
    Ok(())
}

fn denoise(a: &DenoiseArgs) -> Result<()> {
    let img = load_image(&a.input)?;
    if let Some(path) = &a.dump_spectrum {
        let spectrum = center_shift(&dft2d(&img));
        save_pgm(path, &log_magnitude(&spectrum), PgmFormat::Binary)?;
    }
    let (out, peaks) = apply(a.method, &img, &a.params.config())?;
    if let (Some(path), Some(peaks)) = (&a.dump_peaks, peaks) {
        write_text(path, &peaks.to_csv())?;
    }
    save_pgm(&a.out, &out, format_of(a.ascii))?;
    if let Some(path) = &a.out_float {
        save_matrix(path, &out)?;
    }
    Ok(())
}

fn bench(a: &BenchArgs, stdout: &mut dyn Write) -> Result<()> {
    let images = load_image_dir(&a.images)?;
    let opts = BenchOptions {
        methods: a.methods.clone(),
        config: a.params.config(),
        timing: a.timing,
    };
    let rows = run_bench(&images, &opts)?;
    write_text(&a.out, &to_csv(&rows))?;
    for s in summarize(&rows) {
        let _ = writeln!(
            stdout,
            "{:<16} mean_psnr_noisy={} mean_psnr_denoised={}",
            s.method, s.mean_psnr_noisy, s.mean_psnr_denoised
        );
    }
    Ok(())
}

fn gen_corpus(a: &GenCorpusArgs) -> Result<()> {
    std::fs::create_dir_all(&a.out).map_err(|e| Error::io(&a.out, e))?;
    for (name, img) in standard_corpus(a.size)? {
        save_pgm(&a.out.join(format!("{name}.pgm")), &img, PgmFormat::Binary)?;
    }
    Ok(())
}

fn usage_error(stderr: &mut dyn Write, msg: &str) -> i32 {
    let _ = writeln!(stderr, "error: {msg}");
    EXIT_USAGE
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = write!(sink, "{text}");
            return code;
        }
    };
    let result = match &cli.command {
        Command::AddNoise(a) => add_noise(a),
        Command::Denoise(a) => {
            if a.dump_peaks.is_some() && !a.method.is_spectral() {
                return usage_error(
                    stderr,
                    &format!("--dump-peaks requires a spectral method, not {}", a.method),
                );
            }
            denoise(a)
        }
        Command::Psnr(a) => load_image(&a.reference)
            .and_then(|r| Ok((r, load_image(&a.test)?)))
            .and_then(|(r, t)| psnr(&r, &t))
            .map(|q| {
                let _ = writeln!(stdout, "psnr_db={}", q.psnr_db);
            }),
        Command::Bench(a) => bench(a, stdout),
        Command::GenCorpus(a) => gen_corpus(a),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_FAILURE
        }
    }
}

/// Convenience used by `main`: real process arguments and standard streams.
pub fn main_exit_code() -> i32 {
    run(
        std::env::args_os(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}
