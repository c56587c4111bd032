use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use moire_core::io::{load_image, matrix_from_str};
use moire_core::synth::{gradient, shapes};
use moire_core::{read_pgm, write_pgm, GrayImage, PgmFormat};

fn moire(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_moire"))
        .args(args)
        .output()
        .unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn save(dir: &Path, name: &str, img: &GrayImage) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, write_pgm(img, PgmFormat::Binary)).unwrap();
    path
}

#[test]
fn help_exits_zero() {
    let out = moire(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("denoise"));
    assert_eq!(moire(&[]).status.code(), Some(2));
}

#[test]
fn add_noise_is_deterministic_and_valid() {
    let dir = tempfile::tempdir().unwrap();
    let clean = save(dir.path(), "clean.pgm", &shapes(32).unwrap());
    let spec = dir.path().join("spec.csv");
    fs::write(&spec, "amplitude,freq_u,freq_v,phase\n20,0.25,0.1875,0\n").unwrap();
    for (i, flags) in [
        vec!["--noise-spec", s(&spec)],
        vec!["--gaussian", "10", "--seed", "7"],
        vec!["--salt-pepper", "0.1", "--seed", "7"],
    ]
    .into_iter()
    .enumerate()
    {
        let outs: Vec<Vec<u8>> = (0..2)
            .map(|run| {
                let out = dir.path().join(format!("n{i}_{run}.pgm"));
                let mut args = vec!["add-noise", "--in", s(&clean), "--out", s(&out)];
                args.extend(&flags);
                assert_eq!(moire(&args).status.code(), Some(0), "{flags:?}");
                fs::read(out).unwrap()
            })
            .collect();
        assert_eq!(outs[0], outs[1], "{flags:?}");
        read_pgm(&outs[0]).unwrap();
    }
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "20,0.9,0,0\n").unwrap();
    let out = moire(&[
        "add-noise",
        "--in",
        s(&clean),
        "--out",
        s(&dir.path().join("x.pgm")),
        "--noise-spec",
        s(&bad),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Nyquist"));
}

#[test]
fn spectral_median_dumps_synthesized_peaks() {
    let dir = tempfile::tempdir().unwrap();
    let clean = save(dir.path(), "clean.pgm", &gradient(64).unwrap());
    let spec = dir.path().join("spec.csv");
    // 10 cycles down, 6 across on a 64x64 image
    fs::write(&spec, "20,0.15625,0.09375,0\n").unwrap();
    let noisy = dir.path().join("noisy.pgm");
    let float = dir.path().join("noisy.txt");
    let out = moire(&[
        "add-noise",
        "--in",
        s(&clean),
        "--out",
        s(&noisy),
        "--noise-spec",
        s(&spec),
        "--out-float",
        s(&float),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let peaks = dir.path().join("peaks.csv");
    let spectrum = dir.path().join("spectrum.pgm");
    let out = moire(&[
        "denoise",
        "--in",
        s(&float),
        "--out",
        s(&dir.path().join("d.pgm")),
        "--method",
        "spectral-median",
        "--dump-peaks",
        s(&peaks),
        "--dump-spectrum",
        s(&spectrum),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(peaks).unwrap();
    let coords: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.rsplit_once(',').unwrap().0)
        .collect();
    assert_eq!(text.lines().next(), Some("u,v,magnitude"));
    assert_eq!(coords, ["22,26", "42,38"]);
    let dump = load_image(&spectrum).unwrap();
    assert_eq!((dump.width(), dump.height()), (64, 64));

    let out = moire(&[
        "denoise",
        "--in",
        s(&float),
        "--out",
        s(&dir.path().join("d.pgm")),
        "--method",
        "tv",
        "--dump-peaks",
        s(&dir.path().join("p.csv")),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn notch_on_clean_image_is_identity() {
    let dir = tempfile::tempdir().unwrap();
    let img = shapes(48).unwrap();
    let input = dir.path().join("clean.txt");
    fs::write(&input, moire_core::io::matrix_to_string(&img)).unwrap();
    let float = dir.path().join("out.txt");
    let out = moire(&[
        "denoise",
        "--in",
        s(&input),
        "--out",
        s(&dir.path().join("o.pgm")),
        "--method",
        "notch",
        "--out-float",
        s(&float),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let result = matrix_from_str(&fs::read_to_string(float).unwrap()).unwrap();
    for (a, b) in img.data().iter().zip(result.data()) {
        assert!((a - b).abs() < 1e-9);
    }
}

#[test]
fn every_method_runs_from_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let clean = save(dir.path(), "clean.pgm", &shapes(24).unwrap());
    for m in [
        "spectral-median",
        "notch",
        "median",
        "mode",
        "bilateral",
        "diffusion",
        "tv",
        "nlm",
    ] {
        let out_path = dir.path().join(format!("{m}.pgm"));
        let out = moire(&[
            "denoise",
            "--in",
            s(&clean),
            "--out",
            s(&out_path),
            "--method",
            m,
            "--ascii",
            "--search-radius",
            "4",
        ]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{m}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(fs::read(&out_path).unwrap().starts_with(b"P2\n"));
    }
    let out = moire(&[
        "denoise",
        "--in",
        s(&clean),
        "--out",
        s(&dir.path().join("x.pgm")),
        "--method",
        "median",
        "--median-window",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bench_counts_rows() {
    let dir = tempfile::tempdir().unwrap();
    let images = dir.path().join("images");
    fs::create_dir(&images).unwrap();
    save(&images, "one.pgm", &shapes(64).unwrap());
    save(&images, "two.pgm", &gradient(64).unwrap());
    fs::write(images.join("notes.txt"), "ignored").unwrap();
    let csv = dir.path().join("bench.csv");
    let out = moire(&["bench", "--images", s(&images), "--out", s(&csv)]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "image,noise,method,psnr_noisy,psnr_denoised,runtime_ms"
    );
    assert_eq!(
        lines.iter().filter(|l| l.starts_with("summary,")).count(),
        2
    );
    assert_eq!(lines.len(), 1 + 24 + 2);
    assert!(lines[1].starts_with("one,m1,notch,"));

    let out = moire(&[
        "bench",
        "--images",
        s(&images),
        "--out",
        s(&csv),
        "--methods",
        "median,tv",
        "--timing",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.contains(",median,") && text.contains(",tv,") && !text.contains(",notch,"));
}
