//! File helpers: PGM files and full-precision text matrices.
//!
//! A text matrix starts with a `width height` line followed by one line per
//! row of whitespace-separated decimal values. Values are written with the
//! shortest representation that round-trips exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::pgm::{read_pgm, write_pgm, PgmFormat};

pub fn matrix_to_string(img: &GrayImage) -> String {
    let mut out = format!("{} {}\n", img.width(), img.height());
    for row in img.data().chunks(img.width()) {
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{v:?}");
        }
        out.push('\n');
    }
    out
}

pub fn matrix_from_str(text: &str) -> Result<GrayImage> {
    let mut tokens = text
        .lines()
        .enumerate()
        .flat_map(|(i, line)| line.split_whitespace().map(move |t| (i + 1, t)));
    let mut dim = |what: &str| -> Result<usize> {
        let (line, tok) = tokens.next().ok_or_else(|| Error::Parse {
            line: 1,
            msg: format!("missing matrix {what}"),
        })?;
        tok.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("bad matrix {what} {tok:?}"),
        })
    };
    let width = dim("width")?;
    let height = dim("height")?;
    let data = tokens
        .map(|(line, tok)| {
            tok.parse::<f64>().map_err(|_| Error::Parse {
                line,
                msg: format!("bad sample {tok:?}"),
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    GrayImage::new(width, height, data)
}

/// Loads a PGM (P2/P5) or, failing the magic check, a text matrix.
pub fn load_image(path: &Path) -> Result<GrayImage> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    if bytes.starts_with(b"P2") || bytes.starts_with(b"P5") {
        return read_pgm(&bytes);
    }
    match std::str::from_utf8(&bytes) {
        Ok(text) if text.trim_start().starts_with(|c: char| c.is_ascii_digit()) => {
            matrix_from_str(text)
        }
        _ => read_pgm(&bytes),
    }
}

pub fn save_pgm(path: &Path, img: &GrayImage, format: PgmFormat) -> Result<()> {
    fs::write(path, write_pgm(img, format)).map_err(|e| Error::io(path, e))
}

pub fn save_matrix(path: &Path, img: &GrayImage) -> Result<()> {
    write_text(path, &matrix_to_string(img))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}
