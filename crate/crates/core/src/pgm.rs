//! Netpbm grayscale (PGM) reading and writing, P2 (ASCII) and P5 (binary).
//!
//! Input maxval may be anything in `1..=255`; samples are rescaled to the
//! `0..255` range. Output always uses maxval 255 and the canonical header
//! `P5\n<w> <h>\n255\n` (or the `P2` equivalent).

use crate::error::{PgmError, Result};
use crate::image::GrayImage;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgmFormat {
    Ascii,
    Binary,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_whitespace_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                b if b.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    /// Reads an unsigned decimal token; `None` at end of input.
    fn read_uint(&mut self, what: &str) -> std::result::Result<Option<u64>, PgmError> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            if self.pos >= self.bytes.len() {
                return Ok(None);
            }
            return Err(PgmError::MalformedHeader(format!(
                "expected {what}, found byte 0x{:02x}",
                self.bytes[self.pos]
            )));
        }
        if self.pos < self.bytes.len()
            && !self.bytes[self.pos].is_ascii_whitespace()
            && self.bytes[self.pos] != b'#'
        {
            return Err(PgmError::MalformedHeader(format!(
                "unexpected byte 0x{:02x} after {what}",
                self.bytes[self.pos]
            )));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        text.parse::<u64>()
            .map(Some)
            .map_err(|_| PgmError::MalformedHeader(format!("{what} out of range: {text}")))
    }

    fn header_uint(&mut self, what: &str) -> std::result::Result<u64, PgmError> {
        self.read_uint(what)?
            .ok_or_else(|| PgmError::MalformedHeader(format!("missing {what}")))
    }
}

/// Decodes a P2 or P5 file.
pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage> {
    if bytes.len() < 2 {
        return Err(PgmError::BadMagic(String::from_utf8_lossy(bytes).into_owned()).into());
    }
    let format = match &bytes[..2] {
        b"P2" => PgmFormat::Ascii,
        b"P5" => PgmFormat::Binary,
        other => {
            return Err(PgmError::BadMagic(String::from_utf8_lossy(other).into_owned()).into())
        }
    };
    let mut cur = Cursor { bytes, pos: 2 };
    if cur.pos < bytes.len() && !bytes[cur.pos].is_ascii_whitespace() && bytes[cur.pos] != b'#' {
        return Err(PgmError::BadMagic(String::from_utf8_lossy(&bytes[..3]).into_owned()).into());
    }
    let width = cur.header_uint("width")?;
    let height = cur.header_uint("height")?;
    if width == 0 || height == 0 {
        return Err(PgmError::NonPositiveDimensions { width, height }.into());
    }
    let maxval = cur.header_uint("maxval")?;
    if maxval == 0 {
        return Err(PgmError::MalformedHeader("maxval must be positive".into()).into());
    }
    if maxval > 255 {
        return Err(PgmError::UnsupportedMaxval(maxval.min(u32::MAX as u64) as u32).into());
    }
    let maxval = maxval as u32;
    let count = (width as usize)
        .checked_mul(height as usize)
        .ok_or_else(|| PgmError::MalformedHeader("dimensions overflow".into()))?;

    let scale = 255.0 / maxval as f64;
    let mut data = Vec::with_capacity(count);
    match format {
        PgmFormat::Binary => {
            // Exactly one whitespace byte separates the header from the raster.
            if cur.pos >= bytes.len() {
                return Err(PgmError::Truncated {
                    expected: count,
                    found: 0,
                }
                .into());
            }
            let raster = &bytes[cur.pos + 1..];
            if raster.len() < count {
                return Err(PgmError::Truncated {
                    expected: count,
                    found: raster.len(),
                }
                .into());
            }
            for &b in &raster[..count] {
                let value = b as u32;
                if value > maxval {
                    return Err(PgmError::SampleOutOfRange { value, maxval }.into());
                }
                data.push(value as f64 * scale);
            }
        }
        PgmFormat::Ascii => {
            for found in 0..count {
                let value = cur.read_uint("sample").map_err(|e| match e {
                    PgmError::MalformedHeader(msg) => {
                        PgmError::MalformedHeader(format!("raster: {msg}"))
                    }
                    other => other,
                })?;
                let Some(value) = value else {
                    return Err(PgmError::Truncated {
                        expected: count,
                        found,
                    }
                    .into());
                };
                if value > maxval as u64 {
                    return Err(PgmError::SampleOutOfRange {
                        value: value.min(u32::MAX as u64) as u32,
                        maxval,
                    }
                    .into());
                }
                data.push(value as f64 * scale);
            }
        }
    }
    GrayImage::new(width as usize, height as usize, data)
}

/// Clamps to `[0, 255]` and rounds half away from zero.
#[inline]
pub fn to_u8(v: f64) -> u8 {
    v.clamp(0.0, 255.0).round() as u8
}

pub fn write_pgm(img: &GrayImage, format: PgmFormat) -> Vec<u8> {
    let (w, h) = (img.width(), img.height());
    match format {
        PgmFormat::Binary => {
            let mut out = format!("P5\n{w} {h}\n255\n").into_bytes();
            out.extend(img.data().iter().map(|&v| to_u8(v)));
            out
        }
        PgmFormat::Ascii => {
            let mut out = format!("P2\n{w} {h}\n255\n");
            for row in img.data().chunks(w) {
                let line: Vec<String> = row.iter().map(|&v| to_u8(v).to_string()).collect();
                out.push_str(&line.join(" "));
                out.push('\n');
            }
            out.into_bytes()
        }
    }
}
