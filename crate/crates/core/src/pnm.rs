//! PGM/PPM reader and PGM writer.
//!
//! Reads P2/P5 grayscale directly and P3/P6 color as a convenience, reducing
//! color to luma with the Rec. 601 weights 0.299/0.587/0.114. The declared
//! maxval becomes the image peak; sample values are kept as-is (a maxval-100
//! file yields intensities in [0, 100], not rescaled to [0, 255]).
//!
//! Writing clamps intensities to [0, peak] and rounds half away from zero,
//! emitting maxval = round(peak) and two-byte big-endian samples when that
//! exceeds 255. Parse errors carry the byte offset where the problem was
//! detected. The reader never allocates more than a small multiple of the
//! input size, so it is safe to run on untrusted bytes.

use std::path::Path;

use crate::error::{PnmError, Result};
use crate::image::Image;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PnmMode {
    Ascii,
    Binary,
}

fn is_pnm_space(b: u8) -> bool {
    matches!(b, b' ' | b'\t' | b'\n' | b'\r' | 0x0b | 0x0c)
}

struct Scanner<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Scanner { bytes, pos: 0 }
    }

    /// Skips whitespace and `#` comments (comment runs to end of line).
    fn skip_space_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            let b = self.bytes[self.pos];
            if is_pnm_space(b) {
                self.pos += 1;
            } else if b == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    /// Next whitespace-delimited token and the offset it starts at.
    fn next_token(&mut self) -> Option<(usize, &'a [u8])> {
        self.skip_space_and_comments();
        if self.pos >= self.bytes.len() {
            return None;
        }
        let start = self.pos;
        while self.pos < self.bytes.len()
            && !is_pnm_space(self.bytes[self.pos])
            && self.bytes[self.pos] != b'#'
        {
            self.pos += 1;
        }
        Some((start, &self.bytes[start..self.pos]))
    }

    fn next_uint(&mut self, what: &str) -> std::result::Result<(usize, u64), PnmError> {
        let (offset, tok) = self.next_token().ok_or_else(|| PnmError::BadHeader {
            offset: self.pos,
            reason: format!("unexpected end of file while reading {what}"),
        })?;
        if tok.is_empty() || !tok.iter().all(u8::is_ascii_digit) {
            return Err(PnmError::BadHeader {
                offset,
                reason: format!("{what} is not an unsigned integer: {:?}", display_token(tok)),
            });
        }
        let mut value: u64 = 0;
        for &d in tok {
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(u64::from(d - b'0')))
                .ok_or(PnmError::BadHeader {
                    offset,
                    reason: format!("{what} overflows 64 bits"),
                })?;
        }
        Ok((offset, value))
    }
}

fn display_token(tok: &[u8]) -> String {
    let s: String = String::from_utf8_lossy(tok).chars().take(12).collect();
    s
}

/// Parses a PGM (P2/P5) or PPM (P3/P6) file. PPM input is converted to
/// grayscale luma.
pub fn read_pnm(bytes: &[u8]) -> std::result::Result<Image, PnmError> {
    let mut sc = Scanner::new(bytes);
    let (_, magic) = sc.next_token().ok_or(PnmError::BadMagic(String::new()))?;
    let (ascii, channels) = match magic {
        b"P2" => (true, 1),
        b"P3" => (true, 3),
        b"P5" => (false, 1),
        b"P6" => (false, 3),
        _ => return Err(PnmError::BadMagic(display_token(magic))),
    };

    let (_, width) = sc.next_uint("width")?;
    let (_, height) = sc.next_uint("height")?;
    let (_, maxval) = sc.next_uint("maxval")?;
    if maxval == 0 || maxval > 65535 {
        return Err(PnmError::BadMaxval(maxval));
    }
    if width == 0 || height == 0 {
        return Err(PnmError::BadSize { width, height });
    }
    let n_pixels = width
        .checked_mul(height)
        .filter(|&n| n <= usize::MAX as u64 / 16)
        .ok_or(PnmError::BadSize { width, height })? as usize;
    let n_samples = n_pixels as u64 * channels as u64;

    let mut samples: Vec<f64>;
    if ascii {
        // No up-front allocation from header dims: token count bounds growth.
        samples = Vec::new();
        while (samples.len() as u64) < n_samples {
            let (offset, tok) = match sc.next_token() {
                Some(t) => t,
                None => {
                    return Err(PnmError::Truncated {
                        expected: n_samples,
                        found: samples.len() as u64,
                    })
                }
            };
            if tok.is_empty() || !tok.iter().all(u8::is_ascii_digit) {
                return Err(PnmError::BadSample {
                    offset,
                    reason: format!("not an unsigned integer: {:?}", display_token(tok)),
                });
            }
            let mut value: u64 = 0;
            for &d in tok {
                value = value
                    .checked_mul(10)
                    .and_then(|v| v.checked_add(u64::from(d - b'0')))
                    .ok_or(PnmError::BadSample {
                        offset,
                        reason: "sample overflows 64 bits".to_string(),
                    })?;
            }
            if value > maxval {
                return Err(PnmError::SampleRange {
                    value,
                    maxval: maxval as u32,
                });
            }
            samples.push(value as f64);
        }
    } else {
        // Exactly one whitespace byte separates the maxval token from data.
        if sc.pos >= bytes.len() || !is_pnm_space(bytes[sc.pos]) {
            return Err(PnmError::BadHeader {
                offset: sc.pos,
                reason: "binary data must follow maxval after a single whitespace byte".to_string(),
            });
        }
        sc.pos += 1;
        let bytes_per = if maxval > 255 { 2 } else { 1 };
        let need = n_samples * bytes_per as u64;
        let avail = (bytes.len() - sc.pos) as u64;
        if avail < need {
            return Err(PnmError::Truncated {
                expected: n_samples,
                found: avail / bytes_per as u64,
            });
        }
        samples = Vec::with_capacity(n_samples as usize);
        let data = &bytes[sc.pos..];
        for i in 0..n_samples as usize {
            let value = if bytes_per == 1 {
                u64::from(data[i])
            } else {
                u64::from(u16::from_be_bytes([data[2 * i], data[2 * i + 1]]))
            };
            if value > maxval {
                return Err(PnmError::SampleRange {
                    value,
                    maxval: maxval as u32,
                });
            }
            samples.push(value as f64);
        }
    }

    let pixels = if channels == 1 {
        samples
    } else {
        samples
            .chunks_exact(3)
            .map(|rgb| 0.299 * rgb[0] + 0.587 * rgb[1] + 0.114 * rgb[2])
            .collect()
    };
    Image::new(width as usize, height as usize, pixels, maxval as f64).map_err(|_| {
        PnmError::BadSize { width, height }
    })
}

/// Encodes a grayscale image as PGM. Values are clamped to [0, peak] and
/// rounded half away from zero; maxval is round(peak), capped below at 1.
pub fn write_pnm(img: &Image, mode: PnmMode) -> std::result::Result<Vec<u8>, PnmError> {
    let maxval_f = img.peak().round();
    if maxval_f > 65535.0 {
        return Err(PnmError::PeakTooLarge(img.peak()));
    }
    let maxval = (maxval_f as u32).max(1);
    let quant = |v: f64| v.clamp(0.0, img.peak()).round() as u32;

    let mut out = Vec::new();
    match mode {
        PnmMode::Ascii => {
            out.extend_from_slice(
                format!("P2\n{} {}\n{}\n", img.width(), img.height(), maxval).as_bytes(),
            );
            for (i, &v) in img.data().iter().enumerate() {
                let sep = if i == 0 {
                    ""
                } else if i % 11 == 0 {
                    "\n"
                } else {
                    " "
                };
                out.extend_from_slice(sep.as_bytes());
                out.extend_from_slice(quant(v).to_string().as_bytes());
            }
            out.push(b'\n');
        }
        PnmMode::Binary => {
            out.extend_from_slice(
                format!("P5\n{} {}\n{}\n", img.width(), img.height(), maxval).as_bytes(),
            );
            if maxval > 255 {
                for &v in img.data() {
                    out.extend_from_slice(&(quant(v) as u16).to_be_bytes());
                }
            } else {
                out.extend(img.data().iter().map(|&v| quant(v) as u8));
            }
        }
    }
    Ok(out)
}

pub fn read_pnm_path(path: &Path) -> Result<Image> {
    let bytes = std::fs::read(path)?;
    Ok(read_pnm(&bytes)?)
}

pub fn write_pnm_path(img: &Image, mode: PnmMode, path: &Path) -> Result<()> {
    let bytes = write_pnm(img, mode)?;
    std::fs::write(path, bytes)?;
    Ok(())
}
