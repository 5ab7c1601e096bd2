//! Planar grayscale image with a declared peak intensity.
//!
//! Intensities are stored as `f64` even though files are integer-valued:
//! the back-projection solver accumulates fractional corrections that
//! integer storage would destroy. Clamping and rounding happen only when an
//! image is written to a file (or explicitly via [`Image::quantized`]).

use crate::error::{Error, Result};

/// Immutable row-major grayscale image. `peak` is the maximum representable
/// intensity (255 for 8-bit sources), not the observed maximum; pixel values
/// may lie outside [0, peak] for intermediate results such as differences.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    peak: f64,
    data: Vec<f64>,
}

impl Image {
    /// Builds an image, validating geometry, peak, and finiteness.
    pub fn new(width: usize, height: usize, data: Vec<f64>, peak: f64) -> Result<Self> {
        if width == 0 || height == 0 || data.len() != width * height {
            return Err(Error::InvalidGeometry {
                width,
                height,
                data_len: data.len(),
            });
        }
        if !(peak.is_finite() && peak > 0.0) {
            return Err(Error::InvalidPeak(peak));
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteIntensity {
                row: i / width,
                col: i % width,
            });
        }
        Ok(Image {
            width,
            height,
            peak,
            data,
        })
    }

    /// Internal constructor for values computed from already-validated
    /// images; skips the O(n) finiteness scan on hot paths.
    pub(crate) fn from_parts(width: usize, height: usize, data: Vec<f64>, peak: f64) -> Self {
        debug_assert!(width >= 1 && height >= 1 && data.len() == width * height);
        debug_assert!(peak.is_finite() && peak > 0.0);
        Image {
            width,
            height,
            peak,
            data,
        }
    }

    pub fn constant(width: usize, height: usize, value: f64, peak: f64) -> Result<Self> {
        Image::new(width, height, vec![value; width * height], peak)
    }

    /// Builds an image by evaluating `f(row, col)` at every pixel.
    pub fn from_fn(
        width: usize,
        height: usize,
        peak: f64,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height);
        for r in 0..height {
            for c in 0..width {
                data.push(f(r, c));
            }
        }
        Image::new(width, height, data, peak)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// (width, height)
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn peak(&self) -> f64 {
        self.peak
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Panics when out of bounds.
    pub fn get(&self, row: usize, col: usize) -> f64 {
        assert!(
            row < self.height && col < self.width,
            "pixel ({row}, {col}) out of bounds for {}x{}",
            self.width,
            self.height
        );
        self.data[row * self.width + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.width..(row + 1) * self.width]
    }

    /// Per-pixel `self − other`, unclamped; negative values are legitimate
    /// (error images). Peak is carried over from `self`.
    pub fn diff(&self, other: &Image) -> Result<Image> {
        self.check_same_dims(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Image::from_parts(self.width, self.height, data, self.peak))
    }

    /// Per-pixel transform; keeps dimensions and peak.
    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> Image {
        let data = self.data.iter().map(|&v| f(v)).collect();
        Image::from_parts(self.width, self.height, data, self.peak)
    }

    /// Per-pixel `self + scale·other`.
    pub fn add_scaled(&self, other: &Image, scale: f64) -> Result<Image> {
        self.check_same_dims(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + scale * b)
            .collect();
        Ok(Image::from_parts(self.width, self.height, data, self.peak))
    }

    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }

    /// Clamps to [0, peak] and rounds half away from zero: the integer grid
    /// a PGM write would land on.
    pub fn quantized(&self) -> Image {
        let peak = self.peak;
        self.map(|v| v.clamp(0.0, peak).round())
    }

    pub(crate) fn check_same_dims(&self, other: &Image) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::DimensionMismatch {
                expected_w: self.width,
                expected_h: self.height,
                actual_w: other.width,
                actual_h: other.height,
            });
        }
        Ok(())
    }

    pub(crate) fn check_same_peak(&self, other: &Image) -> Result<()> {
        if self.peak != other.peak {
            return Err(Error::PeakMismatch {
                a: self.peak,
                b: other.peak,
            });
        }
        Ok(())
    }
}
