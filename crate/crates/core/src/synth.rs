//! Deterministic, license-free synthetic test images.
//!
//! Standard photographic test images carry licensing baggage, so CI and the
//! bundled fixtures use these generated scenes instead. [`test_scene`]
//! mixes smooth shading, soft-edged shapes, blobs at several scales, a
//! mid-frequency texture patch, and a radial chirp, giving it the band
//! structure a reconstruction benchmark needs: content below, near, and
//! above the Nyquist limit of a 2x-decimated acquisition.

use crate::image::Image;
use crate::rng::Pcg32;

fn smoothstep(e0: f64, e1: f64, x: f64) -> f64 {
    let t = ((x - e0) / (e1 - e0)).clamp(0.0, 1.0);
    t * t * (3.0 - 2.0 * t)
}

fn dist(x: f64, y: f64, cx: f64, cy: f64) -> f64 {
    ((x - cx) * (x - cx) + (y - cy) * (y - cy)).sqrt()
}

/// Diagonal ramp from 0 to peak.
pub fn gradient(width: usize, height: usize, peak: f64) -> Image {
    let span = (width + height - 2).max(1) as f64;
    Image::from_fn(width, height, peak, |r, c| (r + c) as f64 / span * peak)
        .expect("valid geometry")
}

/// Square checkerboard with the given cell size in pixels.
pub fn checkerboard(width: usize, height: usize, cell: usize, peak: f64) -> Image {
    let cell = cell.max(1);
    Image::from_fn(width, height, peak, |r, c| {
        if (r / cell + c / cell).is_multiple_of(2) {
            peak
        } else {
            0.0
        }
    })
    .expect("valid geometry")
}

/// A fixed field of Gaussian blobs on a mid-gray background.
pub fn gaussian_blobs(width: usize, height: usize, peak: f64) -> Image {
    let s = width.min(height) as f64;
    let blobs: [(f64, f64, f64, f64); 5] = [
        (0.25, 0.3, 0.08, 0.45),
        (0.7, 0.25, 0.05, -0.35),
        (0.5, 0.6, 0.12, 0.3),
        (0.8, 0.75, 0.04, 0.5),
        (0.2, 0.78, 0.06, -0.4),
    ];
    Image::from_fn(width, height, peak, |r, c| {
        let x = c as f64 / s;
        let y = r as f64 / s;
        let mut v = 0.5;
        for (cx, cy, sigma, amp) in blobs {
            let d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
            v += amp * (-d2 / (2.0 * sigma * sigma)).exp();
        }
        v.clamp(0.0, 1.0) * peak
    })
    .expect("valid geometry")
}

/// Uniform noise in [0, peak], seeded; handy for oracle tests.
pub fn random_uniform(width: usize, height: usize, peak: f64, seed: u64) -> Image {
    let mut rng = Pcg32::new(seed, 1);
    Image::from_fn(width, height, peak, |_, _| rng.next_unit_open() * peak)
        .expect("valid geometry")
}

/// The benchmark scene (peak 255): a natural-image stand-in with smooth
/// shading, edges at several orientations, point-like blobs, texture near
/// the 2x-decimation Nyquist band, and a radial chirp sweeping through it.
/// Output intensities are normalized into [6, 249] so that file
/// quantization never clips.
pub fn test_scene(width: usize, height: usize) -> Image {
    let s = width.min(height) as f64;
    let edge = 1.3 / s;
    let mut data = Vec::with_capacity(width * height);
    for r in 0..height {
        for c in 0..width {
            let x = c as f64 / s;
            let y = r as f64 / s;

            // Smooth illumination-like background.
            let mut v = 105.0
                + 48.0 * (x * 5.3).sin() * (y * 4.1).cos()
                + 22.0 * ((x + 1.7 * y) * 3.3).sin();

            // Soft-edged disks: one bright, one dark.
            v += 72.0 * (1.0 - smoothstep(0.17 - edge, 0.17 + edge, dist(x, y, 0.32, 0.3)));
            v -= 56.0 * (1.0 - smoothstep(0.085 - edge, 0.085 + edge, dist(x, y, 0.74, 0.22)));

            // Rotated bar.
            let (sin_t, cos_t) = (0.55f64.sin(), 0.55f64.cos());
            let u = (x - 0.45) * cos_t + (y - 0.66) * sin_t;
            let t = -(x - 0.45) * sin_t + (y - 0.66) * cos_t;
            v += 58.0
                * (1.0 - smoothstep(0.035 - edge, 0.035 + edge, t.abs()))
                * (1.0 - smoothstep(0.26 - edge, 0.26 + edge, u.abs()));

            // Blobs at several scales.
            v += 42.0 * (-dist(x, y, 0.14, 0.82).powi(2) / (2.0 * 0.045 * 0.045)).exp();
            v += 36.0 * (-dist(x, y, 0.56, 0.78).powi(2) / (2.0 * 0.016 * 0.016)).exp();
            v -= 30.0 * (-dist(x, y, 0.87, 0.55).powi(2) / (2.0 * 0.028 * 0.028)).exp();

            // Texture patch near the 2x Nyquist band.
            let dt = dist(x, y, 0.8, 0.84);
            let win = 1.0 - smoothstep(0.12, 0.18, dt);
            v += 34.0 * win * (x * s * 1.15).sin() * (y * s * 0.95).cos();

            // Radial chirp: instantaneous frequency grows toward the rim.
            let dz = dist(x, y, 0.2, 0.52);
            let winz = 1.0 - smoothstep(0.12, 0.18, dz);
            v += 30.0 * winz * (0.03 * (dz * s) * (dz * s)).cos();

            data.push(v);
        }
    }

    let lo = data.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = data.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let scale = 243.0 / (hi - lo);
    for v in &mut data {
        *v = 6.0 + (*v - lo) * scale;
    }
    Image::new(width, height, data, 255.0).expect("valid geometry")
}

/// `test_scene` overlaid with full-field multi-orientation sinusoidal
/// texture (components on both sides of the 2x-decimation Nyquist band)
/// plus correlated speckle. The busier benchmark content: fine detail
/// everywhere, the way photographs rather than drawings behave under
/// resolution enhancement. Same [6, 249] normalization as `test_scene`.
pub fn textured_scene(width: usize, height: usize) -> Image {
    let base = test_scene(width, height);

    // Correlated speckle: zero-mean uniform grain smoothed by two passes
    // of a 3-tap box filter.
    let mut rng = Pcg32::new(2024, 1);
    let mut speckle = Image::from_fn(width, height, 255.0, |_, _| rng.next_unit_open() - 0.5)
        .expect("valid geometry");
    let box3 = [1.0 / 3.0; 3];
    speckle = crate::degrade::convolve_separable(&speckle, &box3);
    speckle = crate::degrade::convolve_separable(&speckle, &box3);

    let mut data = Vec::with_capacity(width * height);
    for r in 0..height {
        for c in 0..width {
            let x = c as f64;
            let y = r as f64;
            let tex = 8.0
                * ((0.9 * x + 0.5 * y).sin() * (1.1 * y - 0.3 * x).cos()
                    + 0.7 * (1.7 * x - 0.8 * y).sin() * (1.9 * y + 0.4 * x).cos());
            data.push(base.get(r, c) + tex + 12.0 * speckle.get(r, c));
        }
    }

    let lo = data.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = data.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let scale = 243.0 / (hi - lo);
    for v in &mut data {
        *v = 6.0 + (*v - lo) * scale;
    }
    Image::new(width, height, data, 255.0).expect("valid geometry")
}
