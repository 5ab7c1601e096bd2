//! Forward imaging model: sub-pixel shift, Gaussian blur, decimation, and
//! additive seeded noise.
//!
//! Each observed low-resolution frame is modeled as
//! `decimate(blur(shift(hr))) + noise`, with the parameters of one
//! acquisition collected in [`DegradationModel`]. The same forward path
//! (minus noise) runs inside the back-projection solver, so synthesis and
//! reconstruction agree by construction.

use crate::error::{Error, Result};
use crate::image::Image;
use crate::interp::translate_bicubic;
use crate::rng::Pcg32;

/// Acquisition parameters for one low-resolution frame.
///
/// `shift` is (dx, dy) in high-resolution pixel units and is applied before
/// blur and decimation; positive values move content right and down.
/// `psf_sigma`/`psf_radius` describe a truncated, renormalized, separable
/// Gaussian blur on the high-resolution grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DegradationModel {
    pub psf_sigma: f64,
    pub psf_radius: usize,
    pub shift: (f64, f64),
    pub decimation: usize,
    pub noise_sigma: f64,
    pub noise_seed: u64,
}

impl Default for DegradationModel {
    fn default() -> Self {
        DegradationModel {
            psf_sigma: 1.0,
            psf_radius: 3,
            shift: (0.0, 0.0),
            decimation: 2,
            noise_sigma: 0.0,
            noise_seed: 0,
        }
    }
}

impl DegradationModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.psf_sigma.is_finite() && self.psf_sigma > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "psf_sigma must be positive, got {}",
                self.psf_sigma
            )));
        }
        check_psf_radius(self.psf_sigma, self.psf_radius)?;
        if self.decimation == 0 {
            return Err(Error::InvalidConfig(
                "decimation factor must be at least 1".to_string(),
            ));
        }
        if !(self.shift.0.is_finite() && self.shift.1.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "shift must be finite, got ({}, {})",
                self.shift.0, self.shift.1
            )));
        }
        if !(self.noise_sigma.is_finite() && self.noise_sigma >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "noise_sigma must be non-negative, got {}",
                self.noise_sigma
            )));
        }
        Ok(())
    }
}

/// An observed LR image paired with the model believed to have produced it.
#[derive(Debug, Clone)]
pub struct LrFrame {
    pub image: Image,
    pub model: DegradationModel,
}

fn check_psf_radius(sigma: f64, radius: usize) -> Result<()> {
    let needed = (3.0 * sigma).ceil() as usize;
    if radius < needed {
        return Err(Error::InvalidConfig(format!(
            "psf_radius {radius} too small for sigma {sigma}; need at least {needed} \
             to capture the Gaussian mass"
        )));
    }
    Ok(())
}

/// Normalized truncated Gaussian taps, length 2·radius + 1.
pub fn gaussian_taps(sigma: f64, radius: usize) -> Vec<f64> {
    let mut taps: Vec<f64> = (-(radius as isize)..=radius as isize)
        .map(|k| (-(k as f64) * (k as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = taps.iter().sum();
    for t in &mut taps {
        *t /= sum;
    }
    taps
}

/// Separable convolution with the normalized truncated Gaussian; edges
/// replicate. Mean intensity is preserved exactly on constant regions and
/// to first order everywhere else.
pub fn blur(img: &Image, sigma: f64, radius: usize) -> Result<Image> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "blur sigma must be positive, got {sigma}"
        )));
    }
    check_psf_radius(sigma, radius)?;
    let taps = gaussian_taps(sigma, radius);
    Ok(convolve_separable(img, &taps))
}

/// Separable convolution with arbitrary odd-length taps, edge replication.
pub(crate) fn convolve_separable(img: &Image, taps: &[f64]) -> Image {
    debug_assert!(taps.len() % 2 == 1);
    let radius = (taps.len() / 2) as isize;
    let (w, h) = (img.width(), img.height());

    let mut mid = vec![0.0; w * h];
    for r in 0..h {
        let src = img.row(r);
        let dst = &mut mid[r * w..(r + 1) * w];
        for (c, d) in dst.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (j, &t) in taps.iter().enumerate() {
                let k = (c as isize + j as isize - radius).clamp(0, w as isize - 1) as usize;
                acc += t * src[k];
            }
            *d = acc;
        }
    }

    let mut out = vec![0.0; w * h];
    for r in 0..h {
        let dst = &mut out[r * w..(r + 1) * w];
        for (j, &t) in taps.iter().enumerate() {
            let k = (r as isize + j as isize - radius).clamp(0, h as isize - 1) as usize;
            let src = &mid[k * w..(k + 1) * w];
            for (d, s) in dst.iter_mut().zip(src) {
                *d += t * s;
            }
        }
    }
    Image::from_parts(w, h, out, img.peak())
}

/// Pure subsampling: output pixel (r, c) = input (r·d, c·d). Anti-aliasing
/// is the blur stage's job.
pub fn decimate(img: &Image, d: usize) -> Result<Image> {
    if d == 0 {
        return Err(Error::InvalidConfig(
            "decimation factor must be at least 1".to_string(),
        ));
    }
    let (w, h) = img.dims();
    if w % d != 0 || h % d != 0 {
        return Err(Error::InvalidConfig(format!(
            "decimation {d} does not divide image dimensions {w}x{h}"
        )));
    }
    if d == 1 {
        return Ok(img.clone());
    }
    let (ow, oh) = (w / d, h / d);
    let mut out = Vec::with_capacity(ow * oh);
    for r in 0..oh {
        let src = img.row(r * d);
        for c in 0..ow {
            out.push(src[c * d]);
        }
    }
    Ok(Image::from_parts(ow, oh, out, img.peak()))
}

/// Adds i.i.d. Gaussian noise of standard deviation `sigma`, seeded; pixel
/// (r, c) in row-major order receives the (r·width + c)-th deviate from a
/// PCG32 stream `Pcg32::new(seed, 1)`.
pub fn add_noise(img: &Image, sigma: f64, seed: u64) -> Image {
    if sigma == 0.0 {
        return img.clone();
    }
    let mut rng = Pcg32::new(seed, 1);
    let data = img
        .data()
        .iter()
        .map(|&v| v + sigma * rng.next_gaussian())
        .collect();
    Image::from_parts(img.width(), img.height(), data, img.peak())
}

/// Runs the full forward model for each entry of `models`:
/// shift (bicubic, scale 1) → blur → decimate → add seeded noise.
/// Deterministic given the seeds.
pub fn generate_lr_set(hr: &Image, models: &[DegradationModel]) -> Result<Vec<LrFrame>> {
    if models.is_empty() {
        return Err(Error::EmptyFrameSet);
    }
    models
        .iter()
        .map(|model| {
            model.validate()?;
            let (w, h) = hr.dims();
            if w % model.decimation != 0 || h % model.decimation != 0 {
                return Err(Error::InvalidConfig(format!(
                    "decimation {} does not divide image dimensions {w}x{h}",
                    model.decimation
                )));
            }
            let shifted = translate_bicubic(hr, model.shift)?;
            let blurred = blur(&shifted, model.psf_sigma, model.psf_radius)?;
            let small = decimate(&blurred, model.decimation)?;
            let image = add_noise(&small, model.noise_sigma, model.noise_seed);
            Ok(LrFrame {
                image,
                model: model.clone(),
            })
        })
        .collect()
}

/// The canonical four-frame acquisition: quarter-grid shifts covering the
/// sub-pixel phases that make 2x super-resolution well-posed.
pub fn quarter_shift_models(base: &DegradationModel) -> Vec<DegradationModel> {
    [(0.0, 0.0), (0.5, 0.0), (0.0, 0.5), (0.5, 0.5)]
        .iter()
        .enumerate()
        .map(|(k, &shift)| DegradationModel {
            shift,
            noise_seed: base.noise_seed.wrapping_add(k as u64),
            ..base.clone()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_taps_normalized_and_symmetric() {
        for (sigma, radius) in [(1.0, 3), (0.5, 2), (2.0, 6)] {
            let taps = gaussian_taps(sigma, radius);
            assert_eq!(taps.len(), 2 * radius + 1);
            assert!((taps.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            for k in 0..radius {
                assert_eq!(taps[k], taps[2 * radius - k]);
            }
            assert!(taps.iter().all(|&t| t > 0.0));
        }
    }

    #[test]
    fn blur_preserves_constants() {
        let img = Image::constant(9, 5, 77.25, 255.0).unwrap();
        let out = blur(&img, 1.0, 3).unwrap();
        for &v in out.data() {
            assert!((v - 77.25).abs() < 1e-12);
        }
    }

    #[test]
    fn blur_rejects_small_radius() {
        let img = Image::constant(4, 4, 0.0, 255.0).unwrap();
        assert!(blur(&img, 1.0, 2).is_err());
        assert!(blur(&img, 1.5, 5).is_ok());
        assert!(blur(&img, 1.5, 4).is_err());
    }

    #[test]
    fn impulse_response_is_the_normalized_gaussian() {
        let mut data = vec![0.0; 81];
        data[4 * 9 + 4] = 1.0;
        let img = Image::new(9, 9, data, 255.0).unwrap();
        let out = blur(&img, 1.0, 3).unwrap();
        let taps = gaussian_taps(1.0, 3);
        for dr in -3isize..=3 {
            for dc in -3isize..=3 {
                let expect = taps[(dr + 3) as usize] * taps[(dc + 3) as usize];
                let got = out.get((4 + dr) as usize, (4 + dc) as usize);
                assert!((got - expect).abs() < 1e-12, "({dr},{dc})");
            }
        }
        assert!((out.get(4, 4) - taps[3] * taps[3]).abs() < 1e-12);
    }

    #[test]
    fn blur_semigroup_roughly_holds() {
        let img = Image::from_fn(32, 32, 255.0, |r, c| {
            128.0 + 90.0 * ((r as f64) * 0.3).sin() * ((c as f64) * 0.2).cos()
        })
        .unwrap();
        let twice = blur(&blur(&img, 1.0, 3).unwrap(), 1.0, 3).unwrap();
        let once = blur(&img, std::f64::consts::SQRT_2, 5).unwrap();
        for r in 6..26 {
            for c in 6..26 {
                assert!((twice.get(r, c) - once.get(r, c)).abs() < 0.5, "({r},{c})");
            }
        }
    }

    #[test]
    fn decimate_subsamples_top_left_lattice() {
        let img = Image::from_fn(4, 4, 255.0, |r, c| (10 * r + c) as f64).unwrap();
        let out = decimate(&img, 2).unwrap();
        assert_eq!(out.dims(), (2, 2));
        assert_eq!(out.data(), &[0.0, 2.0, 20.0, 22.0]);
    }

    #[test]
    fn decimate_identity_and_errors() {
        let img = Image::from_fn(6, 4, 255.0, |r, c| (r + c) as f64).unwrap();
        assert_eq!(decimate(&img, 1).unwrap(), img);
        assert!(decimate(&img, 4).is_err());
        assert!(decimate(&img, 0).is_err());
    }

    #[test]
    fn decimate_composes() {
        let img = Image::from_fn(8, 8, 255.0, |r, c| (r * 31 + c * 7) as f64).unwrap();
        let a = decimate(&decimate(&img, 2).unwrap(), 2).unwrap();
        let b = decimate(&img, 4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn near_identity_model_reproduces_hr() {
        let hr = Image::from_fn(16, 16, 255.0, |r, c| {
            100.0 + 50.0 * ((r as f64) * 0.4).sin() + 20.0 * ((c as f64) * 0.3).cos()
        })
        .unwrap();
        let model = DegradationModel {
            psf_sigma: 1e-3,
            psf_radius: 1,
            shift: (0.0, 0.0),
            decimation: 1,
            noise_sigma: 0.0,
            noise_seed: 0,
        };
        let frames = generate_lr_set(&hr, &[model]).unwrap();
        for (a, b) in frames[0].image.data().iter().zip(hr.data()) {
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn generate_lr_set_is_deterministic() {
        let hr = Image::from_fn(16, 16, 255.0, |r, c| ((r * c) % 200) as f64).unwrap();
        let models = quarter_shift_models(&DegradationModel {
            noise_sigma: 2.0,
            noise_seed: 9,
            ..Default::default()
        });
        let a = generate_lr_set(&hr, &models).unwrap();
        let b = generate_lr_set(&hr, &models).unwrap();
        for (fa, fb) in a.iter().zip(&b) {
            assert_eq!(fa.image, fb.image);
        }
    }

    #[test]
    fn distinct_seeds_change_noise() {
        let hr = Image::constant(8, 8, 100.0, 255.0).unwrap();
        let mk = |seed| DegradationModel {
            noise_sigma: 3.0,
            noise_seed: seed,
            decimation: 2,
            ..Default::default()
        };
        let a = generate_lr_set(&hr, &[mk(1)]).unwrap();
        let b = generate_lr_set(&hr, &[mk(2)]).unwrap();
        assert_ne!(a[0].image, b[0].image);
    }

    #[test]
    fn four_quarter_shift_frames_have_half_dims() {
        let hr = Image::from_fn(32, 32, 255.0, |r, c| (r + c) as f64).unwrap();
        let models = quarter_shift_models(&DegradationModel::default());
        let frames = generate_lr_set(&hr, &models).unwrap();
        assert_eq!(frames.len(), 4);
        for f in &frames {
            assert_eq!(f.image.dims(), (16, 16));
        }
    }

    #[test]
    fn empty_model_list_is_an_error() {
        let hr = Image::constant(8, 8, 0.0, 255.0).unwrap();
        assert!(matches!(
            generate_lr_set(&hr, &[]),
            Err(Error::EmptyFrameSet)
        ));
    }

    #[test]
    fn validate_rejects_bad_fields() {
        let ok = DegradationModel::default();
        assert!(ok.validate().is_ok());
        assert!(DegradationModel { psf_sigma: -1.0, ..ok.clone() }.validate().is_err());
        assert!(DegradationModel { psf_radius: 1, ..ok.clone() }.validate().is_err());
        assert!(DegradationModel { decimation: 0, ..ok.clone() }.validate().is_err());
        assert!(DegradationModel { noise_sigma: -0.1, ..ok.clone() }.validate().is_err());
        assert!(DegradationModel { shift: (f64::NAN, 0.0), ..ok }.validate().is_err());
    }
}
