//! Full-reference quality metrics: PSNR and SSIM.
//!
//! PSNR uses the image's declared peak, not the observed maximum, which is
//! the usual convention for 8-bit comparisons. SSIM follows the canonical
//! parameterization: 11×11 Gaussian window with sigma 1.5, K1 = 0.01,
//! K2 = 0.03, and windows kept fully inside the image (valid-region
//! convolution, no padding). The padding choice shifts SSIM by about 1e-3,
//! so it is fixed here for cross-implementation agreement.

use crate::degrade::gaussian_taps;
use crate::error::{Error, Result};
use crate::image::Image;

/// Peak signal-to-noise ratio in dB: 10·log10(peak²/MSE). Identical images
/// have zero MSE and return +infinity (render it as "inf" in reports).
pub fn psnr(reference: &Image, test: &Image) -> Result<f64> {
    reference.check_same_dims(test)?;
    reference.check_same_peak(test)?;
    let n = reference.data().len() as f64;
    let mse = reference
        .data()
        .iter()
        .zip(test.data())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        / n;
    if mse == 0.0 {
        return Ok(f64::INFINITY);
    }
    let peak = reference.peak();
    Ok(10.0 * (peak * peak / mse).log10())
}

const SSIM_WINDOW: usize = 11;
const SSIM_SIGMA: f64 = 1.5;
const SSIM_K1: f64 = 0.01;
const SSIM_K2: f64 = 0.03;

/// Mean structural similarity over all fully-interior 11×11 windows.
pub fn ssim(reference: &Image, test: &Image) -> Result<f64> {
    reference.check_same_dims(test)?;
    reference.check_same_peak(test)?;
    let (w, h) = reference.dims();
    if w < SSIM_WINDOW || h < SSIM_WINDOW {
        return Err(Error::TooSmallForSsim {
            width: w,
            height: h,
        });
    }

    let x = reference.data();
    let y = test.data();
    let xx: Vec<f64> = x.iter().map(|v| v * v).collect();
    let yy: Vec<f64> = y.iter().map(|v| v * v).collect();
    let xy: Vec<f64> = x.iter().zip(y).map(|(a, b)| a * b).collect();

    let taps = gaussian_taps(SSIM_SIGMA, SSIM_WINDOW / 2);
    let mu_x = valid_filter(x, w, h, &taps);
    let mu_y = valid_filter(y, w, h, &taps);
    let m_xx = valid_filter(&xx, w, h, &taps);
    let m_yy = valid_filter(&yy, w, h, &taps);
    let m_xy = valid_filter(&xy, w, h, &taps);

    let peak = reference.peak();
    let c1 = (SSIM_K1 * peak) * (SSIM_K1 * peak);
    let c2 = (SSIM_K2 * peak) * (SSIM_K2 * peak);

    let mut total = 0.0;
    for i in 0..mu_x.len() {
        let (mx, my) = (mu_x[i], mu_y[i]);
        let sigma_x2 = m_xx[i] - mx * mx;
        let sigma_y2 = m_yy[i] - my * my;
        let sigma_xy = m_xy[i] - mx * my;
        let num = (2.0 * mx * my + c1) * (2.0 * sigma_xy + c2);
        let den = (mx * mx + my * my + c1) * (sigma_x2 + sigma_y2 + c2);
        total += num / den;
    }
    Ok(total / mu_x.len() as f64)
}

/// Separable weighted filter keeping only windows fully inside the plane:
/// input w×h, output (w−2r)×(h−2r) for taps of half-width r.
fn valid_filter(data: &[f64], w: usize, h: usize, taps: &[f64]) -> Vec<f64> {
    let r = taps.len() / 2;
    let ow = w - 2 * r;
    let oh = h - 2 * r;

    let mut mid = vec![0.0; ow * h];
    for row in 0..h {
        let src = &data[row * w..(row + 1) * w];
        let dst = &mut mid[row * ow..(row + 1) * ow];
        for (c, d) in dst.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (j, &t) in taps.iter().enumerate() {
                acc += t * src[c + j];
            }
            *d = acc;
        }
    }

    let mut out = vec![0.0; ow * oh];
    for row in 0..oh {
        let dst = &mut out[row * ow..(row + 1) * ow];
        for (j, &t) in taps.iter().enumerate() {
            let src = &mid[(row + j) * ow..(row + j + 1) * ow];
            for (d, s) in dst.iter_mut().zip(src) {
                *d += t * s;
            }
        }
    }
    out
}

/// One benchmark result row.
#[derive(Debug, Clone)]
pub struct QualityReport {
    pub image: String,
    pub method: String,
    pub psnr_db: f64,
    pub ssim: f64,
    pub runtime_ms: f64,
    pub config_digest: String,
}

pub const REPORT_CSV_HEADER: &str = "image,method,psnr_db,ssim,runtime_ms,config_digest";

/// Fixed-precision dB formatting with an "inf" sentinel for zero-MSE pairs.
pub fn format_db(v: f64) -> String {
    if v.is_infinite() {
        "inf".to_string()
    } else {
        format!("{v:.6}")
    }
}

impl QualityReport {
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{:.6},{:.3},{}",
            self.image,
            self.method,
            format_db(self.psnr_db),
            self.ssim,
            self.runtime_ms,
            self.config_digest
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Pcg32;

    fn textured(w: usize, h: usize) -> Image {
        Image::from_fn(w, h, 255.0, |r, c| {
            let (x, y) = (c as f64, r as f64);
            120.0 + 60.0 * (x * 0.31).sin() * (y * 0.17).cos() + 30.0 * ((x - y) * 0.09).sin()
        })
        .unwrap()
    }

    #[test]
    fn psnr_of_identical_images_is_infinite() {
        let a = textured(16, 16);
        let p = psnr(&a, &a).unwrap();
        assert!(p.is_infinite() && p > 0.0);
        assert_eq!(format_db(p), "inf");
    }

    #[test]
    fn psnr_closed_forms() {
        let a = Image::constant(16, 16, 100.0, 255.0).unwrap();
        // Every pixel off by exactly 1: MSE = 1, PSNR = 20·log10(255).
        let b = a.map(|v| v + 1.0);
        assert!((psnr(&a, &b).unwrap() - 48.1308036086791).abs() < 1e-6);
        // MSE = 100: PSNR = 20·log10(255) − 20.
        let c = a.map(|v| v + 10.0);
        assert!((psnr(&a, &c).unwrap() - 28.1308036086791).abs() < 1e-6);
    }

    #[test]
    fn psnr_is_symmetric() {
        let a = textured(16, 16);
        let b = a.map(|v| v + 3.5);
        assert_eq!(psnr(&a, &b).unwrap(), psnr(&b, &a).unwrap());
    }

    #[test]
    fn psnr_rejects_mismatches() {
        let a = textured(16, 16);
        let b = textured(16, 12);
        assert!(psnr(&a, &b).is_err());
        let c = Image::constant(16, 16, 0.0, 100.0).unwrap();
        assert!(matches!(psnr(&a, &c), Err(Error::PeakMismatch { .. })));
    }

    #[test]
    fn psnr_decreases_with_noise_level() {
        let a = textured(64, 64);
        let mut last = f64::INFINITY;
        for sigma in [1.0, 2.0, 4.0, 8.0] {
            let mut rng = Pcg32::new(42, 1);
            let noisy = a.map(|v| v + sigma * rng.next_gaussian());
            let p = psnr(&a, &noisy).unwrap();
            assert!(p < last, "sigma {sigma}: {p} !< {last}");
            last = p;
        }
    }

    #[test]
    fn ssim_of_identical_images_is_exactly_one() {
        let a = textured(32, 24);
        assert_eq!(ssim(&a, &a).unwrap(), 1.0);
    }

    #[test]
    fn ssim_rejects_small_images() {
        let a = textured(10, 16);
        assert!(matches!(
            ssim(&a, &a),
            Err(Error::TooSmallForSsim { width: 10, height: 16 })
        ));
    }

    #[test]
    fn ssim_is_symmetric() {
        let a = textured(24, 24);
        let mut rng = Pcg32::new(5, 1);
        let b = a.map(|v| v + 4.0 * rng.next_gaussian());
        let ab = ssim(&a, &b).unwrap();
        let ba = ssim(&b, &a).unwrap();
        assert!((ab - ba).abs() < 1e-12);
        assert!(ab < 1.0);
    }

    #[test]
    fn inverted_checkerboard_has_negative_ssim() {
        // Single 11×11 window; structure is perfectly anti-correlated and
        // both constants are symmetric around mid-gray, so SSIM < 0.
        let x = Image::from_fn(11, 11, 255.0, |r, c| {
            if (r + c) % 2 == 0 {
                255.0
            } else {
                0.0
            }
        })
        .unwrap();
        let y = x.map(|v| 255.0 - v);
        let s = ssim(&x, &y).unwrap();
        assert!(s < 0.0, "ssim {s}");
    }

    #[test]
    fn small_constant_offset_stays_above_point_nine() {
        let a = textured(64, 64);
        let b = a.map(|v| v + 1.0);
        let s = ssim(&a, &b).unwrap();
        assert!(s > 0.9 && s < 1.0, "ssim {s}");
    }

    #[test]
    fn ssim_invariant_to_shifting_both_images() {
        let a = textured(32, 32);
        let mut rng = Pcg32::new(11, 1);
        let b = a.map(|v| v + 2.0 * rng.next_gaussian());
        let base = ssim(&a, &b).unwrap();
        let c = 1e-3;
        let shifted = ssim(&a.map(|v| v + c), &b.map(|v| v + c)).unwrap();
        assert!((base - shifted).abs() < 1e-9, "{base} vs {shifted}");
    }

    #[test]
    fn report_row_formats_stably() {
        let r = QualityReport {
            image: "scene".to_string(),
            method: "bicubic".to_string(),
            psnr_db: 18.6,
            ssim: 0.58271,
            runtime_ms: 12.3456,
            config_digest: "abcd1234".to_string(),
        };
        assert_eq!(
            r.to_csv_row(),
            "scene,bicubic,18.600000,0.582710,12.346,abcd1234"
        );
        assert_eq!(
            REPORT_CSV_HEADER,
            "image,method,psnr_db,ssim,runtime_ms,config_digest"
        );
    }
}
