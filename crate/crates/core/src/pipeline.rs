//! Method registry and the interpolate-then-fuse super-resolution pipeline.
//!
//! Five reconstruction methods share one entry point:
//!
//! * `nearest` / `bilinear` / `bicubic`: plain single-frame interpolation of
//!   frame 0.
//! * `irani-peleg`: back-projection directly against the LR frames.
//! * `proposed`: every frame is first bicubic-interpolated to the HR grid,
//!   then the interpolated frames are fused by the same solver using
//!   HR-grid forward models (decimation 1, original blur and shift).

use rayon::prelude::*;

use crate::degrade::{DegradationModel, LrFrame};
use crate::error::{Error, Result};
use crate::ibp::{ibp_solve, irani_peleg_sr, IbpConfig, IbpTrace};
use crate::image::Image;
use crate::interp::{resample, KernelSpec, DEFAULT_BICUBIC_A};

/// A reconstruction method plus its tuning knobs.
#[derive(Debug, Clone, PartialEq)]
pub enum MethodSpec {
    /// Single-frame interpolation of frame 0 with the given kernel.
    Interp(KernelSpec),
    /// Back-projection against the native LR frames.
    IraniPeleg(IbpConfig),
    /// Interpolate every frame to the HR grid, then fuse.
    Proposed(IbpConfig),
}

pub const METHOD_NAMES: [&str; 5] = ["nearest", "bilinear", "bicubic", "irani-peleg", "proposed"];

impl MethodSpec {
    /// Builds the named method with default parameters.
    pub fn from_name(name: &str) -> Result<MethodSpec> {
        match name {
            "nearest" => Ok(MethodSpec::Interp(KernelSpec::nearest())),
            "bilinear" => Ok(MethodSpec::Interp(KernelSpec::bilinear())),
            "bicubic" => Ok(MethodSpec::Interp(KernelSpec::bicubic(DEFAULT_BICUBIC_A))),
            "irani-peleg" => Ok(MethodSpec::IraniPeleg(IbpConfig::default())),
            "proposed" => Ok(MethodSpec::Proposed(IbpConfig::default())),
            _ => Err(Error::UnknownMethod {
                name: name.to_string(),
                valid: METHOD_NAMES.join(", "),
            }),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MethodSpec::Interp(k) => match k.kind() {
                crate::interp::KernelKind::Nearest => "nearest",
                crate::interp::KernelKind::Bilinear => "bilinear",
                crate::interp::KernelKind::Bicubic => "bicubic",
            },
            MethodSpec::IraniPeleg(_) => "irani-peleg",
            MethodSpec::Proposed(_) => "proposed",
        }
    }
}

/// Starting point for the interpolate-then-fuse solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ProposedInit {
    /// Pixelwise mean of the upscaled frames after compensating each
    /// frame's known shift. The default: averaging pools the information
    /// of all frames before the solver touches it.
    #[default]
    AlignedMean,
    /// Bicubic upscale of frame 0 alone — the single-frame start point,
    /// kept for ablation against `AlignedMean`.
    FrameZero,
}

/// Interpolate-then-fuse reconstruction. Returns the fused image and the
/// solver trace.
///
/// Each frame is upscaled by `scale` (bicubic, zero shift) onto the HR grid,
/// where its forward model becomes decimation 1 with the original blur and
/// the original shift (already expressed in HR pixels). The solver starts
/// from the shift-compensated mean of the upscaled frames.
pub fn proposed_sr(
    frames: &[LrFrame],
    scale: usize,
    config: &IbpConfig,
) -> Result<(Image, IbpTrace)> {
    proposed_sr_with_init(frames, scale, config, ProposedInit::AlignedMean)
}

/// `proposed_sr` with an explicit choice of solver starting point.
pub fn proposed_sr_with_init(
    frames: &[LrFrame],
    scale: usize,
    config: &IbpConfig,
    init_kind: ProposedInit,
) -> Result<(Image, IbpTrace)> {
    if frames.is_empty() {
        return Err(Error::EmptyFrameSet);
    }
    if scale == 0 {
        return Err(Error::InvalidConfig("scale must be at least 1".to_string()));
    }
    for f in &frames[1..] {
        frames[0].image.check_same_dims(&f.image)?;
        frames[0].image.check_same_peak(&f.image)?;
    }

    let bicubic = KernelSpec::bicubic(DEFAULT_BICUBIC_A);
    let upscaled: Result<Vec<LrFrame>> = frames
        .par_iter()
        .map(|f| {
            let image = resample(&f.image, scale as f64, (0.0, 0.0), &bicubic)?;
            let model = DegradationModel {
                psf_sigma: f.model.psf_sigma,
                psf_radius: f.model.psf_radius,
                shift: f.model.shift,
                decimation: 1,
                noise_sigma: 0.0,
                noise_seed: 0,
            };
            Ok(LrFrame { image, model })
        })
        .collect();
    let upscaled = upscaled?;

    let init = match init_kind {
        ProposedInit::AlignedMean => {
            let mut acc: Option<Image> = None;
            for f in &upscaled {
                let aligned =
                    resample(&f.image, 1.0, (-f.model.shift.0, -f.model.shift.1), &bicubic)?;
                acc = Some(match acc {
                    None => aligned,
                    Some(a) => a.add_scaled(&aligned, 1.0)?,
                });
            }
            let k = upscaled.len() as f64;
            acc.expect("frames are non-empty").map(|v| v / k)
        }
        ProposedInit::FrameZero => upscaled[0].image.clone(),
    };

    ibp_solve(&upscaled, &init, config)
}

/// Runs one method on a frame set; every method maps w×h frames to
/// (w·scale)×(h·scale) output.
pub fn run_method(spec: &MethodSpec, frames: &[LrFrame], scale: usize) -> Result<Image> {
    if frames.is_empty() {
        return Err(Error::EmptyFrameSet);
    }
    if scale == 0 {
        return Err(Error::InvalidConfig("scale must be at least 1".to_string()));
    }
    match spec {
        MethodSpec::Interp(kernel) => {
            resample(&frames[0].image, scale as f64, (0.0, 0.0), kernel)
        }
        MethodSpec::IraniPeleg(config) => {
            let (w, h) = frames[0].image.dims();
            let (img, _) = irani_peleg_sr(frames, (w * scale, h * scale), config)?;
            Ok(img)
        }
        MethodSpec::Proposed(config) => {
            let (img, _) = proposed_sr(frames, scale, config)?;
            Ok(img)
        }
    }
}

/// Exhaustive sub-pixel registration: finds the (dx, dy) on the search grid
/// that best explains `moved` as a translation of `reference`, by shifting
/// `moved` back and scoring mean squared difference over the interior
/// (borders are excluded so edge replication cannot bias the score).
///
/// Ties break toward the smaller ‖(dx, dy)‖, then lexicographically.
/// Intended for real frame sets where shifts are unknown; synthetic
/// pipelines should use their known shifts.
pub fn estimate_shift(
    reference: &Image,
    moved: &Image,
    search_radius: f64,
    grid_step: f64,
) -> Result<(f64, f64)> {
    reference.check_same_dims(moved)?;
    if !(grid_step > 0.0 && grid_step <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "grid_step must be in (0, 1], got {grid_step}"
        )));
    }
    if !(search_radius.is_finite() && (0.0..=3.0).contains(&search_radius)) {
        return Err(Error::InvalidConfig(format!(
            "search_radius must be in [0, 3], got {search_radius}"
        )));
    }
    let margin = search_radius.ceil() as usize + 3;
    let (w, h) = reference.dims();
    if w <= 2 * margin + 1 || h <= 2 * margin + 1 {
        return Err(Error::InvalidConfig(format!(
            "image {w}x{h} too small for a shift search of radius {search_radius}"
        )));
    }

    let n = (search_radius / grid_step).round() as isize;
    let bicubic = KernelSpec::bicubic(DEFAULT_BICUBIC_A);
    let mut candidates = Vec::new();
    for iy in -n..=n {
        for ix in -n..=n {
            let dx = ix as f64 * grid_step;
            let dy = iy as f64 * grid_step;
            let back = resample(moved, 1.0, (-dx, -dy), &bicubic)?;
            let mut sse = 0.0;
            let mut count = 0usize;
            for r in margin..h - margin {
                for c in margin..w - margin {
                    let d = back.get(r, c) - reference.get(r, c);
                    sse += d * d;
                    count += 1;
                }
            }
            candidates.push((sse / count as f64, dx * dx + dy * dy, dx, dy));
        }
    }
    let best = candidates
        .iter()
        .min_by(|a, b| a.partial_cmp(b).expect("scores are finite"))
        .expect("grid is non-empty");
    Ok((best.2, best.3))
}
