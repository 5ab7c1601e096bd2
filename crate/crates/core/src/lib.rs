//! Multi-frame image super-resolution toolkit.
//!
//! The crate covers the full desk-scale experiment loop:
//!
//! * [`image`]: a minimal grayscale `f64` image container with PGM/PPM I/O
//!   (see [`pnm`]).
//! * [`interp`]: nearest/bilinear/bicubic kernels, a separable resampler,
//!   and numeric kernel frequency responses.
//! * [`degrade`]: shift + Gaussian blur + decimation + seeded noise, used to
//!   synthesize low-resolution frame sets from a ground-truth image.
//! * [`ibp`]: the iterative back-projection solver and the classic
//!   reconstruct-from-LR-frames method built on it.
//! * [`pipeline`]: method selection (plain interpolation, classic IBP, and
//!   interpolate-then-fuse) behind one entry point.
//! * [`metrics`]: PSNR and SSIM against a reference image.
//! * [`synth`]: deterministic synthetic test scenes.

pub mod degrade;
pub mod error;
pub mod ibp;
pub mod image;
pub mod interp;
pub mod metrics;
pub mod pipeline;
pub mod pnm;
pub mod rng;
pub mod synth;

pub use error::{Error, Result};
pub use image::Image;
