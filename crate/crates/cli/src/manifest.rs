//! Frame manifest: the sidecar the degrade command writes next to its LR
//! frames so a later reconstruction knows exactly how each frame was made.
//!
//! ```text
//! version = 1
//! image = scene
//! peak = 255
//! count = 4
//!
//! [frame]
//! file = scene_f0.pgm
//! psf_sigma = 1
//! psf_radius = 3
//! shift_dx = 0
//! shift_dy = 0
//! decimation = 2
//! noise_sigma = 0
//! noise_seed = 1
//! ```
//!
//! Same line grammar as the benchmark config. `count` is redundant with
//! the number of blocks and is cross-checked on read.

use std::fmt::Write as _;
use std::path::Path;

use superres::degrade::{DegradationModel, LrFrame};
use superres::pnm::read_pnm_path;

use crate::config::{classify, content_lines, ConfigError, Line};
use crate::error::CliError;

pub const MANIFEST_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestFrame {
    /// Frame file name, relative to the manifest's directory.
    pub file: String,
    pub model: DegradationModel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameManifest {
    pub image: String,
    pub peak: f64,
    pub frames: Vec<ManifestFrame>,
}

impl FrameManifest {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "version = {MANIFEST_VERSION}");
        let _ = writeln!(s, "image = {}", self.image);
        let _ = writeln!(s, "peak = {}", self.peak);
        let _ = writeln!(s, "count = {}", self.frames.len());
        for f in &self.frames {
            let _ = writeln!(s, "\n[frame]");
            let _ = writeln!(s, "file = {}", f.file);
            let _ = writeln!(s, "psf_sigma = {}", f.model.psf_sigma);
            let _ = writeln!(s, "psf_radius = {}", f.model.psf_radius);
            let _ = writeln!(s, "shift_dx = {}", f.model.shift.0);
            let _ = writeln!(s, "shift_dy = {}", f.model.shift.1);
            let _ = writeln!(s, "decimation = {}", f.model.decimation);
            let _ = writeln!(s, "noise_sigma = {}", f.model.noise_sigma);
            let _ = writeln!(s, "noise_seed = {}", f.model.noise_seed);
        }
        s
    }

    pub fn parse(text: &str) -> Result<FrameManifest, ConfigError> {
        let mut version: Option<u64> = None;
        let mut image: Option<String> = None;
        let mut peak: Option<f64> = None;
        let mut count: Option<usize> = None;
        let mut frames: Vec<ManifestFrame> = Vec::new();
        type Draft = (usize, Option<String>, DegradationModel, Vec<String>);
        let mut current: Option<Draft> = None;

        let finalize = |cur: &mut Option<Draft>,
                            frames: &mut Vec<ManifestFrame>|
         -> Result<(), ConfigError> {
            if let Some((start, file, model, _)) = cur.take() {
                let file = file.ok_or_else(|| {
                    ConfigError {
                        line: Some(start),
                        message: "[frame] block is missing 'file'".to_string(),
                    }
                })?;
                frames.push(ManifestFrame { file, model });
            }
            Ok(())
        };

        for (lineno, raw) in content_lines(text) {
            match classify(lineno, raw)? {
                Line::Header("frame") => {
                    finalize(&mut current, &mut frames)?;
                    current = Some((lineno, None, DegradationModel::default(), Vec::new()));
                }
                Line::Header(other) => {
                    return Err(ConfigError {
                        line: Some(lineno),
                        message: format!("unknown block '[{other}]' (expected [frame])"),
                    })
                }
                Line::Pair(key, value) => {
                    let err = |msg: String| ConfigError {
                        line: Some(lineno),
                        message: msg,
                    };
                    match &mut current {
                        None => match key {
                            "version" => {
                                version = Some(value.parse().map_err(|_| {
                                    err(format!("version: not an integer: '{value}'"))
                                })?)
                            }
                            "image" => image = Some(value.to_string()),
                            "peak" => {
                                let p: f64 = value
                                    .parse()
                                    .map_err(|_| err(format!("peak: not a number: '{value}'")))?;
                                if !(p.is_finite() && p > 0.0) {
                                    return Err(err(format!("peak must be positive, got {p}")));
                                }
                                peak = Some(p);
                            }
                            "count" => {
                                count = Some(value.parse().map_err(|_| {
                                    err(format!("count: not an integer: '{value}'"))
                                })?)
                            }
                            other => return Err(err(format!("unknown header key '{other}'"))),
                        },
                        Some((_, file, model, seen)) => {
                            if seen.iter().any(|s| s == key) {
                                return Err(err(format!("duplicate key '{key}'")));
                            }
                            let parse_f = |v: &str| -> Result<f64, ConfigError> {
                                let x: f64 = v
                                    .parse()
                                    .map_err(|_| err(format!("{key}: not a number: '{v}'")))?;
                                if !x.is_finite() {
                                    return Err(err(format!("{key}: must be finite")));
                                }
                                Ok(x)
                            };
                            match key {
                                "file" => {
                                    if value.is_empty() {
                                        return Err(err("file: empty".to_string()));
                                    }
                                    *file = Some(value.to_string());
                                }
                                "psf_sigma" => model.psf_sigma = parse_f(value)?,
                                "psf_radius" => {
                                    model.psf_radius = value.parse().map_err(|_| {
                                        err(format!("psf_radius: not an integer: '{value}'"))
                                    })?
                                }
                                "shift_dx" => model.shift.0 = parse_f(value)?,
                                "shift_dy" => model.shift.1 = parse_f(value)?,
                                "decimation" => {
                                    model.decimation = value.parse().map_err(|_| {
                                        err(format!("decimation: not an integer: '{value}'"))
                                    })?
                                }
                                "noise_sigma" => model.noise_sigma = parse_f(value)?,
                                "noise_seed" => {
                                    model.noise_seed = value.parse().map_err(|_| {
                                        err(format!("noise_seed: not an integer: '{value}'"))
                                    })?
                                }
                                other => {
                                    return Err(err(format!("unknown [frame] key '{other}'")))
                                }
                            }
                            seen.push(key.to_string());
                        }
                    }
                }
            }
        }
        finalize(&mut current, &mut frames)?;

        let version = version.ok_or_else(|| ConfigError {
            line: None,
            message: "missing 'version'".to_string(),
        })?;
        if version != MANIFEST_VERSION {
            return Err(ConfigError {
                line: None,
                message: format!("unsupported manifest version {version}"),
            });
        }
        let manifest = FrameManifest {
            image: image.ok_or_else(|| ConfigError {
                line: None,
                message: "missing 'image'".to_string(),
            })?,
            peak: peak.ok_or_else(|| ConfigError {
                line: None,
                message: "missing 'peak'".to_string(),
            })?,
            frames,
        };
        if manifest.frames.is_empty() {
            return Err(ConfigError {
                line: None,
                message: "manifest lists no frames".to_string(),
            });
        }
        if let Some(c) = count {
            if c != manifest.frames.len() {
                return Err(ConfigError {
                    line: None,
                    message: format!(
                        "count = {c} but {} [frame] blocks present",
                        manifest.frames.len()
                    ),
                });
            }
        }
        Ok(manifest)
    }

    /// Reads every frame file (relative to `dir`) and checks the set is
    /// mutually consistent: equal dims, peak matching the manifest.
    pub fn load_frames(&self, dir: &Path) -> Result<Vec<LrFrame>, CliError> {
        let mut frames = Vec::with_capacity(self.frames.len());
        for mf in &self.frames {
            let path = dir.join(&mf.file);
            let image = read_pnm_path(&path)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            if image.peak() != self.peak {
                return Err(CliError::Config(format!(
                    "{}: peak {} does not match manifest peak {}",
                    path.display(),
                    image.peak(),
                    self.peak
                )));
            }
            frames.push(LrFrame {
                image,
                model: mf.model.clone(),
            });
        }
        for f in &frames[1..] {
            if f.image.dims() != frames[0].image.dims() {
                return Err(CliError::Config(format!(
                    "frame dimensions disagree: {:?} vs {:?}",
                    frames[0].image.dims(),
                    f.image.dims()
                )));
            }
        }
        Ok(frames)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> FrameManifest {
        FrameManifest {
            image: "scene".to_string(),
            peak: 255.0,
            frames: vec![
                ManifestFrame {
                    file: "scene_f0.pgm".to_string(),
                    model: DegradationModel::default(),
                },
                ManifestFrame {
                    file: "scene_f1.pgm".to_string(),
                    model: DegradationModel {
                        shift: (0.5, 0.0),
                        noise_seed: 1,
                        ..Default::default()
                    },
                },
            ],
        }
    }

    #[test]
    fn text_roundtrip_is_lossless() {
        let m = sample();
        let back = FrameManifest::parse(&m.to_text()).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn version_is_mandatory_and_checked() {
        let text = sample().to_text().replace("version = 1", "version = 9");
        assert!(FrameManifest::parse(&text).is_err());
        let text = sample()
            .to_text()
            .replace("version = 1\n", "");
        assert!(FrameManifest::parse(&text).is_err());
    }

    #[test]
    fn count_cross_check_catches_truncation() {
        let m = sample();
        let text = m.to_text().replace("count = 2", "count = 3");
        let err = FrameManifest::parse(&text).unwrap_err();
        assert!(err.message.contains("count"), "{err}");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = format!("{}\nrotation = 5\n", sample().to_text());
        assert!(FrameManifest::parse(&text).is_err());
    }

    #[test]
    fn missing_file_key_is_rejected() {
        let text = "version = 1\nimage = x\npeak = 255\n\n[frame]\npsf_sigma = 1\n";
        let err = FrameManifest::parse(text).unwrap_err();
        assert!(err.message.contains("file"), "{err}");
    }
}
