//! Benchmark configuration: a flat key-value format with repeated blocks.
//!
//! ```text
//! # comment lines start with '#'
//! scale = 2                    # top-level keys come before the first block
//! output_dir = out
//! emit_images = true
//!
//! [image]                      # one block per benchmark image
//! name = scene
//! path = fixtures/scene.pgm
//!
//! [frame]                      # one block per LR frame to synthesize
//! psf_sigma = 1.0
//! psf_radius = 3
//! shift_dx = 0.0
//! shift_dy = 0.0
//! decimation = 2
//! noise_sigma = 0.0
//! noise_seed = 1
//!
//! [method]                     # one block per reconstruction method
//! name = proposed
//! max_iters = 50
//! tol = 1e-3
//! ```
//!
//! Every key is checked against its block's schema; unknown keys, duplicate
//! keys, and values that fail to parse are errors naming the line. Relative
//! paths are resolved against the config file's directory by the commands,
//! not here. `canonical_text` re-serializes a parsed config in a fixed
//! order/format, and `digest` hashes that text, so two files that differ
//! only in comments or spacing earn the same digest.

use std::fmt;

use sha2::{Digest, Sha256};
use superres::degrade::DegradationModel;
use superres::ibp::IbpConfig;
use superres::interp::{KernelKind, KernelSpec};
use superres::pipeline::MethodSpec;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        ConfigError {
            line: Some(line),
            message: message.into(),
        }
    }

    fn general(message: impl Into<String>) -> Self {
        ConfigError {
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(n) => write!(f, "line {}: {}", n, self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

/// One benchmark input image: a short CSV-safe name plus the file path.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageEntry {
    pub name: String,
    pub path: String,
}

/// The full benchmark description: what to degrade, how, and which methods
/// to score.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub scale: usize,
    pub output_dir: String,
    pub emit_images: bool,
    pub images: Vec<ImageEntry>,
    pub frame_models: Vec<DegradationModel>,
    pub methods: Vec<MethodSpec>,
}

/// A parsed line that carries content.
pub(crate) enum Line<'a> {
    Header(&'a str),
    Pair(&'a str, &'a str),
}

/// Strips comments/blanks and tags each remaining line with its 1-based
/// number. Totally permissive at this layer; schema checks happen above.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub(crate) fn classify(lineno: usize, line: &str) -> Result<Line<'_>, ConfigError> {
    if let Some(inner) = line.strip_prefix('[') {
        let name = inner
            .strip_suffix(']')
            .ok_or_else(|| ConfigError::at(lineno, "unterminated block header"))?
            .trim();
        if name.is_empty() {
            return Err(ConfigError::at(lineno, "empty block header"));
        }
        return Ok(Line::Header(name));
    }
    match line.split_once('=') {
        Some((k, v)) => {
            let key = k.trim();
            if key.is_empty() {
                return Err(ConfigError::at(lineno, "missing key before '='"));
            }
            Ok(Line::Pair(key, v.trim()))
        }
        None => Err(ConfigError::at(
            lineno,
            format!("expected 'key = value' or '[block]', got '{line}'"),
        )),
    }
}

fn parse_f64(lineno: usize, key: &str, v: &str) -> Result<f64, ConfigError> {
    let x: f64 = v
        .parse()
        .map_err(|_| ConfigError::at(lineno, format!("{key}: not a number: '{v}'")))?;
    if !x.is_finite() {
        return Err(ConfigError::at(lineno, format!("{key}: must be finite")));
    }
    Ok(x)
}

fn parse_usize(lineno: usize, key: &str, v: &str) -> Result<usize, ConfigError> {
    v.parse()
        .map_err(|_| ConfigError::at(lineno, format!("{key}: not a non-negative integer: '{v}'")))
}

fn parse_u64(lineno: usize, key: &str, v: &str) -> Result<u64, ConfigError> {
    v.parse()
        .map_err(|_| ConfigError::at(lineno, format!("{key}: not a non-negative integer: '{v}'")))
}

fn parse_bool(lineno: usize, key: &str, v: &str) -> Result<bool, ConfigError> {
    match v {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(ConfigError::at(
            lineno,
            format!("{key}: expected 'true' or 'false', got '{v}'"),
        )),
    }
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
}

#[derive(Default)]
struct ImageDraft {
    start: usize,
    name: Option<String>,
    path: Option<String>,
}

#[derive(Default)]
struct FrameDraft {
    model: DegradationModel,
    seen: Vec<&'static str>,
}

#[derive(Default)]
struct MethodDraft {
    start: usize,
    name: Option<String>,
    kernel_a: Option<f64>,
    ibp: IbpConfig,
    seen: Vec<&'static str>,
}

enum Section {
    Top,
    Image(ImageDraft),
    Frame(FrameDraft),
    Method(MethodDraft),
}

fn seen_once(
    lineno: usize,
    seen: &mut Vec<&'static str>,
    key: &'static str,
) -> Result<(), ConfigError> {
    if seen.contains(&key) {
        return Err(ConfigError::at(lineno, format!("duplicate key '{key}'")));
    }
    seen.push(key);
    Ok(())
}

impl BenchConfig {
    pub fn parse(text: &str) -> Result<BenchConfig, ConfigError> {
        let mut scale: Option<usize> = None;
        let mut output_dir: Option<String> = None;
        let mut emit_images: Option<bool> = None;
        let mut images = Vec::new();
        let mut frames = Vec::new();
        let mut methods: Vec<MethodSpec> = Vec::new();

        let mut section = Section::Top;
        let finalize = |section: &mut Section,
                            images: &mut Vec<ImageEntry>,
                            frames: &mut Vec<DegradationModel>,
                            methods: &mut Vec<MethodSpec>|
         -> Result<(), ConfigError> {
            match std::mem::replace(section, Section::Top) {
                Section::Top => {}
                Section::Image(d) => {
                    let name = d.name.ok_or_else(|| {
                        ConfigError::at(d.start, "[image] block is missing 'name'")
                    })?;
                    let path = d.path.ok_or_else(|| {
                        ConfigError::at(d.start, "[image] block is missing 'path'")
                    })?;
                    images.push(ImageEntry { name, path });
                }
                Section::Frame(d) => frames.push(d.model),
                Section::Method(d) => {
                    let name = d.name.ok_or_else(|| {
                        ConfigError::at(d.start, "[method] block is missing 'name'")
                    })?;
                    let base = MethodSpec::from_name(&name)
                        .map_err(|e| ConfigError::at(d.start, e.to_string()))?;
                    let spec = match base {
                        MethodSpec::Interp(k) => {
                            // kernel_a only matters for the bicubic kernel;
                            // other keys are accepted but unused.
                            let k = match (k.kind(), d.kernel_a) {
                                (KernelKind::Bicubic, Some(a)) => KernelSpec::bicubic(a),
                                _ => k,
                            };
                            MethodSpec::Interp(k)
                        }
                        MethodSpec::IraniPeleg(_) => MethodSpec::IraniPeleg(d.ibp),
                        MethodSpec::Proposed(_) => MethodSpec::Proposed(d.ibp),
                    };
                    methods.push(spec);
                }
            }
            Ok(())
        };

        for (lineno, raw) in content_lines(text) {
            match classify(lineno, raw)? {
                Line::Header(name) => {
                    finalize(&mut section, &mut images, &mut frames, &mut methods)?;
                    section = match name {
                        "image" => Section::Image(ImageDraft {
                            start: lineno,
                            ..Default::default()
                        }),
                        "frame" => Section::Frame(FrameDraft::default()),
                        "method" => Section::Method(MethodDraft {
                            start: lineno,
                            ..Default::default()
                        }),
                        other => {
                            return Err(ConfigError::at(
                                lineno,
                                format!("unknown block '[{other}]' (expected image, frame, or method)"),
                            ))
                        }
                    };
                }
                Line::Pair(key, value) => match &mut section {
                    Section::Top => match key {
                        "scale" => {
                            if scale.is_some() {
                                return Err(ConfigError::at(lineno, "duplicate key 'scale'"));
                            }
                            scale = Some(parse_usize(lineno, key, value)?);
                        }
                        "output_dir" => {
                            if output_dir.is_some() {
                                return Err(ConfigError::at(lineno, "duplicate key 'output_dir'"));
                            }
                            if value.is_empty() {
                                return Err(ConfigError::at(lineno, "output_dir: empty path"));
                            }
                            output_dir = Some(value.to_string());
                        }
                        "emit_images" => {
                            if emit_images.is_some() {
                                return Err(ConfigError::at(lineno, "duplicate key 'emit_images'"));
                            }
                            emit_images = Some(parse_bool(lineno, key, value)?);
                        }
                        other => {
                            return Err(ConfigError::at(
                                lineno,
                                format!("unknown top-level key '{other}'"),
                            ))
                        }
                    },
                    Section::Image(d) => match key {
                        "name" => {
                            if d.name.is_some() {
                                return Err(ConfigError::at(lineno, "duplicate key 'name'"));
                            }
                            if !valid_name(value) {
                                return Err(ConfigError::at(
                                    lineno,
                                    format!(
                                        "image name '{value}' must be non-empty ASCII \
                                         letters/digits/'-'/'_' (it is used in file names and CSV)"
                                    ),
                                ));
                            }
                            d.name = Some(value.to_string());
                        }
                        "path" => {
                            if d.path.is_some() {
                                return Err(ConfigError::at(lineno, "duplicate key 'path'"));
                            }
                            if value.is_empty() {
                                return Err(ConfigError::at(lineno, "path: empty"));
                            }
                            d.path = Some(value.to_string());
                        }
                        other => {
                            return Err(ConfigError::at(
                                lineno,
                                format!("unknown [image] key '{other}'"),
                            ))
                        }
                    },
                    Section::Frame(d) => match key {
                        "psf_sigma" => {
                            seen_once(lineno, &mut d.seen, "psf_sigma")?;
                            d.model.psf_sigma = parse_f64(lineno, key, value)?;
                        }
                        "psf_radius" => {
                            seen_once(lineno, &mut d.seen, "psf_radius")?;
                            d.model.psf_radius = parse_usize(lineno, key, value)?;
                        }
                        "shift_dx" => {
                            seen_once(lineno, &mut d.seen, "shift_dx")?;
                            d.model.shift.0 = parse_f64(lineno, key, value)?;
                        }
                        "shift_dy" => {
                            seen_once(lineno, &mut d.seen, "shift_dy")?;
                            d.model.shift.1 = parse_f64(lineno, key, value)?;
                        }
                        "decimation" => {
                            seen_once(lineno, &mut d.seen, "decimation")?;
                            d.model.decimation = parse_usize(lineno, key, value)?;
                        }
                        "noise_sigma" => {
                            seen_once(lineno, &mut d.seen, "noise_sigma")?;
                            d.model.noise_sigma = parse_f64(lineno, key, value)?;
                        }
                        "noise_seed" => {
                            seen_once(lineno, &mut d.seen, "noise_seed")?;
                            d.model.noise_seed = parse_u64(lineno, key, value)?;
                        }
                        other => {
                            return Err(ConfigError::at(
                                lineno,
                                format!("unknown [frame] key '{other}'"),
                            ))
                        }
                    },
                    Section::Method(d) => match key {
                        "name" => {
                            if d.name.is_some() {
                                return Err(ConfigError::at(lineno, "duplicate key 'name'"));
                            }
                            d.name = Some(value.to_string());
                        }
                        "kernel_a" => {
                            seen_once(lineno, &mut d.seen, "kernel_a")?;
                            d.kernel_a = Some(parse_f64(lineno, key, value)?);
                        }
                        "bp_sigma" => {
                            seen_once(lineno, &mut d.seen, "bp_sigma")?;
                            d.ibp.bp_sigma = parse_f64(lineno, key, value)?;
                        }
                        "bp_radius" => {
                            seen_once(lineno, &mut d.seen, "bp_radius")?;
                            d.ibp.bp_radius = parse_usize(lineno, key, value)?;
                        }
                        "step" => {
                            seen_once(lineno, &mut d.seen, "step")?;
                            d.ibp.step = parse_f64(lineno, key, value)?;
                        }
                        "max_iters" => {
                            seen_once(lineno, &mut d.seen, "max_iters")?;
                            d.ibp.max_iters = parse_usize(lineno, key, value)?;
                        }
                        "tol" => {
                            seen_once(lineno, &mut d.seen, "tol")?;
                            d.ibp.tol = parse_f64(lineno, key, value)?;
                        }
                        "clamp_each_iter" => {
                            seen_once(lineno, &mut d.seen, "clamp_each_iter")?;
                            d.ibp.clamp_each_iter = parse_bool(lineno, key, value)?;
                        }
                        other => {
                            return Err(ConfigError::at(
                                lineno,
                                format!("unknown [method] key '{other}'"),
                            ))
                        }
                    },
                },
            }
        }
        finalize(&mut section, &mut images, &mut frames, &mut methods)?;

        let config = BenchConfig {
            scale: scale.ok_or_else(|| ConfigError::general("missing top-level key 'scale'"))?,
            output_dir: output_dir.unwrap_or_else(|| "out".to_string()),
            emit_images: emit_images.unwrap_or(true),
            images,
            frame_models: frames,
            methods,
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if self.scale < 2 {
            return Err(ConfigError::general(format!(
                "scale must be at least 2, got {}",
                self.scale
            )));
        }
        if self.images.is_empty() {
            return Err(ConfigError::general("at least one [image] block required"));
        }
        if self.frame_models.is_empty() {
            return Err(ConfigError::general("at least one [frame] block required"));
        }
        if self.methods.is_empty() {
            return Err(ConfigError::general("at least one [method] block required"));
        }
        for (i, img) in self.images.iter().enumerate() {
            for other in &self.images[i + 1..] {
                if img.name == other.name {
                    return Err(ConfigError::general(format!(
                        "duplicate image name '{}'",
                        img.name
                    )));
                }
            }
        }
        for (i, m) in self.methods.iter().enumerate() {
            for other in &self.methods[i + 1..] {
                if m.name() == other.name() {
                    return Err(ConfigError::general(format!(
                        "method '{}' listed twice",
                        m.name()
                    )));
                }
            }
        }
        for model in &self.frame_models {
            model
                .validate()
                .map_err(|e| ConfigError::general(e.to_string()))?;
        }
        Ok(())
    }

    /// Fixed-order, fixed-format re-serialization. Parsing the result
    /// yields an equal config; hashing it yields the digest.
    pub fn canonical_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("scale = {}\n", self.scale));
        s.push_str(&format!("output_dir = {}\n", self.output_dir));
        s.push_str(&format!("emit_images = {}\n", self.emit_images));
        for img in &self.images {
            s.push_str("\n[image]\n");
            s.push_str(&format!("name = {}\n", img.name));
            s.push_str(&format!("path = {}\n", img.path));
        }
        for m in &self.frame_models {
            s.push_str("\n[frame]\n");
            s.push_str(&format!("psf_sigma = {}\n", m.psf_sigma));
            s.push_str(&format!("psf_radius = {}\n", m.psf_radius));
            s.push_str(&format!("shift_dx = {}\n", m.shift.0));
            s.push_str(&format!("shift_dy = {}\n", m.shift.1));
            s.push_str(&format!("decimation = {}\n", m.decimation));
            s.push_str(&format!("noise_sigma = {}\n", m.noise_sigma));
            s.push_str(&format!("noise_seed = {}\n", m.noise_seed));
        }
        for spec in &self.methods {
            s.push_str("\n[method]\n");
            s.push_str(&format!("name = {}\n", spec.name()));
            match spec {
                MethodSpec::Interp(k) => {
                    if k.kind() == KernelKind::Bicubic {
                        s.push_str(&format!("kernel_a = {}\n", k.a()));
                    }
                }
                MethodSpec::IraniPeleg(c) | MethodSpec::Proposed(c) => {
                    s.push_str(&format!("bp_sigma = {}\n", c.bp_sigma));
                    s.push_str(&format!("bp_radius = {}\n", c.bp_radius));
                    s.push_str(&format!("step = {}\n", c.step));
                    s.push_str(&format!("max_iters = {}\n", c.max_iters));
                    s.push_str(&format!("tol = {}\n", c.tol));
                    s.push_str(&format!("clamp_each_iter = {}\n", c.clamp_each_iter));
                }
            }
        }
        s
    }

    /// First 16 hex characters of SHA-256 over the canonical text.
    pub fn digest(&self) -> String {
        let hash = Sha256::digest(self.canonical_text().as_bytes());
        hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}
