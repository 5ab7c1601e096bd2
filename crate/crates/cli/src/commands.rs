//! The four subcommands. Each returns `Result<(), CliError>`; `main` turns
//! the error class into the exit code.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

use superres::degrade::{generate_lr_set, DegradationModel, LrFrame};
use superres::ibp::{irani_peleg_sr, IbpTrace};
use superres::interp::resample;
use superres::metrics::{format_db, psnr, ssim, QualityReport, REPORT_CSV_HEADER};
use superres::pipeline::{proposed_sr, MethodSpec};
use superres::pnm::{read_pnm_path, write_pnm_path, PnmMode};
use superres::Image;

use crate::config::BenchConfig;
use crate::error::CliError;
use crate::manifest::{FrameManifest, ManifestFrame};

fn read_config(path: &Path) -> Result<(BenchConfig, PathBuf), CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let config = BenchConfig::parse(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new(".")).to_path_buf();
    Ok((config, base))
}

/// Relative paths inside a config resolve against the config's directory.
fn resolve(base: &Path, p: &str) -> PathBuf {
    let path = Path::new(p);
    if path.is_absolute() {
        path.to_path_buf()
    } else {
        base.join(path)
    }
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn effective_models(config: &BenchConfig, seed_override: Option<u64>) -> Vec<DegradationModel> {
    config
        .frame_models
        .iter()
        .enumerate()
        .map(|(k, m)| {
            let mut m = m.clone();
            if let Some(base) = seed_override {
                m.noise_seed = base + k as u64;
            }
            m
        })
        .collect()
}

/// Synthesizes the LR frame files plus a manifest for every config image.
pub fn cmd_degrade(
    config_path: &Path,
    out_override: Option<&Path>,
    seed_override: Option<u64>,
) -> Result<(), CliError> {
    let (config, base) = read_config(config_path)?;
    let out = out_override
        .map(Path::to_path_buf)
        .unwrap_or_else(|| resolve(&base, &config.output_dir));
    ensure_dir(&out)?;
    let models = effective_models(&config, seed_override);

    for entry in &config.images {
        let hr_path = resolve(&base, &entry.path);
        let hr = read_pnm_path(&hr_path)
            .map_err(CliError::from)
            .map_err(|e| match e {
                CliError::Io(m) => CliError::Io(format!("{}: {m}", hr_path.display())),
                other => other,
            })?;
        let frames = generate_lr_set(&hr, &models)?;

        let mut manifest_frames = Vec::with_capacity(frames.len());
        for (k, frame) in frames.iter().enumerate() {
            let file = format!("{}_f{k}.pgm", entry.name);
            write_pnm_path(&frame.image, PnmMode::Binary, &out.join(&file))?;
            manifest_frames.push(ManifestFrame {
                file,
                model: frame.model.clone(),
            });
        }
        let manifest = FrameManifest {
            image: entry.name.clone(),
            peak: hr.peak(),
            frames: manifest_frames,
        };
        let manifest_path = out.join(format!("{}.manifest", entry.name));
        write_text(&manifest_path, &manifest.to_text())?;
        println!(
            "{}: wrote {} frames + {}",
            entry.name,
            frames.len(),
            manifest_path.display()
        );
    }
    Ok(())
}

fn reconstruct(
    spec: &MethodSpec,
    frames: &[LrFrame],
    scale: usize,
) -> Result<(Image, Option<IbpTrace>), CliError> {
    let out = match spec {
        MethodSpec::Interp(kernel) => {
            (resample(&frames[0].image, scale as f64, (0.0, 0.0), kernel)?, None)
        }
        MethodSpec::IraniPeleg(config) => {
            let (w, h) = frames[0].image.dims();
            let (img, trace) = irani_peleg_sr(frames, (w * scale, h * scale), config)?;
            (img, Some(trace))
        }
        MethodSpec::Proposed(config) => {
            let (img, trace) = proposed_sr(frames, scale, config)?;
            (img, Some(trace))
        }
    };
    Ok(out)
}

/// Reconstructs one HR image from a degraded frame set.
pub fn cmd_sr(
    manifest_path: &Path,
    method: &str,
    scale: usize,
    out_file: &Path,
) -> Result<(), CliError> {
    if scale < 2 {
        return Err(CliError::Config(format!(
            "scale must be at least 2, got {scale}"
        )));
    }
    let text = fs::read_to_string(manifest_path)
        .map_err(|e| CliError::Io(format!("{}: {e}", manifest_path.display())))?;
    let manifest = FrameManifest::parse(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", manifest_path.display())))?;
    let dir = manifest_path.parent().unwrap_or(Path::new("."));
    let frames = manifest.load_frames(dir)?;
    let spec = MethodSpec::from_name(method)?;

    let (image, trace) = reconstruct(&spec, &frames, scale)?;
    if let Some(parent) = out_file.parent() {
        if !parent.as_os_str().is_empty() {
            ensure_dir(parent)?;
        }
    }
    write_pnm_path(&image, PnmMode::Binary, out_file)?;
    if let Some(trace) = &trace {
        println!(
            "iterations_run={} stop_reason={}",
            trace.iterations_run, trace.stop_reason
        );
    }
    println!("wrote {}", out_file.display());
    Ok(())
}

/// Scores one image against a reference.
pub fn cmd_metrics(reference: &Path, test: &Path) -> Result<(), CliError> {
    let r = read_pnm_path(reference)
        .map_err(|e| CliError::Io(format!("{}: {e}", reference.display())))?;
    let t =
        read_pnm_path(test).map_err(|e| CliError::Io(format!("{}: {e}", test.display())))?;
    let p = psnr(&r, &t)?;
    let s = ssim(&r, &t)?;
    println!("psnr_db={}", format_db(p));
    println!("ssim={s:.6}");
    Ok(())
}

struct CellOutcome {
    image: String,
    method: String,
    report: Option<QualityReport>,
    status: String,
}

/// Run-wide settings shared by every benchmark cell.
struct BenchCtx<'a> {
    scale: usize,
    digest: &'a str,
    out: &'a Path,
    emit_images: bool,
}

fn run_cell(entry_name: &str, hr: &Image, frames: &[LrFrame], spec: &MethodSpec, ctx: &BenchCtx) -> CellOutcome {
    let fail = |msg: String| CellOutcome {
        image: entry_name.to_string(),
        method: spec.name().to_string(),
        report: None,
        status: msg.replace(',', ";").replace('\n', " "),
    };

    let started = Instant::now();
    let (image, trace) = match reconstruct(spec, frames, ctx.scale) {
        Ok(v) => v,
        Err(e) => return fail(e.to_string()),
    };
    let runtime_ms = started.elapsed().as_secs_f64() * 1e3;

    let psnr_db = match psnr(hr, &image) {
        Ok(v) => v,
        Err(e) => return fail(e.to_string()),
    };
    let ssim_val = match ssim(hr, &image) {
        Ok(v) => v,
        Err(e) => return fail(e.to_string()),
    };

    if ctx.emit_images {
        let path = ctx.out.join(format!("{entry_name}_{}.pgm", spec.name()));
        if let Err(e) = write_pnm_path(&image, PnmMode::Binary, &path) {
            return fail(e.to_string());
        }
    }
    if let Some(trace) = &trace {
        let path = ctx.out.join(format!("{entry_name}_{}_trace.csv", spec.name()));
        if let Err(e) = fs::write(&path, trace.to_csv()) {
            return fail(format!("{}: {e}", path.display()));
        }
    }

    CellOutcome {
        image: entry_name.to_string(),
        method: spec.name().to_string(),
        report: Some(QualityReport {
            image: entry_name.to_string(),
            method: spec.name().to_string(),
            psnr_db,
            ssim: ssim_val,
            runtime_ms,
            config_digest: ctx.digest.to_string(),
        }),
        status: "ok".to_string(),
    }
}

/// Full benchmark: degrade + reconstruct + score every (image, method)
/// pair, write one CSV report plus per-method artifacts.
///
/// LR frames are passed to the methods exactly as a degrade-then-sr file
/// round trip would deliver them (quantized to the PGM integer grid), so
/// the CSV is reproducible from the emitted artifacts alone.
pub fn cmd_bench(config_path: &Path, out_override: Option<&Path>) -> Result<(), CliError> {
    let (config, base) = read_config(config_path)?;
    let out = out_override
        .map(Path::to_path_buf)
        .unwrap_or_else(|| resolve(&base, &config.output_dir));
    ensure_dir(&out)?;
    let digest = config.digest();
    let models = effective_models(&config, None);

    // Degrade once per image, sequentially: cheap, deterministic, shared
    // by every method cell.
    let mut inputs = Vec::new();
    for entry in &config.images {
        let hr_path = resolve(&base, &entry.path);
        let hr = read_pnm_path(&hr_path)
            .map_err(|e| CliError::Io(format!("{}: {e}", hr_path.display())))?;
        let frames: Vec<LrFrame> = generate_lr_set(&hr, &models)?
            .into_iter()
            .map(|f| LrFrame {
                image: f.image.quantized(),
                model: f.model,
            })
            .collect();
        inputs.push((entry.name.clone(), hr, frames));
    }

    let cells: Vec<(usize, usize)> = (0..inputs.len())
        .flat_map(|i| (0..config.methods.len()).map(move |m| (i, m)))
        .collect();
    let mut outcomes: Vec<CellOutcome> = cells
        .par_iter()
        .map(|&(i, m)| {
            let (name, hr, frames) = &inputs[i];
            run_cell(
                name,
                hr,
                frames,
                &config.methods[m],
                &BenchCtx {
                    scale: config.scale,
                    digest: &digest,
                    out: &out,
                    emit_images: config.emit_images,
                },
            )
        })
        .collect();

    // Single writer, canonical order: rows sorted by image then method.
    outcomes.sort_by(|a, b| (&a.image, &a.method).cmp(&(&b.image, &b.method)));
    let mut csv = String::new();
    csv.push_str(REPORT_CSV_HEADER);
    csv.push_str(",status\n");
    let mut failures = 0usize;
    for cell in &outcomes {
        match &cell.report {
            Some(report) => {
                csv.push_str(&report.to_csv_row());
                csv.push_str(",ok\n");
            }
            None => {
                failures += 1;
                csv.push_str(&format!(
                    "{},{},,,,{},{}\n",
                    cell.image, cell.method, digest, cell.status
                ));
            }
        }
    }
    let report_path = out.join("report.csv");
    write_text(&report_path, &csv)?;

    print!("{csv}");
    println!(
        "wrote {} ({} cells, {} failed)",
        report_path.display(),
        outcomes.len(),
        failures
    );
    Ok(())
}
