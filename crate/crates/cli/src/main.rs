use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use superres_cli::commands;

/// Multi-frame super-resolution toolkit: synthesize degraded frame sets,
/// reconstruct them, and score the results.
#[derive(Parser)]
#[command(name = "superres", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize LR frames + manifest from each configured HR image.
    Degrade {
        /// Benchmark config file.
        #[arg(long)]
        config: PathBuf,
        /// Output directory (overrides the config's output_dir).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Replace frame noise seeds with seed, seed+1, ...
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Reconstruct one HR image from a frame manifest.
    Sr {
        /// Manifest written by the degrade command.
        manifest: PathBuf,
        /// Reconstruction method name.
        #[arg(long)]
        method: String,
        /// Upscaling factor.
        #[arg(long, default_value_t = 2)]
        scale: usize,
        /// Output PGM path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Score a test image against a reference (PSNR, SSIM).
    Metrics {
        /// Ground-truth image.
        reference: PathBuf,
        /// Image under test.
        test: PathBuf,
    },
    /// Run every (image, method) cell and write a CSV report.
    Bench {
        /// Benchmark config file.
        #[arg(long)]
        config: PathBuf,
        /// Output directory (overrides the config's output_dir).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            // Bad invocations are configuration errors (exit 1), not the
            // clap default of 2, matching the documented code table.
            eprint!("{e}");
            return ExitCode::from(1);
        }
        Err(e) => {
            // --help / --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };

    let result = match &cli.command {
        Command::Degrade { config, out, seed } => {
            commands::cmd_degrade(config, out.as_deref(), *seed)
        }
        Command::Sr {
            manifest,
            method,
            scale,
            out,
        } => commands::cmd_sr(manifest, method, *scale, out),
        Command::Metrics { reference, test } => commands::cmd_metrics(reference, test),
        Command::Bench { config, out } => commands::cmd_bench(config, out.as_deref()),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
