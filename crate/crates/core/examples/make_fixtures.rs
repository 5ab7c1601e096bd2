//! Regenerates the checked-in fixture images (ASCII PGM, 64x64).

use std::path::Path;

use superres::pnm::{write_pnm_path, PnmMode};
use superres::synth::{checkerboard, gaussian_blobs, gradient};

fn main() -> superres::Result<()> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "fixtures".into());
    let dir = Path::new(&dir);
    std::fs::create_dir_all(dir)?;
    write_pnm_path(
        &gradient(64, 64, 255.0),
        PnmMode::Ascii,
        &dir.join("gradient.pgm"),
    )?;
    write_pnm_path(
        &checkerboard(64, 64, 8, 255.0),
        PnmMode::Ascii,
        &dir.join("checkerboard.pgm"),
    )?;
    write_pnm_path(
        &gaussian_blobs(64, 64, 255.0),
        PnmMode::Ascii,
        &dir.join("blobs.pgm"),
    )?;
    println!("fixtures written to {}", dir.display());
    Ok(())
}
