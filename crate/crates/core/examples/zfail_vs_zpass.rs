//! Counting from the eye against counting from infinity on a scene whose
//! shadow volume crosses the near plane. Writes both shadow masks and the
//! reference as PGM files into the given directory.
//!
//!     cargo run --release --example zfail_vs_zpass [-- OUT_DIR]

use std::path::PathBuf;

use shadowvol::oracle::{compare_shadow_masks, depth_range, reference_image, rendered_mask};
use shadowvol::pipeline::{render_frame, Formulation, PipelineModes, RenderTarget};
use shadowvol::scenes;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).map(PathBuf::from);
    let scene = scenes::build(&scenes::near_plane_piercing())?;
    let target = RenderTarget { width: 256, height: 256, stencil_bits: 8 };
    let modes = PipelineModes::default();
    let reference = reference_image(&scene, 0, target.width, target.height, depth_range(&scene, modes.projection))?;
    if let Some(dir) = &out {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("reference.pgm"), reference.mask.to_pgm())?;
    }
    for formulation in [Formulation::ZPass, Formulation::ZFail] {
        let modes = PipelineModes { formulation, ..modes };
        let frame = render_frame(&scene, &modes, target)?;
        let mask = rendered_mask(&frame, 0)?;
        let diff = compare_shadow_masks(&mask, &reference.mask)?;
        let wrong_counts = frame.shadow_counts[0]
            .iter()
            .zip(&reference.counts)
            .filter(|(s, r)| r.is_some_and(|r| **s != r))
            .count();
        println!(
            "{formulation:?}: {} mismatched pixels ({} interior), {wrong_counts} pixels with a wrong count",
            diff.mismatches, diff.interior_mismatches
        );
        if let Some(dir) = &out {
            std::fs::write(dir.join(format!("{formulation:?}.pgm").to_lowercase()), mask.to_pgm())?;
        }
    }
    Ok(())
}
