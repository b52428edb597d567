//! Renders the built-in hard cases and compares each shadow mask with the
//! ray-cast reference.
//!
//!     cargo run --release --example verify_against_oracle [-- SIZE]

use shadowvol::cli::verify_frame;
use shadowvol::pipeline::{render_frame, Formulation, PipelineModes, RenderTarget};
use shadowvol::scenes;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let size: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(256);
    let target = RenderTarget { width: size, height: size, stencil_bits: 8 };
    let mut cases = scenes::hard_cases();
    cases.push(("nested_spheres", scenes::nested_spheres()));
    for (name, file) in cases {
        let scene = scenes::build(&file)?;
        for formulation in [Formulation::ZFail, Formulation::ZPass] {
            let modes = PipelineModes { formulation, ..Default::default() };
            let frame = render_frame(&scene, &modes, target)?;
            let v = verify_frame(&scene, &frame, modes.projection)?;
            println!(
                "{name:26} {formulation:?}\tinterior {:6}  boundary {:5}/{:<6} count mismatches {:6}  {}",
                v.interior_mismatches,
                v.boundary_mismatches,
                v.boundary_pixels,
                v.count_mismatches,
                if v.passed { "ok" } else { "MISMATCH" },
            );
        }
    }
    Ok(())
}
