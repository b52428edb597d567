//! A finite far plane with depth clamping renders the same image as the
//! infinite projection: volume geometry past the far plane is clamped rather
//! than clipped away.

use shadowvol::pipeline::{render_frame, PipelineModes, Projection, RenderTarget};
use shadowvol::scenes;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let target = RenderTarget { width: 256, height: 256, stencil_bits: 8 };
    let infinite = PipelineModes::default();
    let clamped = PipelineModes { projection: Projection::Finite, depth_clamp: true, ..infinite };
    let unclamped = PipelineModes { projection: Projection::Finite, ..infinite };
    for (name, file) in scenes::hard_cases() {
        let scene = scenes::build(&file)?;
        let reference = render_frame(&scene, &infinite, target)?;
        let count_diff = |modes: &PipelineModes| -> Result<usize, Box<dyn std::error::Error>> {
            let f = render_frame(&scene, modes, target)?;
            Ok(f.framebuffer.color.iter().zip(&reference.framebuffer.color).filter(|(a, b)| a != b).count())
        };
        println!(
            "{name:26} finite+clamp: {:6} differing pixels   finite, no clamp: {:6}",
            count_diff(&clamped)?,
            count_diff(&unclamped)?
        );
    }
    Ok(())
}
