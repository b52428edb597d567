//! Renders a built-in scene to a PPM image, or prints its JSON description.
//!
//!     cargo run --release --example render_scene -- directional out.ppm
//!     cargo run --example render_scene -- container --json > container.json

use shadowvol::pipeline::{render_frame, PipelineModes, RenderTarget};
use shadowvol::raster::image::encode_ppm;
use shadowvol::scenes;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let name = args.first().map(String::as_str).unwrap_or("tetrahedron");
    let file = match name {
        "tetrahedron" => scenes::tetrahedron_over_plane(),
        "container" => scenes::light_in_container(),
        "near-plane" => scenes::near_plane_piercing(),
        "eye-in-shadow" => scenes::eye_in_shadow(),
        "directional" => scenes::directional_light(),
        "nested" => scenes::nested_spheres(),
        "area" => scenes::shadow_area(),
        other => {
            eprintln!("unknown scene {other}; try tetrahedron, container, near-plane, eye-in-shadow, directional, nested, area");
            std::process::exit(1);
        }
    };
    match args.get(1).map(String::as_str) {
        Some("--json") => println!("{}", file.to_json()),
        out => {
            let out = out.unwrap_or("scene.ppm");
            let scene = scenes::build(&file)?;
            let frame = render_frame(&scene, &PipelineModes::default(), RenderTarget::default())?;
            std::fs::write(out, encode_ppm(&frame.framebuffer))?;
            let s = &frame.stats;
            println!(
                "wrote {out}: {} volume vertices, {} stencil writes, {} shadow fragments",
                s.volume_vertices_submitted, s.stencil_writes, s.shadow_fragments
            );
        }
    }
    Ok(())
}
