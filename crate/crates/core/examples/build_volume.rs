//! Builds the shadow volume of a cube for a point and a directional light in
//! each encoding, checks closure, and writes one volume as OBJ.
//!
//!     cargo run --example build_volume [-- out.obj]

use shadowvol::hgeom::HVec4;
use shadowvol::mesh::{build_adjacency, classify_facing, primitives};
use shadowvol::volume::{build_shadow_volume, is_closed, Encoding, VolumeOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mesh = primitives::cube();
    let adjacency = build_adjacency(&mesh)?;
    let planes = mesh.planes()?;
    for light in [HVec4::point(2.0, 3.0, 4.0), HVec4::direction(0.2, 1.0, 0.3)] {
        let facing = classify_facing(&planes, light);
        println!("light {:?}", light.to_array());
        for encoding in [Encoding::Independent, Encoding::Strips, Encoding::Fans] {
            let opts = VolumeOptions { encoding, drop_directional_back_cap: false };
            match build_shadow_volume(&mesh, &adjacency, &facing, light, opts) {
                Ok(v) => println!(
                    "  {encoding:?}: loops {:?}, side vertices {}, caps {} front / {} back, closed {}",
                    v.loop_lengths,
                    v.side_vertex_count(),
                    v.front_cap.len(),
                    v.back_cap.len(),
                    is_closed(&v)
                ),
                Err(e) => println!("  {encoding:?}: {e}"),
            }
        }
    }

    if let Some(path) = std::env::args().nth(1) {
        let light = HVec4::point(2.0, 3.0, 4.0);
        let facing = classify_facing(&planes, light);
        let v = build_shadow_volume(&mesh, &adjacency, &facing, light, VolumeOptions::default())?;
        std::fs::write(&path, v.to_obj())?;
        println!("wrote {path}");
    }
    Ok(())
}
