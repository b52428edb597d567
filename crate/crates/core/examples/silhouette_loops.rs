//! Possible silhouette edges of a few meshes, stitched into closed loops.

use shadowvol::hgeom::HVec4;
use shadowvol::mesh::{build_adjacency, classify_facing, extract_silhouette_edges, primitives, stitch_loops, TriMesh};

fn report(name: &str, mesh: &TriMesh, light: HVec4) -> Result<(), Box<dyn std::error::Error>> {
    let adjacency = build_adjacency(mesh)?;
    let facing = classify_facing(&mesh.planes()?, light);
    let edges = extract_silhouette_edges(mesh, &adjacency, &facing);
    let loops = stitch_loops(&edges)?;
    println!(
        "{name}: light {:?}, {} front / {} back triangles, {} silhouette edges in {} loop(s)",
        light.to_array(),
        facing.front_count(),
        facing.back_count(),
        edges.len(),
        loops.len()
    );
    for (i, l) in loops.iter().enumerate() {
        println!("  loop {i}: {:?}", l.vertices());
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    report("cube", &primitives::cube(), HVec4::point(3.0, 4.0, 5.0))?;
    report("cube", &primitives::cube(), HVec4::direction(0.0, 0.0, 1.0))?;
    report("tetrahedron", &primitives::tetrahedron(), HVec4::point(0.0, 5.0, 0.0))?;
    report("icosphere(1)", &primitives::icosphere(1), HVec4::point(0.0, 0.0, 4.0))?;
    // light inside the cavity: rim and inner walls both contribute loops
    report("cup", &primitives::cup(0.2), HVec4::point(0.1, 0.6, 0.05))?;
    Ok(())
}
