//! Projection with the far plane at infinity: points at infinity in front of
//! the eye land exactly on the far depth, and the depth range barely shrinks.

use shadowvol::hgeom::{
    depth_compression_factor, perspective_finite, perspective_infinite, transform, FarPlane, FrustumParams, HVec4,
};

fn ndc_depth(v: HVec4) -> f64 {
    v.z / v.w
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = FrustumParams::new(60f64.to_radians(), 4.0 / 3.0, 1.0, FarPlane::Finite(100.0));
    let finite = perspective_finite(&params)?;
    let infinite = perspective_infinite(&params)?;
    println!("infinite projection rows:");
    for r in 0..4 {
        println!("  {:?}", infinite.row(r));
    }

    let ahead = HVec4::direction(0.0, 0.0, -1.0);
    println!("\ndirection straight ahead -> depth {}", ndc_depth(transform(&infinite, ahead)));
    let oblique = HVec4::direction(0.3, -0.2, -1.0);
    println!("oblique direction         -> depth {}", ndc_depth(transform(&infinite, oblique)));

    println!("\n{:>10} {:>14} {:>14}", "eye dist", "finite depth", "infinite depth");
    for d in [1.0, 2.0, 10.0, 50.0, 99.0, 1e4] {
        let p = HVec4::point(0.0, 0.0, -d);
        let f = ndc_depth(transform(&finite, p));
        let i = ndc_depth(transform(&infinite, p));
        println!("{d:>10} {f:>14.6} {i:>14.6}");
    }

    for (n, f) in [(1.0, 100.0), (0.1, 1000.0), (1.0, 10.0)] {
        println!("\nnear {n}, far {f}: depth range scaled by {}", depth_compression_factor(n, f));
    }
    Ok(())
}
