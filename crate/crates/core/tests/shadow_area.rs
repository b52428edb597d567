//! The rendered shadow of a tetrahedron on a floor, seen from straight above,
//! against the area of the light's projection of its vertices.

use shadowvol::oracle::{convex_hull, polygon_area, project_onto_floor, rendered_mask, MaskValue};
use shadowvol::pipeline::{render_frame, PipelineModes, RenderTarget};
use shadowvol::hgeom::transform;
use shadowvol::mesh::primitives::tetrahedron;
use shadowvol::scenes::{self, AREA_EYE_HEIGHT, AREA_FOV_Y_DEGREES, AREA_LIGHT};

const SIZE: usize = 512;

fn floor_x(px: usize) -> f64 {
    let half = AREA_EYE_HEIGHT * (AREA_FOV_Y_DEGREES.to_radians() / 2.0).tan();
    2.0 + ((px as f64 + 0.5) / SIZE as f64 * 2.0 - 1.0) * half
}

#[test]
fn shadow_area_matches_projected_polygon() {
    let scene = scenes::build(&scenes::shadow_area()).unwrap();
    let frame = render_frame(&scene, &PipelineModes::default(), RenderTarget { width: SIZE, height: SIZE, stencil_bits: 8 }).unwrap();
    let mask = rendered_mask(&frame, 0).unwrap();

    // the occluder itself stays left of x = 0.5, its shadow to the right
    let in_shadow = |x: usize, y: usize| floor_x(x) > 0.5 && mask.get(x, y) == MaskValue::Shadowed;
    let pixels: Vec<(usize, usize)> =
        (0..SIZE).flat_map(|y| (0..SIZE).map(move |x| (x, y))).filter(|&(x, y)| in_shadow(x, y)).collect();
    assert!(!pixels.is_empty());

    // one connected region
    let mut seen = vec![false; SIZE * SIZE];
    let mut stack = vec![pixels[0]];
    let mut reached = 0;
    while let Some((x, y)) = stack.pop() {
        if seen[y * SIZE + x] || !in_shadow(x, y) {
            continue;
        }
        seen[y * SIZE + x] = true;
        reached += 1;
        if x > 0 { stack.push((x - 1, y)); }
        if y > 0 { stack.push((x, y - 1)); }
        if x + 1 < SIZE { stack.push((x + 1, y)); }
        if y + 1 < SIZE { stack.push((x, y + 1)); }
    }
    assert_eq!(reached, pixels.len(), "shadow is not connected");

    let pixel_side = 2.0 * AREA_EYE_HEIGHT * (AREA_FOV_Y_DEGREES.to_radians() / 2.0).tan() / SIZE as f64;
    let rendered = pixels.len() as f64 * pixel_side * pixel_side;

    let m = scenes::area_tetrahedron().matrix();
    let footprint: Vec<[f64; 2]> = tetrahedron()
        .vertices
        .iter()
        .map(|v| project_onto_floor(transform(&m, *v).xyz(), AREA_LIGHT, 0.0))
        .collect();
    let analytic = polygon_area(&convex_hull(footprint)).abs();
    let rel = (rendered - analytic).abs() / analytic;
    println!("shadow area: rendered {rendered:.5}, analytic {analytic:.5}, relative error {rel:.5}");
    assert!(rel < 0.02, "rendered {rendered}, analytic {analytic}, relative error {rel}");
}
