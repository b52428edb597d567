//! Triangle setup and scan conversion on a fixed-point window grid.
//!
//! Window coordinates are snapped to `1 / 2^SUBPIXEL_BITS` of a pixel and
//! edge functions are evaluated exactly in integers, so two triangles sharing
//! an edge never both claim, or both miss, a pixel center on that edge.

use super::clip::clip_polygon;
use super::{
    apply_fragment_ops, ClipVertex, CullMode, Fragment, Framebuffer, Orientation, RasterStats, RenderState, ATTRS,
};

pub const SUBPIXEL_BITS: u32 = 16;
const ONE: i64 = 1 << SUBPIXEL_BITS;
const HALF: i64 = ONE / 2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowVertex {
    /// Fixed-point window position, y up.
    pub x: i64,
    pub y: i64,
    /// Window depth `z/w * 0.5 + 0.5`.
    pub depth: f64,
    pub inv_w: f64,
    pub attrs: [f64; ATTRS],
}

pub fn snap(v: f64) -> i64 {
    (v * ONE as f64).round() as i64
}

/// Perspective divide and viewport transform. `v.pos.w` must be positive.
pub fn to_window(v: &ClipVertex, width: usize, height: usize) -> WindowVertex {
    let inv_w = 1.0 / v.pos.w;
    let nx = v.pos.x * inv_w;
    let ny = v.pos.y * inv_w;
    let x = snap((nx * 0.5 + 0.5) * width as f64).clamp(0, width as i64 * ONE);
    let y = snap((ny * 0.5 + 0.5) * height as f64).clamp(0, height as i64 * ONE);
    WindowVertex { x, y, depth: v.pos.z * inv_w * 0.5 + 0.5, inv_w, attrs: v.attrs }
}

/// Orientation of three window positions: counterclockwise in a y-up window
/// is front-facing.
pub fn face_orientation(p: [[f64; 2]; 3]) -> Orientation {
    let area = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]);
    let scale = p.iter().flat_map(|q| q.iter()).fold(1.0f64, |m, v| m.max(v.abs()));
    if area.abs() <= 1e-12 * scale * scale {
        Orientation::Degenerate
    } else if area > 0.0 {
        Orientation::Front
    } else {
        Orientation::Back
    }
}

fn edge(a: &WindowVertex, b: &WindowVertex, px: i64, py: i64) -> i64 {
    (b.x - a.x) * (py - a.y) - (b.y - a.y) * (px - a.x)
}

fn doubled_area(v: &[WindowVertex; 3]) -> i64 {
    edge(&v[0], &v[1], v[2].x, v[2].y)
}

/// Top-left rule for a counterclockwise, y-up triangle: pixel centers exactly
/// on a left or top edge belong to the triangle.
fn owns_boundary(a: &WindowVertex, b: &WindowVertex) -> bool {
    let dy = b.y - a.y;
    dy < 0 || (dy == 0 && b.x < a.x)
}

fn orientation_of(area: i128) -> Orientation {
    match area.signum() {
        1 => Orientation::Front,
        -1 => Orientation::Back,
        _ => Orientation::Degenerate,
    }
}

fn culled(o: Orientation, cull: CullMode) -> bool {
    matches!((o, cull), (Orientation::Degenerate, _) | (Orientation::Front, CullMode::Front) | (Orientation::Back, CullMode::Back))
}

/// Clips, culls and rasterizes one clip-space triangle, running the fragment
/// operations for every covered pixel center.
pub fn draw_triangle(
    fb: &mut Framebuffer,
    state: &RenderState,
    tri: [ClipVertex; 3],
    shader: &mut dyn FnMut(&Fragment) -> [f64; 3],
    stats: &mut RasterStats,
) {
    let keys = tri.map(|v| v.pos.bit_key());
    if keys[0] == keys[1] || keys[1] == keys[2] || keys[0] == keys[2] {
        return;
    }
    // Same triangle, any rotation: same clipped polygon and fan.
    let r = (0..3).min_by_key(|&i| keys[i]).unwrap_or(0);
    let tri = [tri[r], tri[(r + 1) % 3], tri[(r + 2) % 3]];
    let poly = clip_polygon(tri.to_vec(), state.depth_clamp);
    if poly.len() < 3 || poly.iter().any(|v| !(v.pos.w > 0.0)) {
        return;
    }
    let win: Vec<WindowVertex> = poly.iter().map(|v| to_window(v, fb.width(), fb.height())).collect();
    let fan: Vec<[WindowVertex; 3]> = (1..win.len() - 1).map(|i| [win[0], win[i], win[i + 1]]).collect();
    let total: i128 = fan.iter().map(|t| doubled_area(t) as i128).sum();
    let orientation = orientation_of(total);
    if culled(orientation, state.cull) {
        return;
    }
    stats.triangles += 1;
    for t in fan {
        // Snapping can fold a sliver of the fan backwards; such a piece is dropped.
        if orientation_of(doubled_area(&t) as i128) != orientation {
            continue;
        }
        scan(fb, state, t, orientation, shader, stats);
    }
}

fn scan(
    fb: &mut Framebuffer,
    state: &RenderState,
    mut v: [WindowVertex; 3],
    orientation: Orientation,
    shader: &mut dyn FnMut(&Fragment) -> [f64; 3],
    stats: &mut RasterStats,
) {
    if doubled_area(&v) < 0 {
        v.swap(1, 2);
    }
    let first = (0..3).min_by_key(|&i| (v[i].y, v[i].x)).unwrap_or(0);
    let v = [v[first], v[(first + 1) % 3], v[(first + 2) % 3]];
    let area = doubled_area(&v);
    if area <= 0 {
        return;
    }
    let inv_area = 1.0 / area as f64;
    let bias = [
        if owns_boundary(&v[1], &v[2]) { 0 } else { 1 },
        if owns_boundary(&v[2], &v[0]) { 0 } else { 1 },
        if owns_boundary(&v[0], &v[1]) { 0 } else { 1 },
    ];
    let min_x = v.iter().map(|p| p.x).min().unwrap_or(0);
    let max_x = v.iter().map(|p| p.x).max().unwrap_or(0);
    let min_y = v.iter().map(|p| p.y).min().unwrap_or(0);
    let max_y = v.iter().map(|p| p.y).max().unwrap_or(0);
    let x0 = (min_x >> SUBPIXEL_BITS).max(0) as usize;
    let x1 = ((max_x >> SUBPIXEL_BITS) as usize).min(fb.width() - 1);
    let y0 = (min_y >> SUBPIXEL_BITS).max(0) as usize;
    let y1 = ((max_y >> SUBPIXEL_BITS) as usize).min(fb.height() - 1);
    let dz1 = v[1].depth - v[0].depth;
    let dz2 = v[2].depth - v[0].depth;
    let (zmin, zmax) = (0.0, 1.0);

    for j in y0..=y1 {
        let py = j as i64 * ONE + HALF;
        for i in x0..=x1 {
            let px = i as i64 * ONE + HALF;
            let e0 = edge(&v[1], &v[2], px, py);
            let e1 = edge(&v[2], &v[0], px, py);
            let e2 = edge(&v[0], &v[1], px, py);
            if e0 < bias[0] || e1 < bias[1] || e2 < bias[2] {
                continue;
            }
            let l1 = e1 as f64 * inv_area;
            let l2 = e2 as f64 * inv_area;
            let l0 = e0 as f64 * inv_area;
            let depth = (v[0].depth + l1 * dz1 + l2 * dz2).clamp(zmin, zmax);
            let q = [l0 * v[0].inv_w, l1 * v[1].inv_w, l2 * v[2].inv_w];
            let qs = q[0] + q[1] + q[2];
            let mut attrs = [0.0; ATTRS];
            for (k, a) in attrs.iter_mut().enumerate() {
                *a = (q[0] * v[0].attrs[k] + q[1] * v[1].attrs[k] + q[2] * v[2].attrs[k]) / qs;
            }
            let frag = Fragment { x: i, y: j, depth, attrs, orientation };
            stats.fragments += 1;
            apply_fragment_ops(fb, state, &frag, shader, stats);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hgeom::{perspective_infinite, transform, FarPlane, FrustumParams, HMat4, HVec4};
    use crate::raster::{BlendMode, StencilFaceState, StencilOp};
    use proptest::prelude::*;

    fn ndc(x: f64, y: f64, z: f64) -> ClipVertex {
        ClipVertex::new(HVec4::new(x, y, z, 1.0))
    }

    fn counting_state() -> RenderState {
        RenderState {
            depth_test: false,
            depth_write: false,
            color_write: false,
            stencil_test: true,
            stencil_front: StencilFaceState::ops(StencilOp::IncrWrap, StencilOp::IncrWrap),
            ..Default::default()
        }
    }

    fn none(_: &Fragment) -> [f64; 3] {
        [0.0; 3]
    }

    #[test]
    fn orientation_examples() {
        assert_eq!(face_orientation([[0.0, 0.0], [4.0, 0.0], [0.0, 4.0]]), Orientation::Front);
        assert_eq!(face_orientation([[0.0, 0.0], [0.0, 4.0], [4.0, 0.0]]), Orientation::Back);
        assert_eq!(face_orientation([[0.0, 0.0], [1.0, 1.0], [3.0, 3.0]]), Orientation::Degenerate);
    }

    #[test]
    fn shared_edge_is_covered_exactly_once() {
        let mut fb = Framebuffer::new(32, 32, 8).unwrap();
        let st = counting_state();
        let mut s = RasterStats::default();
        let a = ndc(-0.9, -0.8, 0.0);
        let b = ndc(0.7, 0.9, 0.0);
        let c = ndc(0.8, -0.9, 0.0);
        let d = ndc(-0.8, 0.75, 0.0);
        draw_triangle(&mut fb, &st, [a, c, b], &mut none, &mut s);
        draw_triangle(&mut fb, &st, [a, b, d], &mut none, &mut s);
        assert!(fb.stencil.iter().all(|&v| v <= 1));
        // Pixel centers exactly on the diagonal of a square split in two.
        let mut fb = Framebuffer::new(8, 8, 8).unwrap();
        let (p, q, r, t) = (ndc(-1.0, -1.0, 0.0), ndc(1.0, -1.0, 0.0), ndc(1.0, 1.0, 0.0), ndc(-1.0, 1.0, 0.0));
        draw_triangle(&mut fb, &st, [p, q, r], &mut none, &mut s);
        draw_triangle(&mut fb, &st, [p, r, t], &mut none, &mut s);
        assert!(fb.stencil.iter().all(|&v| v == 1));
    }

    #[test]
    fn full_screen_replace() {
        let mut fb = Framebuffer::new(16, 8, 8).unwrap();
        let st = RenderState { blend: BlendMode::Replace, ..Default::default() };
        let mut s = RasterStats::default();
        let mut shade = |_: &Fragment| [0.2, 0.4, 0.6];
        draw_triangle(&mut fb, &st, [ndc(-1.0, -1.0, 0.0), ndc(3.0, -1.0, 0.0), ndc(-1.0, 3.0, 0.0)], &mut shade, &mut s);
        assert!(fb.color.iter().all(|c| *c == [0.2, 0.4, 0.6]));
        assert!(fb.depth.iter().all(|d| *d == 0.5));
    }

    #[test]
    fn culling_by_window_orientation() {
        let st = RenderState { cull: CullMode::Back, ..counting_state() };
        let mut s = RasterStats::default();
        let mut fb = Framebuffer::new(8, 8, 8).unwrap();
        draw_triangle(&mut fb, &st, [ndc(-1.0, -1.0, 0.0), ndc(-1.0, 1.0, 0.0), ndc(1.0, -1.0, 0.0)], &mut none, &mut s);
        assert!(fb.stencil.iter().all(|&v| v == 0));
        draw_triangle(&mut fb, &st, [ndc(-1.0, -1.0, 0.0), ndc(1.0, -1.0, 0.0), ndc(-1.0, 1.0, 0.0)], &mut none, &mut s);
        assert!(fb.stencil.contains(&1));
    }

    #[test]
    fn infinite_vertex_depth_approaches_one() {
        let proj = perspective_infinite(&FrustumParams::new(1.0, 1.0, 0.5, FarPlane::Infinite)).unwrap();
        let tri = [HVec4::point(-1.0, -1.0, -3.0), HVec4::point(1.0, -1.0, -3.0), HVec4::direction(0.0, 0.2, -1.0)]
            .map(|p| ClipVertex::new(transform(&proj, p)));
        let mut fb = Framebuffer::new(64, 64, 8).unwrap();
        let st = RenderState::default();
        let mut s = RasterStats::default();
        draw_triangle(&mut fb, &st, tri, &mut none, &mut s);
        let written: Vec<f64> = fb.depth.iter().copied().filter(|d| *d < 1.0).collect();
        assert!(!written.is_empty());
        assert!(written.iter().all(|d| *d <= 1.0));
        let top = written.iter().cloned().fold(0.0, f64::max);
        assert!(top > 0.99, "{top}");
    }

    #[test]
    fn attributes_are_perspective_correct() {
        // A plane receding in depth; the attribute is the eye-space z.
        let proj = perspective_infinite(&FrustumParams::new(1.2, 1.0, 0.5, FarPlane::Infinite)).unwrap();
        let pts = [HVec4::point(-4.0, -1.0, -1.0), HVec4::point(4.0, -1.0, -1.0), HVec4::point(0.0, -1.0, -30.0)];
        let tri = pts.map(|p| {
            let mut v = ClipVertex::new(transform(&proj, p));
            v.attrs[0] = p.z;
            v.attrs[1] = p.y;
            v
        });
        let mut fb = Framebuffer::new(64, 64, 8).unwrap();
        let st = RenderState::default();
        let mut s = RasterStats::default();
        let mut checked = 0;
        let mut check = |f: &Fragment| {
            // The eye ray through this pixel hits y = -1 at the interpolated z.
            let ny = (f.y as f64 + 0.5) / 32.0 - 1.0;
            let t = (1.2f64 * 0.5).tan();
            let expected_z = -1.0 / (-ny * t);
            assert!((f.attrs[0] - expected_z).abs() < 1e-6 * expected_z.abs().max(1.0), "{} {}", f.attrs[0], expected_z);
            assert!((f.attrs[1] + 1.0).abs() < 1e-9);
            checked += 1;
            [0.0; 3]
        };
        draw_triangle(&mut fb, &st, tri, &mut check, &mut s);
        assert!(checked > 100);
    }

    fn brute_count(fb_w: usize, fb_h: usize, tris: &[[ClipVertex; 3]]) -> Vec<u32> {
        let mut out = vec![0u32; fb_w * fb_h];
        for t in tris {
            let w = t.map(|v| to_window(&v, fb_w, fb_h));
            let (a, b, c) = if doubled_area(&w) > 0 { (w[0], w[1], w[2]) } else { (w[0], w[2], w[1]) };
            if doubled_area(&[a, b, c]) == 0 {
                continue;
            }
            for j in 0..fb_h {
                for i in 0..fb_w {
                    let (px, py) = (i as i64 * ONE + HALF, j as i64 * ONE + HALF);
                    let inside = |p: &WindowVertex, q: &WindowVertex| {
                        let e = edge(p, q, px, py);
                        e > 0 || (e == 0 && owns_boundary(p, q))
                    };
                    if inside(&a, &b) && inside(&b, &c) && inside(&c, &a) {
                        out[j * fb_w + i] += 1;
                    }
                }
            }
        }
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn random_closed_meshes_count_exactly(
            angles in proptest::array::uniform3(0.0f64..6.3),
            scale in 0.3f64..0.7,
            jitter in proptest::collection::vec(0.85f64..1.15, 42),
            offset in proptest::array::uniform2(-0.15f64..0.15),
        ) {
            let mut mesh = crate::mesh::primitives::icosphere(1);
            for (v, j) in mesh.vertices.iter_mut().zip(jitter.iter()) {
                *v = HVec4::point(v.x * j, v.y * j, v.z * j);
            }
            let m = HMat4::translation([offset[0], offset[1], 0.0])
                * HMat4::rotation_x(angles[0]) * HMat4::rotation_y(angles[1]) * HMat4::rotation_z(angles[2])
                * HMat4::scale([scale, scale, scale]);
            let tris: Vec<[ClipVertex; 3]> = (0..mesh.triangles.len())
                .map(|t| mesh.triangle_vertices(t).map(|p| ClipVertex::new(transform(&m, p))))
                .collect();
            let (w, h) = (40, 36);
            let mut fb = Framebuffer::new(w, h, 8).unwrap();
            let mut s = RasterStats::default();
            for t in &tris { draw_triangle(&mut fb, &counting_state(), *t, &mut none, &mut s); }
            prop_assert_eq!(&fb.stencil, &brute_count(w, h, &tris));
            // front and back coverings cancel for a closed surface
            let mut front = Framebuffer::new(w, h, 8).unwrap();
            let mut back = Framebuffer::new(w, h, 8).unwrap();
            for t in &tris {
                draw_triangle(&mut front, &RenderState { cull: CullMode::Back, ..counting_state() }, *t, &mut none, &mut s);
                draw_triangle(&mut back, &RenderState { cull: CullMode::Front, ..counting_state() }, *t, &mut none, &mut s);
            }
            prop_assert_eq!(&front.stencil, &back.stencil);
        }
    }
}
