//! Successive half-space clipping in homogeneous clip space.

use super::{ClipVertex, ATTRS};

/// Minimum clip `w` kept when near and far clipping are disabled.
pub const GUARD_W: f64 = 1e-6;

#[derive(Debug, Clone, Copy)]
enum Half {
    Near,
    Far,
    Guard,
    Left,
    Right,
    Bottom,
    Top,
}

impl Half {
    fn distance(self, v: &ClipVertex) -> f64 {
        let p = v.pos;
        match self {
            Half::Near => p.w + p.z,
            Half::Far => p.w - p.z,
            Half::Guard => p.w - GUARD_W,
            Half::Left => p.w + p.x,
            Half::Right => p.w - p.x,
            Half::Bottom => p.w + p.y,
            Half::Top => p.w - p.y,
        }
    }
}

/// Point where segment `a-b` meets the plane. Endpoints are put in a fixed
/// order first so the shared edge of two neighbouring triangles yields the
/// same bits in both.
fn intersect(half: Half, a: &ClipVertex, b: &ClipVertex) -> ClipVertex {
    let (a, b) = if a.pos.bit_key() <= b.pos.bit_key() { (a, b) } else { (b, a) };
    let da = half.distance(a);
    let db = half.distance(b);
    let t = da / (da - db);
    let mut attrs = [0.0; ATTRS];
    for (k, out) in attrs.iter_mut().enumerate() {
        *out = a.attrs[k] + t * (b.attrs[k] - a.attrs[k]);
    }
    ClipVertex { pos: a.pos.lerp(b.pos, t), attrs }
}

fn clip_against(poly: Vec<ClipVertex>, half: Half) -> Vec<ClipVertex> {
    if poly.iter().all(|v| half.distance(v) >= 0.0) {
        return poly;
    }
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 2);
    for i in 0..n {
        let cur = &poly[i];
        let next = &poly[(i + 1) % n];
        let dc = half.distance(cur);
        let dn = half.distance(next);
        if dc >= 0.0 {
            out.push(*cur);
        }
        if (dc >= 0.0) != (dn >= 0.0) {
            out.push(intersect(half, cur, next));
        }
    }
    out
}

/// Clips a convex polygon against the view volume. With `depth_clamp` the near
/// and far planes are replaced by `w >= GUARD_W`.
pub fn clip_polygon(poly: Vec<ClipVertex>, depth_clamp: bool) -> Vec<ClipVertex> {
    let planes: &[Half] = if depth_clamp {
        &[Half::Guard, Half::Left, Half::Right, Half::Bottom, Half::Top]
    } else {
        &[Half::Near, Half::Far, Half::Left, Half::Right, Half::Bottom, Half::Top]
    };
    let mut poly = poly;
    for &h in planes {
        if poly.len() < 3 {
            return Vec::new();
        }
        poly = clip_against(poly, h);
    }
    if poly.len() < 3 {
        return Vec::new();
    }
    poly
}

pub fn clip_triangle(tri: [ClipVertex; 3], depth_clamp: bool) -> Vec<ClipVertex> {
    clip_polygon(tri.to_vec(), depth_clamp)
}
