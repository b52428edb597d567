//! Ray-cast ground truth for shadow masks and shadow depth counts.
//!
//! Everything here works on world-space triangles and camera parameters
//! directly; no stencil, clipping or projection code is involved.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hgeom::{cross3, normalize3, scale3, sub3, HVec4};
use crate::pipeline::{Frame, Scene};
use crate::raster::image::encode_pgm;

/// Offset along the surface normal before casting a shadow ray.
pub const SHADOW_RAY_OFFSET: f64 = 1e-7;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("mask sizes differ: {0}x{1} vs {2}x{3}")]
    SizeMismatch(usize, usize, usize, usize),
    #[error("light index {0} out of range")]
    NoSuchLight(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MaskValue {
    Lit,
    Shadowed,
    NoGeometry,
}

impl MaskValue {
    pub fn gray(self) -> u8 {
        match self {
            MaskValue::Lit => 255,
            MaskValue::Shadowed => 0,
            MaskValue::NoGeometry => 128,
        }
    }
}

/// Per-pixel classification, rows bottom-up like the framebuffer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShadowMask {
    pub width: usize,
    pub height: usize,
    pub cells: Vec<MaskValue>,
}

impl ShadowMask {
    pub fn get(&self, x: usize, y: usize) -> MaskValue {
        self.cells[y * self.width + x]
    }

    pub fn count(&self, v: MaskValue) -> usize {
        self.cells.iter().filter(|c| **c == v).count()
    }

    pub fn to_pgm(&self) -> Vec<u8> {
        encode_pgm(self.width, self.height, 255, |x, y| self.get(x, y).gray() as u16)
    }

    /// True when some 8-neighbour holds a different value.
    pub fn on_boundary(&self, x: usize, y: usize) -> bool {
        let v = self.get(x, y);
        for dy in -1i64..=1 {
            for dx in -1i64..=1 {
                let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                if (dx, dy) == (0, 0) || nx < 0 || ny < 0 || nx >= self.width as i64 || ny >= self.height as i64 {
                    continue;
                }
                if self.get(nx as usize, ny as usize) != v {
                    return true;
                }
            }
        }
        false
    }
}

/// Mask read back from a rendered frame: untouched depth means no geometry,
/// a nonzero post-volume stencil means shadowed.
pub fn rendered_mask(frame: &Frame, light: usize) -> Result<ShadowMask, OracleError> {
    let counts = frame.shadow_counts.get(light).ok_or(OracleError::NoSuchLight(light))?;
    let fb = &frame.framebuffer;
    let cells = fb
        .depth
        .iter()
        .zip(counts)
        .map(|(d, c)| match (*d >= 1.0, *c) {
            (true, _) => MaskValue::NoGeometry,
            (false, 0) => MaskValue::Lit,
            _ => MaskValue::Shadowed,
        })
        .collect();
    Ok(ShadowMask { width: fb.width(), height: fb.height(), cells })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DiffReport {
    pub mismatches: usize,
    /// Mismatches whose reference pixel sits next to a different value.
    pub boundary_mismatches: usize,
    pub interior_mismatches: usize,
    /// Reference pixels with a differing 8-neighbour.
    pub boundary_pixels: usize,
    /// Largest difference between the masks' gray codes.
    pub max_channel_delta: u8,
}

impl DiffReport {
    pub fn boundary_fraction(&self) -> f64 {
        if self.boundary_pixels == 0 {
            0.0
        } else {
            self.boundary_mismatches as f64 / self.boundary_pixels as f64
        }
    }

    pub fn merge(&mut self, o: &DiffReport) {
        self.mismatches += o.mismatches;
        self.boundary_mismatches += o.boundary_mismatches;
        self.interior_mismatches += o.interior_mismatches;
        self.boundary_pixels += o.boundary_pixels;
        self.max_channel_delta = self.max_channel_delta.max(o.max_channel_delta);
    }
}

pub fn compare_shadow_masks(rendered: &ShadowMask, reference: &ShadowMask) -> Result<DiffReport, OracleError> {
    if (rendered.width, rendered.height) != (reference.width, reference.height) {
        return Err(OracleError::SizeMismatch(rendered.width, rendered.height, reference.width, reference.height));
    }
    let mut r = DiffReport::default();
    for y in 0..reference.height {
        for x in 0..reference.width {
            let boundary = reference.on_boundary(x, y);
            if boundary {
                r.boundary_pixels += 1;
            }
            let (a, b) = (rendered.get(x, y), reference.get(x, y));
            if a != b {
                r.mismatches += 1;
                if boundary {
                    r.boundary_mismatches += 1;
                } else {
                    r.interior_mismatches += 1;
                }
                r.max_channel_delta = r.max_channel_delta.max(a.gray().abs_diff(b.gray()));
            }
        }
    }
    Ok(r)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CountReport {
    /// Pixels where both images see geometry.
    pub compared: usize,
    pub mismatches: usize,
    /// Mismatches next to a change in the reference count.
    pub boundary_mismatches: usize,
    pub interior_mismatches: usize,
}

/// Compares per-pixel stencil counts with the reference occluder counts,
/// modulo `stencil_max + 1`.
pub fn compare_counts(rendered: &[u32], depth: &[f64], reference: &ReferenceImage, stencil_max: u32) -> CountReport {
    let (w, h) = (reference.mask.width, reference.mask.height);
    let modulus = stencil_max as u64 + 1;
    let at = |x: i64, y: i64| reference.counts[y as usize * w + x as usize];
    let mut r = CountReport::default();
    for y in 0..h as i64 {
        for x in 0..w as i64 {
            let i = y as usize * w + x as usize;
            let Some(expected) = reference.counts[i] else { continue };
            if depth[i] >= 1.0 {
                continue;
            }
            r.compared += 1;
            if rendered[i] as u64 == expected as u64 % modulus {
                continue;
            }
            r.mismatches += 1;
            let boundary = (-1..=1).any(|dy| {
                (-1..=1).any(|dx| {
                    let (nx, ny) = (x + dx, y + dy);
                    nx >= 0 && ny >= 0 && nx < w as i64 && ny < h as i64 && at(nx, ny) != Some(expected)
                })
            });
            if boundary {
                r.boundary_mismatches += 1;
            } else {
                r.interior_mismatches += 1;
            }
        }
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hit {
    pub t: f64,
    /// Triangle winding is counterclockwise as seen from the ray origin.
    pub front: bool,
}

/// Watertight ray/triangle intersection: the ray is sheared so it points down
/// the dominant axis, and the 2D edge tests then agree exactly on shared
/// edges. Returns the hit parameter along `dir`.
pub fn intersect_triangle(origin: [f64; 3], dir: [f64; 3], tri: &[[f64; 3]; 3]) -> Option<Hit> {
    let kz = (0..3).max_by(|&a, &b| dir[a].abs().total_cmp(&dir[b].abs())).unwrap_or(2);
    let mut kx = (kz + 1) % 3;
    let mut ky = (kx + 1) % 3;
    if dir[kz] < 0.0 {
        std::mem::swap(&mut kx, &mut ky);
    }
    if dir[kz] == 0.0 {
        return None;
    }
    let sx = dir[kx] / dir[kz];
    let sy = dir[ky] / dir[kz];
    let sz = 1.0 / dir[kz];
    let rel = |p: [f64; 3]| sub3(p, origin);
    let (a, b, c) = (rel(tri[0]), rel(tri[1]), rel(tri[2]));
    let ax = a[kx] - sx * a[kz];
    let ay = a[ky] - sy * a[kz];
    let bx = b[kx] - sx * b[kz];
    let by = b[ky] - sy * b[kz];
    let cx = c[kx] - sx * c[kz];
    let cy = c[ky] - sy * c[kz];
    let u = cx * by - cy * bx;
    let v = ax * cy - ay * cx;
    let w = bx * ay - by * ax;
    if (u < 0.0 || v < 0.0 || w < 0.0) && (u > 0.0 || v > 0.0 || w > 0.0) {
        return None;
    }
    let det = u + v + w;
    if det == 0.0 {
        return None;
    }
    let t = (u * sz * a[kz] + v * sz * b[kz] + w * sz * c[kz]) / det;
    let n = cross3(sub3(tri[1], tri[0]), sub3(tri[2], tri[0]));
    let ccw_from_origin = crate::hgeom::dot3(n, dir) < 0.0;
    Some(Hit { t, front: ccw_from_origin })
}

/// Triangles of one mesh in affine form, with a bounding box for early outs.
#[derive(Debug, Clone)]
pub struct TriangleSet {
    pub triangles: Vec<[[f64; 3]; 3]>,
    min: [f64; 3],
    max: [f64; 3],
}

impl TriangleSet {
    /// Vertices must have `w > 0`.
    pub fn from_mesh(mesh: &crate::mesh::TriMesh) -> Self {
        let triangles: Vec<[[f64; 3]; 3]> = (0..mesh.triangles.len())
            .map(|t| mesh.triangle_vertices(t).map(|v| v.to_affine().expect("finite vertex")))
            .collect();
        let mut min = [f64::INFINITY; 3];
        let mut max = [f64::NEG_INFINITY; 3];
        for p in triangles.iter().flatten() {
            for k in 0..3 {
                min[k] = min[k].min(p[k]);
                max[k] = max[k].max(p[k]);
            }
        }
        TriangleSet { triangles, min, max }
    }

    /// Slab test against the (slightly padded) bounding box over `t in [0, t_max]`.
    fn may_hit(&self, origin: [f64; 3], dir: [f64; 3], t_max: f64) -> bool {
        let (mut lo, mut hi) = (0.0f64, t_max);
        for k in 0..3 {
            let pad = 1e-9 * (1.0 + self.max[k].abs().max(self.min[k].abs()));
            let (mn, mx) = (self.min[k] - pad, self.max[k] + pad);
            if dir[k] == 0.0 {
                if origin[k] < mn || origin[k] > mx {
                    return false;
                }
                continue;
            }
            let inv = 1.0 / dir[k];
            let (mut t0, mut t1) = ((mn - origin[k]) * inv, (mx - origin[k]) * inv);
            if t0 > t1 {
                std::mem::swap(&mut t0, &mut t1);
            }
            lo = lo.max(t0);
            hi = hi.min(t1);
            if lo > hi {
                return false;
            }
        }
        true
    }

    fn crosses(&self, origin: [f64; 3], dir: [f64; 3], t_max: f64) -> bool {
        if !self.may_hit(origin, dir, if t_max.is_finite() { t_max } else { f64::MAX }) {
            return false;
        }
        self.triangles
            .iter()
            .any(|t| intersect_triangle(origin, dir, t).is_some_and(|h| h.t > 0.0 && h.t < t_max))
    }
}

/// A visible surface sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    pub position: [f64; 3],
    /// Unit geometric normal on the side facing the viewer.
    pub normal: [f64; 3],
}

fn shadow_ray(p: &SurfacePoint, light: HVec4) -> ([f64; 3], [f64; 3], f64) {
    let origin = [0, 1, 2].map(|k| p.position[k] + SHADOW_RAY_OFFSET * p.normal[k]);
    if light.w == 0.0 {
        (origin, light.xyz(), f64::INFINITY)
    } else {
        let target = scale3(light.xyz(), 1.0 / light.w);
        (origin, sub3(target, origin), 1.0)
    }
}

/// Shadowed iff some occluder triangle meets the open segment toward a
/// positional light, or the open ray toward a directional one.
pub fn shadow_ray_test(point: &SurfacePoint, light: HVec4, occluders: &[TriangleSet]) -> MaskValue {
    if shadow_depth_count(point, light, occluders) > 0 {
        MaskValue::Shadowed
    } else {
        MaskValue::Lit
    }
}

/// Number of occluders crossed by the shadow ray.
pub fn shadow_depth_count(point: &SurfacePoint, light: HVec4, occluders: &[TriangleSet]) -> u32 {
    let (origin, dir, t_max) = shadow_ray(point, light);
    occluders.iter().filter(|o| o.crosses(origin, dir, t_max)).count() as u32
}

/// Eye rays through pixel centers, built from the camera parameters alone.
#[derive(Debug, Clone, Copy)]
pub struct PixelRays {
    eye: [f64; 3],
    forward: [f64; 3],
    right: [f64; 3],
    up: [f64; 3],
    half_w: f64,
    half_h: f64,
    width: usize,
    height: usize,
}

impl PixelRays {
    pub fn new(scene: &Scene, width: usize, height: usize) -> Option<Self> {
        let cam = &scene.camera;
        let forward = normalize3(sub3(cam.target, cam.eye))?;
        let right = normalize3(cross3(forward, cam.up))?;
        let up = cross3(right, forward);
        let half_h = (cam.frustum.fov_y * 0.5).tan();
        Some(PixelRays { eye: cam.eye, forward, right, up, half_h, half_w: half_h * cam.frustum.aspect, width, height })
    }

    /// Direction whose component along the view axis is 1, so the hit
    /// parameter equals eye-space depth.
    pub fn direction(&self, x: usize, y: usize) -> [f64; 3] {
        let sx = ((x as f64 + 0.5) / self.width as f64 * 2.0 - 1.0) * self.half_w;
        let sy = ((y as f64 + 0.5) / self.height as f64 * 2.0 - 1.0) * self.half_h;
        [0, 1, 2].map(|k| self.forward[k] + sx * self.right[k] + sy * self.up[k])
    }
}

/// Depth range visible to the camera along its view axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepthRange {
    pub near: f64,
    pub far: Option<f64>,
}

/// Nearest camera-facing surface along the ray through pixel `(x, y)`.
pub fn visible_point(rays: &PixelRays, range: DepthRange, surfaces: &[TriangleSet], x: usize, y: usize) -> Option<SurfacePoint> {
    let dir = rays.direction(x, y);
    let far = range.far.unwrap_or(f64::INFINITY);
    let mut best: Option<(f64, [f64; 3])> = None;
    for set in surfaces {
        let limit = best.map_or(far, |b| b.0);
        if !set.may_hit(rays.eye, dir, if limit.is_finite() { limit } else { f64::MAX }) {
            continue;
        }
        for tri in &set.triangles {
            let Some(h) = intersect_triangle(rays.eye, dir, tri) else { continue };
            if !h.front || h.t < range.near || h.t > far {
                continue;
            }
            if best.is_none_or(|b| h.t < b.0) {
                let n = cross3(sub3(tri[1], tri[0]), sub3(tri[2], tri[0]));
                best = Some((h.t, n));
            }
        }
    }
    let (t, n) = best?;
    Some(SurfacePoint { position: [0, 1, 2].map(|k| rays.eye[k] + t * dir[k]), normal: normalize3(n)? })
}

/// Reference classification and shadow depth count for every pixel.
#[derive(Debug, Clone)]
pub struct ReferenceImage {
    pub mask: ShadowMask,
    /// `None` where no geometry is visible.
    pub counts: Vec<Option<u32>>,
    pub points: Vec<Option<SurfacePoint>>,
}

pub fn reference_image(scene: &Scene, light: usize, width: usize, height: usize, range: DepthRange) -> Result<ReferenceImage, OracleError> {
    let l = scene.lights.get(light).ok_or(OracleError::NoSuchLight(light))?.position;
    let surfaces: Vec<TriangleSet> = scene.objects.iter().map(|o| TriangleSet::from_mesh(&o.mesh)).collect();
    let occluders: Vec<TriangleSet> = scene.occluders().map(|(_, o)| TriangleSet::from_mesh(&o.mesh)).collect();
    let Some(rays) = PixelRays::new(scene, width, height) else {
        let n = width * height;
        let mask = ShadowMask { width, height, cells: vec![MaskValue::NoGeometry; n] };
        return Ok(ReferenceImage { mask, counts: vec![None; n], points: vec![None; n] });
    };
    let rows: Vec<Vec<(Option<SurfacePoint>, Option<u32>)>> = (0..height)
        .into_par_iter()
        .map(|y| {
            (0..width)
                .map(|x| {
                    let p = visible_point(&rays, range, &surfaces, x, y);
                    let c = p.map(|p| shadow_depth_count(&p, l, &occluders));
                    (p, c)
                })
                .collect()
        })
        .collect();
    let mut points = Vec::with_capacity(width * height);
    let mut counts = Vec::with_capacity(width * height);
    for (p, c) in rows.into_iter().flatten() {
        points.push(p);
        counts.push(c);
    }
    let cells = counts
        .iter()
        .map(|c| match c {
            None => MaskValue::NoGeometry,
            Some(0) => MaskValue::Lit,
            Some(_) => MaskValue::Shadowed,
        })
        .collect();
    Ok(ReferenceImage { mask: ShadowMask { width, height, cells }, counts, points })
}

pub fn reference_mask(scene: &Scene, light: usize, width: usize, height: usize, range: DepthRange) -> Result<ShadowMask, OracleError> {
    Ok(reference_image(scene, light, width, height, range)?.mask)
}

/// Depth range matching how the pipeline renders `scene` under `projection`.
pub fn depth_range(scene: &Scene, projection: crate::pipeline::Projection) -> DepthRange {
    let far = match (projection, scene.camera.frustum.far) {
        (crate::pipeline::Projection::Finite, crate::hgeom::FarPlane::Finite(f)) => Some(f),
        _ => None,
    };
    DepthRange { near: scene.camera.frustum.near, far }
}

/// Signed area of a simple polygon in the plane given by two axes.
pub fn polygon_area(points: &[[f64; 2]]) -> f64 {
    let n = points.len();
    (0..n)
        .map(|i| {
            let (a, b) = (points[i], points[(i + 1) % n]);
            a[0] * b[1] - b[0] * a[1]
        })
        .sum::<f64>()
        * 0.5
}

/// Convex hull (counterclockwise) by the monotone chain method.
pub fn convex_hull(mut pts: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut hull: Vec<[f64; 2]> = Vec::with_capacity(pts.len() * 2);
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &[f64; 2]>> = if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Central projection of `p` from the light onto the plane `y = height`.
pub fn project_onto_floor(p: [f64; 3], light: [f64; 3], height: f64) -> [f64; 2] {
    let d = sub3(p, light);
    let t = (height - light[1]) / d[1];
    [light[0] + t * d[0], light[2] + t * d[2]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hgeom::HMat4;
    use crate::mesh::primitives::{cube, icosphere, tetrahedron};
    use crate::mesh::TriMesh;
    use proptest::prelude::*;

    fn set(m: &TriMesh) -> TriangleSet {
        TriangleSet::from_mesh(m)
    }

    fn up_point(p: [f64; 3]) -> SurfacePoint {
        SurfacePoint { position: p, normal: [0.0, 1.0, 0.0] }
    }

    #[test]
    fn ray_triangle_basics() {
        let tri = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]];
        let h = intersect_triangle([0.2, 0.2, 1.0], [0.0, 0.0, -1.0], &tri).unwrap();
        assert!((h.t - 1.0).abs() < 1e-15);
        assert!(h.front);
        let h = intersect_triangle([0.2, 0.2, -1.0], [0.0, 0.0, 1.0], &tri).unwrap();
        assert!(!h.front);
        assert!(intersect_triangle([0.8, 0.8, 1.0], [0.0, 0.0, -1.0], &tri).is_none());
    }

    #[test]
    fn shared_edges_are_never_missed() {
        // Rays through the diagonal of a split square always hit at least one half.
        let a = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0]];
        let b = [[0.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]];
        for i in 1..1000 {
            let s = i as f64 / 1000.0;
            let o = [s - 0.039, s + 0.021, 3.0];
            let d = [0.013, -0.007, -1.0];
            let hits = [&a, &b].iter().filter(|t| intersect_triangle(o, d, t).is_some()).count();
            assert!(hits >= 1, "{s}");
        }
    }

    #[test]
    fn shadow_test_examples() {
        let tri = TriMesh::new(
            vec![HVec4::point(-1.0, 1.0, -1.0), HVec4::point(0.0, 1.0, 1.0), HVec4::point(1.0, 1.0, -1.0)],
            vec![[0, 1, 2]],
        );
        let occ = [set(&tri)];
        let light = HVec4::point(0.0, 5.0, 0.0);
        assert_eq!(shadow_ray_test(&up_point([0.0, 0.0, 0.0]), light, &occ), MaskValue::Shadowed);
        assert_eq!(shadow_ray_test(&up_point([5.0, 0.0, 0.0]), light, &occ), MaskValue::Lit);
        // scaling the light's homogeneous coordinates changes nothing
        let scaled = HVec4::new(0.0, 10.0, 0.0, 2.0);
        assert_eq!(shadow_ray_test(&up_point([0.0, 0.0, 0.0]), scaled, &occ), MaskValue::Shadowed);
        // light below the triangle plane
        assert_eq!(shadow_ray_test(&up_point([0.0, 0.0, 0.0]), HVec4::point(0.0, 0.5, 0.0), &occ), MaskValue::Lit);
        // directional
        assert_eq!(shadow_ray_test(&up_point([0.0, 0.0, 0.0]), HVec4::direction(0.0, 1.0, 0.0), &occ), MaskValue::Shadowed);
        assert_eq!(shadow_ray_test(&up_point([0.0, 0.0, 0.0]), HVec4::direction(0.0, -1.0, 0.0), &occ), MaskValue::Lit);
    }

    #[test]
    fn lit_face_does_not_shadow_itself() {
        let c = cube();
        let occ = [set(&c)];
        let p = SurfacePoint { position: [0.3, 1.0, -0.2], normal: [0.0, 1.0, 0.0] };
        assert_eq!(shadow_ray_test(&p, HVec4::point(0.0, 5.0, 0.0), &occ), MaskValue::Lit);
        let q = SurfacePoint { position: [0.3, -1.0, -0.2], normal: [0.0, -1.0, 0.0] };
        assert_eq!(shadow_ray_test(&q, HVec4::point(0.0, 5.0, 0.0), &occ), MaskValue::Shadowed);
    }

    #[test]
    fn nested_spheres_count_two() {
        let inner = icosphere(2);
        let outer = icosphere(2).transformed(&HMat4::scale([2.0; 3]));
        let occ = [set(&inner), set(&outer)];
        let light = HVec4::point(0.0, 0.0, 0.0);
        let p = SurfacePoint { position: [0.0, -5.0, 0.3], normal: [0.0, 1.0, 0.0] };
        assert_eq!(shadow_depth_count(&p, light, &occ), 2);
        assert_eq!(shadow_depth_count(&p, HVec4::point(0.0, -4.0, 0.0), &occ), 0);
        let between = SurfacePoint { position: [0.0, 1.5, 0.0], normal: [0.0, 1.0, 0.0] };
        assert_eq!(shadow_depth_count(&between, light, &occ), 1);
    }

    #[test]
    fn mask_comparison() {
        let mut a = ShadowMask { width: 8, height: 8, cells: vec![MaskValue::Lit; 64] };
        for y in 0..8 {
            for x in 0..4 {
                a.cells[y * 8 + x] = MaskValue::Shadowed;
            }
        }
        let d = compare_shadow_masks(&a, &a).unwrap();
        assert_eq!(d.mismatches, 0);
        assert_eq!(d.boundary_pixels, 16);
        let mut shifted = a.clone();
        for y in 0..8 {
            shifted.cells[y * 8 + 4] = MaskValue::Shadowed;
        }
        let d = compare_shadow_masks(&shifted, &a).unwrap();
        assert_eq!((d.mismatches, d.boundary_mismatches, d.interior_mismatches), (8, 8, 0));
        assert_eq!(d.max_channel_delta, 255);
        let small = ShadowMask { width: 2, height: 2, cells: vec![MaskValue::Lit; 4] };
        assert!(compare_shadow_masks(&small, &a).is_err());
    }

    #[test]
    fn hull_and_area() {
        let sq = convex_hull(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.5, 0.5]]);
        assert_eq!(sq.len(), 4);
        assert!((polygon_area(&sq) - 1.0).abs() < 1e-15);
        assert_eq!(project_onto_floor([1.0, 1.0, 0.0], [0.0, 2.0, 0.0], 0.0), [2.0, 0.0]);
    }

    #[test]
    fn mask_pgm_codes() {
        let m = ShadowMask { width: 3, height: 1, cells: vec![MaskValue::Lit, MaskValue::Shadowed, MaskValue::NoGeometry] };
        let pgm = m.to_pgm();
        assert_eq!(&pgm[pgm.len() - 3..], &[255, 0, 128]);
    }

    proptest! {
        #[test]
        fn count_positive_iff_shadowed(
            p in proptest::array::uniform3(-4.0f64..4.0),
            l in proptest::array::uniform3(-6.0f64..6.0),
            w in prop_oneof![Just(0.0), 0.5f64..2.0],
        ) {
            let occ = [set(&tetrahedron()), set(&cube().transformed(&HMat4::translation([2.5, 0.0, 0.0])))];
            let light = HVec4::new(l[0], l[1], l[2], w);
            prop_assume!(light.max_abs() > 1e-3);
            let pt = up_point(p);
            let c = shadow_depth_count(&pt, light, &occ);
            prop_assert_eq!(c >= 1, shadow_ray_test(&pt, light, &occ) == MaskValue::Shadowed);
            let k = 3.7;
            let scaled = HVec4::new(l[0] * k, l[1] * k, l[2] * k, w * k);
            prop_assert_eq!(shadow_ray_test(&pt, scaled, &occ), shadow_ray_test(&pt, light, &occ));
        }
    }
}
