//! Closed, infinite shadow-volume geometry for one occluder and one light.
//!
//! A volume is the union of three polygon sets: every possible-silhouette edge
//! extruded to infinity away from the light, every light-back-facing triangle
//! projected to infinity, and every light-front-facing triangle as is.
//! Extrusions can be emitted as independent quads, one quad strip per
//! silhouette loop, or (directional lights only) one triangle fan per loop.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hgeom::HVec4;
use crate::mesh::{
    extract_silhouette_edges, stitch_loops, Adjacency, EdgeLoop, FacingSet, MeshError, TriMesh,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VolumeError {
    #[error("vertex {vertex:?} projects to the zero vector for light {light:?}")]
    DegenerateProjection { vertex: HVec4, light: HVec4 },
    #[error("light has negative w: {0:?}")]
    NegativeLightW(HVec4),
    #[error("triangle fans need a directional light (w = 0)")]
    FanNeedsDirectionalLight,
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

/// How extrusion sides are submitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Encoding {
    #[default]
    Independent,
    Strips,
    Fans,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct VolumeOptions {
    pub encoding: Encoding,
    /// With fans, omit the zero-area back cap of a directional light.
    pub drop_directional_back_cap: bool,
}

/// Extrusion of one silhouette loop.
#[derive(Debug, Clone, PartialEq)]
pub enum LoopSides {
    /// `[B, A, A∞, B∞]` per edge.
    Quads(Vec<[HVec4; 4]>),
    /// Quad strip `p0, p0∞, p1, p1∞, …, p0, p0∞` (2 vertices per quad, plus 2).
    Strip(Vec<HVec4>),
    /// Fan `apex, p_n = p_0, p_{n-1}, …, p_0` (1 vertex per triangle, plus 2).
    Fan(Vec<HVec4>),
}

impl LoopSides {
    pub fn vertex_count(&self) -> usize {
        match self {
            LoopSides::Quads(q) => 4 * q.len(),
            LoopSides::Strip(v) | LoopSides::Fan(v) => v.len(),
        }
    }

    /// Expands to triangles. Every encoding yields the same set of
    /// non-degenerate triangles: each extrusion quad `[B, A, A∞, B∞]` splits
    /// into `(B, A, A∞)` and `(B, A∞, B∞)`.
    pub fn triangles(&self) -> Vec<[HVec4; 3]> {
        match self {
            LoopSides::Quads(quads) => quads.iter().flat_map(|q| split_quad(*q)).collect(),
            LoopSides::Strip(v) => (0..v.len().saturating_sub(2))
                .map(|i| if i % 2 == 0 { [v[i], v[i + 1], v[i + 2]] } else { [v[i + 1], v[i], v[i + 2]] })
                .collect(),
            LoopSides::Fan(v) => (1..v.len().saturating_sub(1)).map(|i| [v[0], v[i], v[i + 1]]).collect(),
        }
    }
}

/// Splits a quad along its `v0-v2` diagonal, preserving winding.
pub fn split_quad(q: [HVec4; 4]) -> [[HVec4; 3]; 2] {
    [[q[0], q[1], q[2]], [q[0], q[2], q[3]]]
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShadowVolumeGeometry {
    /// One entry per silhouette loop, in loop order.
    pub loops: Vec<LoopSides>,
    /// Number of silhouette edges in each loop.
    pub loop_lengths: Vec<usize>,
    pub back_cap: Vec<[HVec4; 3]>,
    pub front_cap: Vec<[HVec4; 3]>,
    pub encoding: Encoding,
}

impl ShadowVolumeGeometry {
    pub fn side_triangles(&self) -> Vec<[HVec4; 3]> {
        self.loops.iter().flat_map(|l| l.triangles()).collect()
    }

    pub fn cap_triangles(&self) -> Vec<[HVec4; 3]> {
        self.front_cap.iter().chain(self.back_cap.iter()).copied().collect()
    }

    pub fn triangles(&self) -> Vec<[HVec4; 3]> {
        let mut t = self.side_triangles();
        t.extend(self.cap_triangles());
        t
    }

    pub fn side_vertex_count(&self) -> usize {
        self.loops.iter().map(LoopSides::vertex_count).sum()
    }

    pub fn cap_vertex_count(&self) -> usize {
        3 * (self.front_cap.len() + self.back_cap.len())
    }

    pub fn quad_count(&self) -> usize {
        self.loop_lengths.iter().sum()
    }

    /// Indexed form for OBJ export; identical vertices share an index.
    pub fn indexed(&self) -> (Vec<HVec4>, Vec<[u32; 3]>) {
        let mut index: HashMap<[u64; 4], u32> = HashMap::new();
        let mut vertices = Vec::new();
        let mut tris = Vec::new();
        for t in self.triangles() {
            let mut out = [0u32; 3];
            for (k, v) in t.iter().enumerate() {
                out[k] = *index.entry(v.bit_key()).or_insert_with(|| {
                    vertices.push(*v);
                    (vertices.len() - 1) as u32
                });
            }
            tris.push(out);
        }
        (vertices, tris)
    }

    pub fn to_obj(&self) -> String {
        let (v, t) = self.indexed();
        crate::mesh::obj::write_obj(&v, &t)
    }
}

/// Homogeneous difference `v - L` with `w = 0`: the direction from the
/// light through `v`, as a point at infinity.
pub fn project_to_infinity(v: HVec4, light: HVec4) -> Result<HVec4, VolumeError> {
    let p = HVec4::new(
        v.x * light.w - light.x * v.w,
        v.y * light.w - light.y * v.w,
        v.z * light.w - light.z * v.w,
        0.0,
    );
    if p.x == 0.0 && p.y == 0.0 && p.z == 0.0 {
        return Err(VolumeError::DegenerateProjection { vertex: v, light });
    }
    Ok(p)
}

/// Extrusion quad `[B, A, A∞, B∞]` for the silhouette edge `(a, b)`.
pub fn extrude_quad(a: HVec4, b: HVec4, light: HVec4) -> Result<[HVec4; 4], VolumeError> {
    Ok([b, a, project_to_infinity(a, light)?, project_to_infinity(b, light)?])
}

/// Apex of every directional-light fan.
fn directional_apex(light: HVec4) -> HVec4 {
    HVec4::new(-light.x, -light.y, -light.z, 0.0)
}

pub fn build_shadow_volume(
    mesh: &TriMesh,
    adjacency: &Adjacency,
    facing: &FacingSet,
    light: HVec4,
    opts: VolumeOptions,
) -> Result<ShadowVolumeGeometry, VolumeError> {
    if light.w < 0.0 {
        return Err(VolumeError::NegativeLightW(light));
    }
    if opts.encoding == Encoding::Fans && light.w != 0.0 {
        return Err(VolumeError::FanNeedsDirectionalLight);
    }
    let edges = extract_silhouette_edges(mesh, adjacency, facing);
    let loops = stitch_loops(&edges)?;

    // Every vertex is projected once so shared vertices stay bit-identical.
    let mut infinity: HashMap<u32, HVec4> = HashMap::new();
    let mut project = |i: u32| -> Result<HVec4, VolumeError> {
        if let Some(p) = infinity.get(&i) {
            return Ok(*p);
        }
        let p = project_to_infinity(mesh.vertices[i as usize], light)?;
        infinity.insert(i, p);
        Ok(p)
    };

    let mut sides = Vec::with_capacity(loops.len());
    let mut loop_lengths = Vec::with_capacity(loops.len());
    for lp in &loops {
        loop_lengths.push(lp.len());
        sides.push(loop_sides(mesh, lp, light, opts.encoding, &mut project)?);
    }

    let mut back_cap = Vec::new();
    let mut front_cap = Vec::new();
    let drop_back = opts.drop_directional_back_cap && opts.encoding == Encoding::Fans;
    for (t, tri) in mesh.triangles.iter().enumerate() {
        if facing.back_facing[t] {
            let projected = [project(tri[0])?, project(tri[1])?, project(tri[2])?];
            if !drop_back {
                back_cap.push(projected);
            }
        } else {
            front_cap.push(mesh.triangle_vertices(t));
        }
    }
    Ok(ShadowVolumeGeometry { loops: sides, loop_lengths, back_cap, front_cap, encoding: opts.encoding })
}

fn loop_sides(
    mesh: &TriMesh,
    lp: &EdgeLoop,
    light: HVec4,
    encoding: Encoding,
    project: &mut impl FnMut(u32) -> Result<HVec4, VolumeError>,
) -> Result<LoopSides, VolumeError> {
    let pos = |i: u32| mesh.vertices[i as usize];
    Ok(match encoding {
        Encoding::Independent => {
            let mut quads = Vec::with_capacity(lp.len());
            for e in &lp.edges {
                quads.push([pos(e.b), pos(e.a), project(e.a)?, project(e.b)?]);
            }
            LoopSides::Quads(quads)
        }
        Encoding::Strips => {
            let ring = lp.vertices();
            let mut strip = Vec::with_capacity(2 * ring.len() + 2);
            for &i in ring.iter().chain(ring.first()) {
                strip.push(pos(i));
                strip.push(project(i)?);
            }
            LoopSides::Strip(strip)
        }
        Encoding::Fans => {
            let ring = lp.vertices();
            let mut fan = Vec::with_capacity(ring.len() + 2);
            fan.push(directional_apex(light));
            fan.push(pos(ring[0]));
            for &i in ring.iter().rev() {
                fan.push(pos(i));
            }
            LoopSides::Fan(fan)
        }
    })
}

/// Directed edges with no matching reverse. An empty result means the
/// triangle soup is a closed surface; edges from a vertex to itself (zero-area
/// triangles collapsed at infinity) are ignored.
pub fn unmatched_edges(triangles: &[[HVec4; 3]]) -> Vec<(HVec4, HVec4)> {
    let mut count: HashMap<([u64; 4], [u64; 4]), i64> = HashMap::new();
    let mut keys: HashMap<[u64; 4], HVec4> = HashMap::new();
    for t in triangles {
        for j in 0..3 {
            let (a, b) = (t[j], t[(j + 1) % 3]);
            let (ka, kb) = (a.bit_key(), b.bit_key());
            if ka == kb {
                continue;
            }
            keys.insert(ka, a);
            keys.insert(kb, b);
            *count.entry((ka, kb)).or_default() += 1;
            *count.entry((kb, ka)).or_default() -= 1;
        }
    }
    let mut out: Vec<(HVec4, HVec4)> = count
        .into_iter()
        .filter(|(_, c)| *c > 0)
        .map(|((a, b), _)| (keys[&a], keys[&b]))
        .collect();
    out.sort_by(|x, y| x.0.bit_key().cmp(&y.0.bit_key()).then(x.1.bit_key().cmp(&y.1.bit_key())));
    out
}

pub fn is_closed(volume: &ShadowVolumeGeometry) -> bool {
    unmatched_edges(&volume.triangles()).is_empty()
}
