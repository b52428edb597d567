//! Indexed triangle meshes, edge adjacency, manifold validation, light-facing
//! classification and possible-silhouette extraction.

pub mod obj;
pub mod primitives;

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::hgeom::{plane_cofactors, plane_from_triangle, transform, HMat4, HVec4, Plane};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshError {
    #[error("mesh has no triangles")]
    Empty,
    #[error("triangle {triangle} references vertex {index} but mesh has {count} vertices")]
    IndexOutOfRange { triangle: usize, index: u32, count: usize },
    #[error("non-manifold edge ({0}, {1}): {2}")]
    NonManifold(u32, u32, &'static str),
    #[error("vertex {0} has negative w")]
    NegativeW(usize),
    #[error("triangle {0} is degenerate")]
    DegenerateTriangle(usize),
    #[error("silhouette edges do not chain into closed loops (stuck at vertex {0})")]
    OpenSilhouette(u32),
}

/// Indexed triangle mesh. Triangles are counterclockwise when seen from outside.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TriMesh {
    pub vertices: Vec<HVec4>,
    pub triangles: Vec<[u32; 3]>,
}

impl TriMesh {
    pub fn new(vertices: Vec<HVec4>, triangles: Vec<[u32; 3]>) -> Self {
        Self { vertices, triangles }
    }

    pub fn triangle_vertices(&self, t: usize) -> [HVec4; 3] {
        let [a, b, c] = self.triangles[t];
        [self.vertices[a as usize], self.vertices[b as usize], self.vertices[c as usize]]
    }

    /// Applies `m` to every vertex. A mirroring transform reverses every
    /// triangle so the winding stays counterclockwise from outside.
    pub fn transformed(&self, m: &HMat4) -> TriMesh {
        let vertices = self.vertices.iter().map(|v| transform(m, *v)).collect();
        let triangles = if m.linear_determinant() < 0.0 {
            self.triangles.iter().map(|&[a, b, c]| [a, c, b]).collect()
        } else {
            self.triangles.clone()
        };
        TriMesh { vertices, triangles }
    }

    /// Concatenates meshes, offsetting indices.
    pub fn merged(parts: &[TriMesh]) -> TriMesh {
        let mut out = TriMesh::default();
        for p in parts {
            let base = out.vertices.len() as u32;
            out.vertices.extend_from_slice(&p.vertices);
            out.triangles
                .extend(p.triangles.iter().map(|t| [t[0] + base, t[1] + base, t[2] + base]));
        }
        out
    }

    fn check_indices(&self) -> Result<(), MeshError> {
        let count = self.vertices.len();
        for (t, tri) in self.triangles.iter().enumerate() {
            for &index in tri {
                if index as usize >= count {
                    return Err(MeshError::IndexOutOfRange { triangle: t, index, count });
                }
            }
        }
        Ok(())
    }

    /// Plane of every triangle, in mesh winding order.
    pub fn planes(&self) -> Result<Vec<Plane>, MeshError> {
        (0..self.triangles.len())
            .map(|t| {
                let [a, b, c] = self.triangle_vertices(t);
                plane_from_triangle(a, b, c).map_err(|_| MeshError::DegenerateTriangle(t))
            })
            .collect()
    }
}

/// For every triangle and local edge `j` (from `v[j]` to `v[(j+1) % 3]`), the
/// triangle across that edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjacency {
    pub neighbors: Vec<[u32; 3]>,
}

impl Adjacency {
    pub fn neighbor(&self, triangle: usize, edge: usize) -> usize {
        self.neighbors[triangle][edge] as usize
    }
}

fn directed_edges(mesh: &TriMesh) -> impl Iterator<Item = (usize, usize, u32, u32)> + '_ {
    mesh.triangles.iter().enumerate().flat_map(|(t, tri)| {
        (0..3).map(move |j| (t, j, tri[j], tri[(j + 1) % 3]))
    })
}

/// Builds the edge-neighbor table of a closed 2-manifold.
pub fn build_adjacency(mesh: &TriMesh) -> Result<Adjacency, MeshError> {
    if mesh.triangles.is_empty() {
        return Err(MeshError::Empty);
    }
    mesh.check_indices()?;
    let mut by_edge: HashMap<(u32, u32), (usize, usize)> = HashMap::new();
    for (t, j, a, b) in directed_edges(mesh) {
        if a == b {
            return Err(MeshError::NonManifold(a, b, "edge joins a vertex to itself"));
        }
        if by_edge.insert((a, b), (t, j)).is_some() {
            let (lo, hi) = (a.min(b), a.max(b));
            return Err(MeshError::NonManifold(lo, hi, "two triangles traverse it in the same direction"));
        }
    }
    let mut neighbors = vec![[u32::MAX; 3]; mesh.triangles.len()];
    for (t, j, a, b) in directed_edges(mesh) {
        match by_edge.get(&(b, a)) {
            Some(&(other, _)) => neighbors[t][j] = other as u32,
            None => {
                let (lo, hi) = (a.min(b), a.max(b));
                return Err(MeshError::NonManifold(lo, hi, "boundary edge used by one triangle"));
            }
        }
    }
    Ok(Adjacency { neighbors })
}

/// Outcome of [`validate_mesh`]; every list names offending edges, vertices or triangles.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    /// Undirected edges not used by exactly two triangles.
    pub unclosed_edges: Vec<(u32, u32)>,
    /// Undirected edges used twice in the same direction.
    pub inconsistent_winding_edges: Vec<(u32, u32)>,
    pub negative_w_vertices: Vec<usize>,
    pub degenerate_triangles: Vec<usize>,
    pub bad_indices: Vec<usize>,
}

impl ValidationReport {
    pub fn is_closed(&self) -> bool {
        self.unclosed_edges.is_empty()
    }

    pub fn winding_consistent(&self) -> bool {
        self.inconsistent_winding_edges.is_empty()
    }

    pub fn is_valid(&self) -> bool {
        self.unclosed_edges.is_empty()
            && self.inconsistent_winding_edges.is_empty()
            && self.negative_w_vertices.is_empty()
            && self.degenerate_triangles.is_empty()
            && self.bad_indices.is_empty()
    }

    /// First failure as an error, for callers that want `Result`.
    pub fn into_result(self) -> Result<(), MeshError> {
        if let Some(t) = self.bad_indices.first() {
            return Err(MeshError::DegenerateTriangle(*t));
        }
        if let Some(&(a, b)) = self.unclosed_edges.first() {
            return Err(MeshError::NonManifold(a, b, "edge is not shared by exactly two triangles"));
        }
        if let Some(&(a, b)) = self.inconsistent_winding_edges.first() {
            return Err(MeshError::NonManifold(a, b, "inconsistent winding"));
        }
        if let Some(&v) = self.negative_w_vertices.first() {
            return Err(MeshError::NegativeW(v));
        }
        if let Some(&t) = self.degenerate_triangles.first() {
            return Err(MeshError::DegenerateTriangle(t));
        }
        Ok(())
    }
}

/// Checks closedness, winding consistency, `w >= 0` and triangle degeneracy.
pub fn validate_mesh(mesh: &TriMesh) -> ValidationReport {
    let mut report = ValidationReport::default();
    report.negative_w_vertices = mesh
        .vertices
        .iter()
        .enumerate()
        .filter(|(_, v)| v.w < 0.0)
        .map(|(i, _)| i)
        .collect();
    let count = mesh.vertices.len() as u32;
    // undirected edge -> (uses in canonical direction, uses in reverse direction)
    let mut uses: BTreeMap<(u32, u32), (u32, u32)> = BTreeMap::new();
    for (t, tri) in mesh.triangles.iter().enumerate() {
        if tri.iter().any(|&i| i >= count) {
            report.bad_indices.push(t);
            continue;
        }
        let [a, b, c] = mesh.triangle_vertices(t);
        let p = plane_cofactors(a, b, c);
        let scale = a.max_abs().max(b.max_abs()).max(c.max_abs());
        if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] || p.max_abs() <= 1e-12 * scale.powi(3) {
            report.degenerate_triangles.push(t);
        }
        for j in 0..3 {
            let (a, b) = (tri[j], tri[(j + 1) % 3]);
            let e = uses.entry((a.min(b), a.max(b))).or_default();
            if a < b {
                e.0 += 1;
            } else {
                e.1 += 1;
            }
        }
    }
    for (edge, (fwd, rev)) in uses {
        if fwd + rev != 2 {
            report.unclosed_edges.push(edge);
        } else if fwd != 1 {
            report.inconsistent_winding_edges.push(edge);
        }
    }
    report
}

/// Per-triangle light-facing bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacingSet {
    pub back_facing: Vec<bool>,
}

impl FacingSet {
    pub fn front_count(&self) -> usize {
        self.back_facing.iter().filter(|b| !**b).count()
    }

    pub fn back_count(&self) -> usize {
        self.back_facing.iter().filter(|b| **b).count()
    }
}

/// A triangle is back-facing iff its plane evaluates negative at the light;
/// zero counts as front-facing.
pub fn classify_facing(planes: &[Plane], light: HVec4) -> FacingSet {
    FacingSet { back_facing: planes.iter().map(|p| p.eval(light) < 0.0).collect() }
}

/// Directed possible-silhouette edge `(a, b)`, ordered as in the front-facing triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SilhouetteEdge {
    pub a: u32,
    pub b: u32,
}

impl SilhouetteEdge {
    pub fn positions(&self, mesh: &TriMesh) -> (HVec4, HVec4) {
        (mesh.vertices[self.a as usize], mesh.vertices[self.b as usize])
    }
}

/// Scans front-facing triangles for edges whose neighbor is back-facing.
pub fn extract_silhouette_edges(
    mesh: &TriMesh,
    adjacency: &Adjacency,
    facing: &FacingSet,
) -> Vec<SilhouetteEdge> {
    let mut edges = Vec::new();
    for (t, tri) in mesh.triangles.iter().enumerate() {
        if facing.back_facing[t] {
            continue;
        }
        for j in 0..3 {
            if facing.back_facing[adjacency.neighbor(t, j)] {
                edges.push(SilhouetteEdge { a: tri[j], b: tri[(j + 1) % 3] });
            }
        }
    }
    edges
}

/// Closed chain of silhouette edges; `edges[k].b == edges[k + 1].a`, wrapping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeLoop {
    pub edges: Vec<SilhouetteEdge>,
}

impl EdgeLoop {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Loop vertices `p_0 .. p_{n-1}` where edge `k` runs `p_k -> p_{k+1}`.
    pub fn vertices(&self) -> Vec<u32> {
        self.edges.iter().map(|e| e.a).collect()
    }
}

/// Chains edges head-to-tail by vertex index. Every input edge lands in
/// exactly one loop.
pub fn stitch_loops(edges: &[SilhouetteEdge]) -> Result<Vec<EdgeLoop>, MeshError> {
    let mut outgoing: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (i, e) in edges.iter().enumerate() {
        outgoing.entry(e.a).or_default().push(i);
    }
    // Pop from the back, so reverse to consume in input order.
    for list in outgoing.values_mut() {
        list.reverse();
    }
    let mut used = vec![false; edges.len()];
    let mut loops = Vec::new();
    for start in 0..edges.len() {
        if used[start] {
            continue;
        }
        let origin = edges[start].a;
        let mut chain = Vec::new();
        let mut current = start;
        loop {
            used[current] = true;
            if let Some(list) = outgoing.get_mut(&edges[current].a) {
                list.retain(|&i| i != current);
            }
            chain.push(edges[current]);
            let head = edges[current].b;
            if head == origin {
                break;
            }
            match outgoing.get_mut(&head).and_then(|l| l.pop()) {
                Some(next) => current = next,
                None => return Err(MeshError::OpenSilhouette(head)),
            }
        }
        loops.push(EdgeLoop { edges: chain });
    }
    Ok(loops)
}
