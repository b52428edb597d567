//! Built-in meshes in canonical orientation, wound counterclockwise from outside.

use std::collections::HashMap;

use super::TriMesh;
use crate::hgeom::{cross3, dot3, normalize3, sub3, HVec4};

/// Regular tetrahedron inscribed in the cube `[-1, 1]^3`.
pub fn tetrahedron() -> TriMesh {
    TriMesh::new(
        vec![
            HVec4::point(1.0, 1.0, 1.0),
            HVec4::point(1.0, -1.0, -1.0),
            HVec4::point(-1.0, 1.0, -1.0),
            HVec4::point(-1.0, -1.0, 1.0),
        ],
        vec![[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2]],
    )
}

/// Axis-aligned cube `[-1, 1]^3` as 12 triangles. Vertex `i` has
/// coordinates chosen by bits `x = i & 1`, `y = i & 2`, `z = i & 4`.
pub fn cube() -> TriMesh {
    let vertices = (0..8)
        .map(|i| {
            let s = |bit: u32| if i & bit != 0 { 1.0 } else { -1.0 };
            HVec4::point(s(1), s(2), s(4))
        })
        .collect();
    let quads: [[u32; 4]; 6] = [
        [4, 5, 7, 6], // +z
        [0, 2, 3, 1], // -z
        [1, 3, 7, 5], // +x
        [0, 4, 6, 2], // -x
        [2, 6, 7, 3], // +y
        [0, 1, 5, 4], // -y
    ];
    let triangles = quads.iter().flat_map(|q| [[q[0], q[1], q[2]], [q[0], q[2], q[3]]]).collect();
    TriMesh::new(vertices, triangles)
}

/// Single quad `[-1, 1]^2` in the `y = 0` plane facing `+y`. Open, so it can
/// receive shadows but never cast them.
pub fn plane() -> TriMesh {
    TriMesh::new(
        vec![
            HVec4::point(-1.0, 0.0, -1.0),
            HVec4::point(-1.0, 0.0, 1.0),
            HVec4::point(1.0, 0.0, 1.0),
            HVec4::point(1.0, 0.0, -1.0),
        ],
        vec![[0, 1, 2], [0, 2, 3]],
    )
}

/// Unit icosphere: an icosahedron with `subdivisions` rounds of midpoint
/// splitting, every vertex pushed onto the sphere.
pub fn icosphere(subdivisions: u32) -> TriMesh {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let mut pos: Vec<[f64; 3]> = [
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ]
    .iter()
    .map(|p| normalize3(*p).unwrap())
    .collect();
    let mut faces: Vec<[u32; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..subdivisions {
        let mut cache: HashMap<(u32, u32), u32> = HashMap::new();
        let mut midpoint = |a: u32, b: u32, pos: &mut Vec<[f64; 3]>| {
            *cache.entry((a.min(b), a.max(b))).or_insert_with(|| {
                let (pa, pb) = (pos[a as usize], pos[b as usize]);
                let m = [(pa[0] + pb[0]) * 0.5, (pa[1] + pb[1]) * 0.5, (pa[2] + pb[2]) * 0.5];
                pos.push(normalize3(m).unwrap());
                (pos.len() - 1) as u32
            })
        };
        let mut next = Vec::with_capacity(faces.len() * 4);
        for [a, b, c] in faces {
            let ab = midpoint(a, b, &mut pos);
            let bc = midpoint(b, c, &mut pos);
            let ca = midpoint(c, a, &mut pos);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    let vertices = pos.iter().map(|p| HVec4::point(p[0], p[1], p[2])).collect();
    orient_outward(TriMesh::new(vertices, faces), [0.0; 3])
}

/// Thick-walled open box: outer footprint `[-1, 1]^2`, height 1 along `+y`,
/// walls and floor `wall` thick, open at the top. Closed 2-manifold of genus 0
/// whose cavity can hold a light.
pub fn cup(wall: f64) -> TriMesh {
    assert!(wall > 0.0 && wall < 1.0, "wall thickness must be in (0, 1)");
    let a = 1.0 - wall;
    let square = |half: f64, y: f64| {
        [[-half, y, -half], [half, y, -half], [half, y, half], [-half, y, half]]
    };
    let rings = [square(1.0, 0.0), square(1.0, 1.0), square(a, 1.0), square(a, wall)];
    let mut builder = QuadBuilder::default();
    let ob = builder.ring(rings[0]);
    let ot = builder.ring(rings[1]);
    let it = builder.ring(rings[2]);
    let ib = builder.ring(rings[3]);
    builder.quad([ob[0], ob[1], ob[2], ob[3]], [0.0, -1.0, 0.0]);
    builder.quad([ib[0], ib[1], ib[2], ib[3]], [0.0, 1.0, 0.0]);
    for k in 0..4 {
        let n = (k + 1) % 4;
        let mid = |r: &[[f64; 3]; 4]| {
            let p = r[k];
            let q = r[n];
            [(p[0] + q[0]) * 0.5, 0.0, (p[2] + q[2]) * 0.5]
        };
        let outward = normalize3(mid(&rings[0])).unwrap();
        let inward = [-outward[0], 0.0, -outward[2]];
        builder.quad([ob[k], ob[n], ot[n], ot[k]], outward);
        builder.quad([ot[k], ot[n], it[n], it[k]], [0.0, 1.0, 0.0]);
        builder.quad([it[k], it[n], ib[n], ib[k]], inward);
    }
    builder.mesh
}

#[derive(Default)]
struct QuadBuilder {
    mesh: TriMesh,
}

impl QuadBuilder {
    fn ring(&mut self, pts: [[f64; 3]; 4]) -> [u32; 4] {
        let base = self.mesh.vertices.len() as u32;
        self.mesh.vertices.extend(pts.iter().map(|p| HVec4::point(p[0], p[1], p[2])));
        [base, base + 1, base + 2, base + 3]
    }

    /// Adds a planar quad split along `q[0]-q[2]`, wound to face `normal`.
    fn quad(&mut self, q: [u32; 4], normal: [f64; 3]) {
        let p = |i: u32| self.mesh.vertices[i as usize].xyz();
        let n = cross3(sub3(p(q[1]), p(q[0])), sub3(p(q[2]), p(q[0])));
        let q = if dot3(n, normal) < 0.0 { [q[0], q[3], q[2], q[1]] } else { q };
        self.mesh.triangles.push([q[0], q[1], q[2]]);
        self.mesh.triangles.push([q[0], q[2], q[3]]);
    }
}

/// Flips triangles of a star-shaped mesh so their normals point away from `center`.
fn orient_outward(mut mesh: TriMesh, center: [f64; 3]) -> TriMesh {
    for t in 0..mesh.triangles.len() {
        let [a, b, c] = mesh.triangle_vertices(t);
        let n = cross3(sub3(b.xyz(), a.xyz()), sub3(c.xyz(), a.xyz()));
        if dot3(n, sub3(a.xyz(), center)) < 0.0 {
            mesh.triangles[t].swap(1, 2);
        }
    }
    mesh
}
