//! Multi-pass stenciled shadow rendering: an ambient pass that lays down
//! depth, then per light a shadow-volume stencil pass followed by an additive
//! lighting pass restricted to pixels whose stencil count is zero.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hgeom::{
    dot3, normalize3, perspective_finite, perspective_infinite, scale3, sub3, transform, FarPlane, FrustumParams,
    GeomError, HMat4, HVec4,
};
use crate::mesh::{build_adjacency, classify_facing, validate_mesh, Adjacency, EdgeLoop, MeshError, TriMesh};
use crate::raster::{
    draw_triangle, BlendMode, ClipVertex, CullMode, DepthFunc, Fragment, Framebuffer, RasterError, RasterStats,
    RenderState, StencilFaceState, StencilFunc, StencilOp, ATTRS,
};
use crate::volume::{build_shadow_volume, Encoding, ShadowVolumeGeometry, VolumeError, VolumeOptions};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("camera: {0}")]
    Camera(#[from] GeomError),
    #[error("camera eye, target and up do not define a view")]
    DegenerateView,
    #[error("light {0} has negative w")]
    NegativeLightW(usize),
    #[error("object {index}: {source}")]
    InvalidMesh {
        index: usize,
        #[source]
        source: MeshError,
    },
    #[error("object {index}, light {light}: {source}")]
    Volume {
        index: usize,
        light: usize,
        #[source]
        source: VolumeError,
    },
    #[error("two-sided stencil needs wrapping stencil ops")]
    TwoSidedNeedsWrap,
    #[error("object {0}: silhouette loops of one occluder must share a formulation")]
    SplitOccluderFormulation(usize),
    #[error(transparent)]
    Raster(#[from] RasterError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Camera {
    pub eye: [f64; 3],
    pub target: [f64; 3],
    pub up: [f64; 3],
    pub frustum: FrustumParams,
}

impl Camera {
    pub fn view_matrix(&self) -> Result<HMat4, PipelineError> {
        HMat4::look_at(self.eye, self.target, self.up).ok_or(PipelineError::DegenerateView)
    }

    pub fn projection(&self, mode: Projection) -> Result<HMat4, PipelineError> {
        Ok(match mode {
            Projection::Finite => perspective_finite(&self.frustum)?,
            Projection::Infinite => perspective_infinite(&self.frustum)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Material {
    pub diffuse: [f64; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub specular: Option<[f64; 3]>,
    #[serde(default = "default_exponent")]
    pub exponent: f64,
}

fn default_exponent() -> f64 {
    32.0
}

impl Default for Material {
    fn default() -> Self {
        Material { diffuse: [0.8; 3], specular: None, exponent: default_exponent() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Light {
    /// `w = 0` for a directional light shining from direction `xyz`.
    pub position: HVec4,
    pub color: [f64; 3],
}

/// Stencil counting scheme for one shadow volume.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Counting {
    ZFail,
    ZPass,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SceneObject {
    /// World-space geometry.
    pub mesh: TriMesh,
    pub material: Material,
    pub casts_shadow: bool,
    /// Per-occluder choice used by the default mixed-mode policy.
    pub counting_hint: Option<Counting>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub camera: Camera,
    pub objects: Vec<SceneObject>,
    pub lights: Vec<Light>,
    pub ambient: [f64; 3],
}

impl Scene {
    /// Checks the camera, light positions, and that every shadow caster is a
    /// closed, consistently wound mesh with non-negative `w`.
    pub fn validate(&self) -> Result<(), PipelineError> {
        self.camera.frustum.validate()?;
        self.camera.view_matrix()?;
        for (i, l) in self.lights.iter().enumerate() {
            if l.position.w < 0.0 {
                return Err(PipelineError::NegativeLightW(i));
            }
        }
        for (index, o) in self.objects.iter().enumerate() {
            let report = validate_mesh(&o.mesh);
            let result = if o.casts_shadow {
                report.into_result()
            } else {
                crate::mesh::ValidationReport {
                    unclosed_edges: vec![],
                    inconsistent_winding_edges: vec![],
                    degenerate_triangles: vec![],
                    ..report
                }
                .into_result()
            };
            result.map_err(|source| PipelineError::InvalidMesh { index, source })?;
        }
        Ok(())
    }

    pub fn occluders(&self) -> impl Iterator<Item = (usize, &SceneObject)> {
        self.objects.iter().enumerate().filter(|(_, o)| o.casts_shadow)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Formulation {
    #[default]
    ZFail,
    ZPass,
    /// Counting chosen per silhouette loop by a policy.
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Projection {
    Finite,
    #[default]
    Infinite,
}

/// Stencil op on depth pass during lighting; `Incr` stops a second
/// coincident fragment from blending again, `Keep` skips the write.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DoubleBlendGuard {
    #[default]
    Incr,
    Keep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PipelineModes {
    pub formulation: Formulation,
    pub projection: Projection,
    pub depth_clamp: bool,
    pub two_sided: bool,
    pub wrap_ops: bool,
    pub avoid_double_blend: DoubleBlendGuard,
    pub encoding: Encoding,
    /// Leave out the zero-area back cap of directional lights under fans.
    pub drop_directional_back_cap: bool,
}

impl Default for PipelineModes {
    fn default() -> Self {
        PipelineModes {
            formulation: Formulation::ZFail,
            projection: Projection::Infinite,
            depth_clamp: false,
            two_sided: false,
            wrap_ops: true,
            avoid_double_blend: DoubleBlendGuard::Incr,
            encoding: Encoding::Independent,
            drop_directional_back_cap: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderTarget {
    pub width: usize,
    pub height: usize,
    pub stencil_bits: u32,
}

impl Default for RenderTarget {
    fn default() -> Self {
        RenderTarget { width: 512, height: 512, stencil_bits: 8 }
    }
}

/// Chooses the counting scheme for each silhouette loop under
/// [`Formulation::Mixed`]. Loops of one occluder must agree.
pub trait LoopPolicy {
    fn choose(&self, object: usize, loop_index: usize, edge_loop: &EdgeLoop) -> Counting;
}

impl<F: Fn(usize, usize, &EdgeLoop) -> Counting> LoopPolicy for F {
    fn choose(&self, object: usize, loop_index: usize, edge_loop: &EdgeLoop) -> Counting {
        self(object, loop_index, edge_loop)
    }
}

/// Per-object hint, zfail when absent.
pub struct HintPolicy<'a>(pub &'a Scene);

impl LoopPolicy for HintPolicy<'_> {
    fn choose(&self, object: usize, _: usize, _: &EdgeLoop) -> Counting {
        self.0.objects[object].counting_hint.unwrap_or(Counting::ZFail)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LightStats {
    pub silhouette_loops: usize,
    pub silhouette_edges: usize,
    pub side_vertices_submitted: u64,
    pub cap_vertices_submitted: u64,
    pub volume: RasterStats,
    pub lighting: RasterStats,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PassTimings {
    pub ambient_ms: f64,
    pub volume_ms: f64,
    pub lighting_ms: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PassStats {
    pub stencil_writes: u64,
    /// Fragments generated while rasterizing shadow volumes.
    pub shadow_fragments: u64,
    pub volume_vertices_submitted: u64,
    pub stencil_saturations: u64,
    /// A saturating stencil op hit its bound during a volume pass.
    pub stencil_overflow: bool,
    pub ambient: RasterStats,
    pub lights: Vec<LightStats>,
    /// Wall-clock times; left out of serialized reports to keep them reproducible.
    #[serde(skip)]
    pub timings: PassTimings,
}

#[derive(Debug, Clone)]
pub struct Frame {
    pub framebuffer: Framebuffer,
    pub stats: PassStats,
    /// Stencil buffer right after each light's volume pass.
    pub shadow_counts: Vec<Vec<u32>>,
}

/// Lambert diffuse plus optional Blinn specular for one light. `eye` is used
/// only for the specular half vector.
pub fn shade_fragment(position: [f64; 3], normal: [f64; 3], eye: [f64; 3], material: &Material, light: &Light) -> [f64; 3] {
    let Some(n) = normalize3(normal) else { return [0.0; 3] };
    let to_light = if light.position.w == 0.0 {
        light.position.xyz()
    } else {
        sub3(scale3(light.position.xyz(), 1.0 / light.position.w), position)
    };
    let Some(l) = normalize3(to_light) else { return [0.0; 3] };
    let ndl = dot3(n, l);
    if ndl <= 0.0 {
        return [0.0; 3];
    }
    let mut c = [0.0; 3];
    for k in 0..3 {
        c[k] = ndl * material.diffuse[k] * light.color[k];
    }
    if let (Some(specular), Some(v)) = (material.specular, normalize3(sub3(eye, position))) {
        if let Some(h) = normalize3([l[0] + v[0], l[1] + v[1], l[2] + v[2]]) {
            let s = dot3(n, h).max(0.0).powf(material.exponent);
            for k in 0..3 {
                c[k] += s * specular[k] * light.color[k];
            }
        }
    }
    c
}

/// Clip-space triangle carrying world position and face normal.
fn shaded_triangle(view_proj: &HMat4, tri: [HVec4; 3]) -> [ClipVertex; 3] {
    let n = crate::hgeom::plane_cofactors(tri[0], tri[1], tri[2]).normal();
    tri.map(|p| {
        let mut attrs = [0.0; ATTRS];
        if let Some(a) = p.to_affine() {
            attrs[..3].copy_from_slice(&a);
        }
        attrs[3..].copy_from_slice(&n);
        ClipVertex { pos: transform(view_proj, p), attrs }
    })
}

fn clip_triangle_of(view_proj: &HMat4, tri: [HVec4; 3]) -> [ClipVertex; 3] {
    tri.map(|p| ClipVertex::new(transform(view_proj, p)))
}

struct Prepared {
    object: usize,
    adjacency: Adjacency,
    planes: Vec<crate::hgeom::Plane>,
}

fn prepare(scene: &Scene) -> Result<Vec<Prepared>, PipelineError> {
    scene
        .occluders()
        .map(|(index, o)| {
            let err = |source| PipelineError::InvalidMesh { index, source };
            Ok(Prepared { object: index, adjacency: build_adjacency(&o.mesh).map_err(err)?, planes: o.mesh.planes().map_err(err)? })
        })
        .collect()
}

pub fn render_frame(scene: &Scene, modes: &PipelineModes, target: RenderTarget) -> Result<Frame, PipelineError> {
    render_frame_with_policy(scene, modes, target, &HintPolicy(scene))
}

pub fn render_frame_with_policy(
    scene: &Scene,
    modes: &PipelineModes,
    target: RenderTarget,
    policy: &dyn LoopPolicy,
) -> Result<Frame, PipelineError> {
    if modes.two_sided && !modes.wrap_ops {
        return Err(PipelineError::TwoSidedNeedsWrap);
    }
    scene.validate()?;
    let prepared = prepare(scene)?;

    let mut fb = Framebuffer::new(target.width, target.height, target.stencil_bits)?;
    fb.clear_color([0.0; 3]);
    fb.clear_depth(1.0);
    let view_proj = scene.camera.projection(modes.projection)?.mul_mat(&scene.camera.view_matrix()?);
    let mut stats = PassStats::default();

    let t0 = Instant::now();
    let ambient_state = RenderState {
        depth_test: true,
        depth_func: DepthFunc::Less,
        depth_write: true,
        color_write: true,
        cull: CullMode::Back,
        blend: BlendMode::Replace,
        depth_clamp: modes.depth_clamp,
        ..Default::default()
    };
    for o in &scene.objects {
        let c = std::array::from_fn::<f64, 3, _>(|k| scene.ambient[k] * o.material.diffuse[k]);
        let mut shade = |_: &Fragment| c;
        for t in 0..o.mesh.triangles.len() {
            let tri = clip_triangle_of(&view_proj, o.mesh.triangle_vertices(t));
            draw_triangle(&mut fb, &ambient_state, tri, &mut shade, &mut stats.ambient);
        }
    }
    stats.timings.ambient_ms = t0.elapsed().as_secs_f64() * 1e3;

    let mut shadow_counts = Vec::with_capacity(scene.lights.len());
    for (li, light) in scene.lights.iter().enumerate() {
        fb.clear_stencil(0);
        let mut ls = LightStats::default();
        let t1 = Instant::now();
        for p in &prepared {
            let o = &scene.objects[p.object];
            let facing = classify_facing(&p.planes, light.position);
            let opts = VolumeOptions { encoding: modes.encoding, drop_directional_back_cap: modes.drop_directional_back_cap };
            let encoding_ok = modes.encoding != Encoding::Fans || light.position.w == 0.0;
            let opts = if encoding_ok { opts } else { VolumeOptions { encoding: Encoding::Independent, ..opts } };
            let volume = build_shadow_volume(&o.mesh, &p.adjacency, &facing, light.position, opts)
                .map_err(|source| PipelineError::Volume { index: p.object, light: li, source })?;
            let counting = choose_counting(p.object, &o.mesh, &p.adjacency, &facing, modes, policy)?;
            ls.silhouette_loops += volume.loops.len();
            ls.silhouette_edges += volume.quad_count();
            shadow_volume_pass(&mut fb, &view_proj, &volume, counting, modes, &mut ls);
        }
        stats.timings.volume_ms += t1.elapsed().as_secs_f64() * 1e3;
        shadow_counts.push(fb.stencil.clone());

        let t2 = Instant::now();
        lighting_pass(&mut fb, &view_proj, scene, light, modes, &mut ls.lighting);
        stats.timings.lighting_ms += t2.elapsed().as_secs_f64() * 1e3;

        stats.stencil_writes += ls.volume.stencil_writes + ls.lighting.stencil_writes;
        stats.shadow_fragments += ls.volume.fragments;
        stats.volume_vertices_submitted += ls.side_vertices_submitted + ls.cap_vertices_submitted;
        stats.stencil_saturations += ls.volume.stencil_saturations;
        stats.lights.push(ls);
    }
    stats.stencil_overflow = !modes.wrap_ops && stats.stencil_saturations > 0;
    stats.stencil_writes += stats.ambient.stencil_writes;
    Ok(Frame { framebuffer: fb, stats, shadow_counts })
}

fn choose_counting(
    object: usize,
    mesh: &TriMesh,
    adjacency: &Adjacency,
    facing: &crate::mesh::FacingSet,
    modes: &PipelineModes,
    policy: &dyn LoopPolicy,
) -> Result<Counting, PipelineError> {
    match modes.formulation {
        Formulation::ZFail => Ok(Counting::ZFail),
        Formulation::ZPass => Ok(Counting::ZPass),
        Formulation::Mixed => {
            let edges = crate::mesh::extract_silhouette_edges(mesh, adjacency, facing);
            let loops = crate::mesh::stitch_loops(&edges)
                .map_err(|source| PipelineError::InvalidMesh { index: object, source })?;
            let mut choice = None;
            for (i, l) in loops.iter().enumerate() {
                let c = policy.choose(object, i, l);
                if choice.is_some_and(|prev| prev != c) {
                    return Err(PipelineError::SplitOccluderFormulation(object));
                }
                choice = Some(c);
            }
            Ok(choice.unwrap_or(Counting::ZFail))
        }
    }
}

/// Stencil states for the face that increments and the face that
/// decrements under `counting`.
fn counting_states(counting: Counting, wrap: bool) -> (StencilFaceState, StencilFaceState) {
    let (inc, dec) = if wrap { (StencilOp::IncrWrap, StencilOp::DecrWrap) } else { (StencilOp::Incr, StencilOp::Decr) };
    let keep = StencilOp::Keep;
    match counting {
        Counting::ZFail => (StencilFaceState::ops(inc, keep), StencilFaceState::ops(dec, keep)),
        Counting::ZPass => (StencilFaceState::ops(keep, inc), StencilFaceState::ops(keep, dec)),
    }
}

/// Rasterizes one volume into the stencil buffer. zfail counts back faces up
/// and front faces down where the depth test fails; zpass counts front faces
/// up and back faces down where it passes, and skips the caps.
pub fn shadow_volume_pass(
    fb: &mut Framebuffer,
    view_proj: &HMat4,
    volume: &ShadowVolumeGeometry,
    counting: Counting,
    modes: &PipelineModes,
    stats: &mut LightStats,
) {
    let mut tris = volume.side_triangles();
    let mut vertices = volume.side_vertex_count() as u64;
    let mut cap_vertices = 0;
    if counting == Counting::ZFail {
        tris.extend(volume.cap_triangles());
        cap_vertices = volume.cap_vertex_count() as u64;
    }
    let clip: Vec<[ClipVertex; 3]> = tris.into_iter().map(|t| clip_triangle_of(view_proj, t)).collect();
    let (inc, dec) = counting_states(counting, modes.wrap_ops);
    let (inc_cull, dec_cull) = match counting {
        Counting::ZFail => (CullMode::Front, CullMode::Back),
        Counting::ZPass => (CullMode::Back, CullMode::Front),
    };
    let base = RenderState {
        depth_test: true,
        depth_func: DepthFunc::Less,
        depth_write: false,
        color_write: false,
        cull: CullMode::None,
        blend: BlendMode::Replace,
        stencil_test: true,
        depth_clamp: modes.depth_clamp,
        ..Default::default()
    };
    let mut none = |_: &Fragment| [0.0; 3];
    if modes.two_sided {
        let (front, back) = match counting {
            Counting::ZFail => (dec, inc),
            Counting::ZPass => (inc, dec),
        };
        let state = RenderState { stencil_front: front, stencil_back: back, two_sided: true, ..base };
        for t in &clip {
            draw_triangle(fb, &state, *t, &mut none, &mut stats.volume);
        }
    } else {
        for (face, cull) in [(inc, inc_cull), (dec, dec_cull)] {
            let state = RenderState { stencil_front: face, cull, ..base };
            for t in &clip {
                draw_triangle(fb, &state, *t, &mut none, &mut stats.volume);
            }
        }
        vertices *= 2;
        cap_vertices *= 2;
    }
    stats.side_vertices_submitted += vertices;
    stats.cap_vertices_submitted += cap_vertices;
}

/// Adds one light's contribution wherever the stencil is zero and the
/// fragment is the visible one.
pub fn lighting_pass(
    fb: &mut Framebuffer,
    view_proj: &HMat4,
    scene: &Scene,
    light: &Light,
    modes: &PipelineModes,
    stats: &mut RasterStats,
) {
    let zpass_op = match modes.avoid_double_blend {
        DoubleBlendGuard::Incr => StencilOp::Incr,
        DoubleBlendGuard::Keep => StencilOp::Keep,
    };
    let state = RenderState {
        depth_test: true,
        depth_func: DepthFunc::Equal,
        depth_write: false,
        color_write: true,
        cull: CullMode::Back,
        blend: BlendMode::Add,
        stencil_test: true,
        stencil_front: StencilFaceState {
            func: StencilFunc::Equal,
            reference: 0,
            on_depth_pass: zpass_op,
            ..Default::default()
        },
        depth_clamp: modes.depth_clamp,
        ..Default::default()
    };
    let eye = scene.camera.eye;
    for o in &scene.objects {
        let mut shade = |f: &Fragment| {
            let p = [f.attrs[0], f.attrs[1], f.attrs[2]];
            let n = [f.attrs[3], f.attrs[4], f.attrs[5]];
            shade_fragment(p, n, eye, &o.material, light)
        };
        for t in 0..o.mesh.triangles.len() {
            let tri = shaded_triangle(view_proj, o.mesh.triangle_vertices(t));
            draw_triangle(fb, &state, tri, &mut shade, stats);
        }
    }
}

/// `far` for scenes given with an infinite far plane but rendered with the
/// finite projection.
pub fn with_far(camera: &Camera, far: f64) -> Camera {
    Camera { frustum: FrustumParams { far: FarPlane::Finite(far), ..camera.frustum }, ..camera.clone() }
}
