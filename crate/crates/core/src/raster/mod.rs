//! Software fragment pipeline: homogeneous clipping, watertight fixed-point
//! triangle setup, and depth/stencil/blend operations with separate front
//! and back stencil state.

mod clip;
pub mod image;
mod triangle;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use clip::{clip_polygon, clip_triangle, GUARD_W};
pub use triangle::{draw_triangle, face_orientation, snap, to_window, WindowVertex, SUBPIXEL_BITS};

/// Per-vertex values interpolated across a triangle (world position, normal).
pub const ATTRS: usize = 6;

pub const MAX_DIMENSION: usize = 8192;
pub const MAX_STENCIL_BITS: u32 = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RasterError {
    #[error("framebuffer size {0}x{1} outside 1..={MAX_DIMENSION}")]
    InvalidDimensions(usize, usize),
    #[error("stencil bit width {0} outside 1..={MAX_STENCIL_BITS}")]
    InvalidStencilBits(u32),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClipVertex {
    pub pos: crate::hgeom::HVec4,
    pub attrs: [f64; ATTRS],
}

impl ClipVertex {
    pub fn new(pos: crate::hgeom::HVec4) -> Self {
        ClipVertex { pos, attrs: [0.0; ATTRS] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Front,
    Back,
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fragment {
    pub x: usize,
    pub y: usize,
    /// Window depth in `[0, 1]`.
    pub depth: f64,
    pub attrs: [f64; ATTRS],
    pub orientation: Orientation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DepthFunc {
    Less,
    LessEqual,
    Equal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CullMode {
    None,
    Front,
    Back,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlendMode {
    Replace,
    /// Unclamped component-wise sum; clamping happens at image export.
    Add,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StencilFunc {
    Always,
    Equal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StencilOp {
    Keep,
    Incr,
    Decr,
    IncrWrap,
    DecrWrap,
}

impl StencilOp {
    /// New stencil value and whether a saturating op was clamped.
    pub fn apply(self, value: u32, max: u32) -> (u32, bool) {
        match self {
            StencilOp::Keep => (value, false),
            StencilOp::Incr if value >= max => (max, true),
            StencilOp::Incr => (value + 1, false),
            StencilOp::Decr if value == 0 => (0, true),
            StencilOp::Decr => (value - 1, false),
            StencilOp::IncrWrap => (value.wrapping_add(1) & max, false),
            StencilOp::DecrWrap => (value.wrapping_sub(1) & max, false),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StencilFaceState {
    pub func: StencilFunc,
    pub reference: u32,
    pub mask: u32,
    pub on_stencil_fail: StencilOp,
    pub on_depth_fail: StencilOp,
    pub on_depth_pass: StencilOp,
}

impl Default for StencilFaceState {
    fn default() -> Self {
        StencilFaceState {
            func: StencilFunc::Always,
            reference: 0,
            mask: u32::MAX,
            on_stencil_fail: StencilOp::Keep,
            on_depth_fail: StencilOp::Keep,
            on_depth_pass: StencilOp::Keep,
        }
    }
}

impl StencilFaceState {
    pub fn ops(on_depth_fail: StencilOp, on_depth_pass: StencilOp) -> Self {
        StencilFaceState { on_depth_fail, on_depth_pass, ..Default::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderState {
    pub depth_test: bool,
    pub depth_func: DepthFunc,
    pub depth_write: bool,
    pub color_write: bool,
    pub cull: CullMode,
    pub blend: BlendMode,
    pub stencil_test: bool,
    pub stencil_front: StencilFaceState,
    pub stencil_back: StencilFaceState,
    pub two_sided: bool,
    pub depth_clamp: bool,
}

impl Default for RenderState {
    fn default() -> Self {
        RenderState {
            depth_test: true,
            depth_func: DepthFunc::Less,
            depth_write: true,
            color_write: true,
            cull: CullMode::None,
            blend: BlendMode::Replace,
            stencil_test: false,
            stencil_front: StencilFaceState::default(),
            stencil_back: StencilFaceState::default(),
            two_sided: false,
            depth_clamp: false,
        }
    }
}

/// Stencil state for a primitive of the given orientation. Without two-sided
/// mode the front state applies to everything.
pub fn select_stencil_face(orientation: Orientation, state: &RenderState) -> &StencilFaceState {
    if state.two_sided && orientation == Orientation::Back {
        &state.stencil_back
    } else {
        &state.stencil_front
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RasterStats {
    pub triangles: u64,
    pub fragments: u64,
    pub depth_passes: u64,
    pub stencil_writes: u64,
    pub stencil_saturations: u64,
    pub color_writes: u64,
}

impl RasterStats {
    pub fn add(&mut self, o: &RasterStats) {
        self.triangles += o.triangles;
        self.fragments += o.fragments;
        self.depth_passes += o.depth_passes;
        self.stencil_writes += o.stencil_writes;
        self.stencil_saturations += o.stencil_saturations;
        self.color_writes += o.color_writes;
    }
}

/// Color, depth and stencil planes. Rows are stored bottom-up (row 0 is the
/// bottom of the image, matching the y-up window convention).
#[derive(Debug, Clone, PartialEq)]
pub struct Framebuffer {
    width: usize,
    height: usize,
    stencil_bits: u32,
    pub color: Vec<[f64; 3]>,
    pub depth: Vec<f64>,
    pub stencil: Vec<u32>,
}

impl Framebuffer {
    pub fn new(width: usize, height: usize, stencil_bits: u32) -> Result<Self, RasterError> {
        if width == 0 || height == 0 || width > MAX_DIMENSION || height > MAX_DIMENSION {
            return Err(RasterError::InvalidDimensions(width, height));
        }
        if stencil_bits == 0 || stencil_bits > MAX_STENCIL_BITS {
            return Err(RasterError::InvalidStencilBits(stencil_bits));
        }
        let n = width * height;
        Ok(Framebuffer {
            width,
            height,
            stencil_bits,
            color: vec![[0.0; 3]; n],
            depth: vec![1.0; n],
            stencil: vec![0; n],
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn stencil_bits(&self) -> u32 {
        self.stencil_bits
    }

    pub fn stencil_max(&self) -> u32 {
        (1u32 << self.stencil_bits) - 1
    }

    pub fn index(&self, x: usize, y: usize) -> usize {
        y * self.width + x
    }

    pub fn clear_color(&mut self, c: [f64; 3]) {
        self.color.fill(c);
    }

    pub fn clear_depth(&mut self, d: f64) {
        self.depth.fill(d.clamp(0.0, 1.0));
    }

    pub fn clear_stencil(&mut self, s: u32) {
        let m = self.stencil_max();
        self.stencil.fill(s & m);
    }
}

fn depth_test(func: DepthFunc, incoming: f64, stored: f64) -> bool {
    match func {
        DepthFunc::Less => incoming < stored,
        DepthFunc::LessEqual => incoming <= stored,
        DepthFunc::Equal => incoming == stored,
    }
}

/// Stencil test, depth test, then exactly one stencil op chosen by the
/// outcome; depth and color are written only when both tests pass.
pub fn apply_fragment_ops(
    fb: &mut Framebuffer,
    state: &RenderState,
    frag: &Fragment,
    shader: &mut dyn FnMut(&Fragment) -> [f64; 3],
    stats: &mut RasterStats,
) {
    let idx = fb.index(frag.x, frag.y);
    let max = fb.stencil_max();
    let face = *select_stencil_face(frag.orientation, state);
    let stored = fb.stencil[idx];

    let mut write_stencil = |op: StencilOp, fb: &mut Framebuffer| {
        if op == StencilOp::Keep {
            return;
        }
        let (v, clamped) = op.apply(stored, max);
        fb.stencil[idx] = v;
        stats.stencil_writes += 1;
        if clamped {
            stats.stencil_saturations += 1;
        }
    };

    if state.stencil_test {
        let pass = match face.func {
            StencilFunc::Always => true,
            StencilFunc::Equal => (face.reference & face.mask) == (stored & face.mask),
        };
        if !pass {
            write_stencil(face.on_stencil_fail, fb);
            return;
        }
    }
    let depth_ok = !state.depth_test || depth_test(state.depth_func, frag.depth, fb.depth[idx]);
    if !depth_ok {
        if state.stencil_test {
            write_stencil(face.on_depth_fail, fb);
        }
        return;
    }
    if state.stencil_test {
        write_stencil(face.on_depth_pass, fb);
    }
    stats.depth_passes += 1;
    if state.depth_write {
        fb.depth[idx] = frag.depth;
    }
    if state.color_write {
        let c = shader(frag);
        let dst = &mut fb.color[idx];
        match state.blend {
            BlendMode::Replace => *dst = c,
            BlendMode::Add => {
                for k in 0..3 {
                    dst[k] += c[k];
                }
            }
        }
        stats.color_writes += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hgeom::HVec4;
    use proptest::prelude::*;

    fn frag(orientation: Orientation, depth: f64) -> Fragment {
        Fragment { x: 0, y: 0, depth, attrs: [0.0; ATTRS], orientation }
    }

    fn stencil_state(op: StencilOp) -> RenderState {
        RenderState {
            depth_test: false,
            depth_write: false,
            color_write: false,
            stencil_test: true,
            stencil_front: StencilFaceState::ops(op, op),
            ..Default::default()
        }
    }

    fn run(fb: &mut Framebuffer, op: StencilOp) -> RasterStats {
        let mut stats = RasterStats::default();
        apply_fragment_ops(fb, &stencil_state(op), &frag(Orientation::Front, 0.5), &mut |_| [0.0; 3], &mut stats);
        stats
    }

    #[test]
    fn saturating_and_wrapping_ops_at_bounds() {
        let mut fb = Framebuffer::new(1, 1, 8).unwrap();
        fb.stencil[0] = 255;
        let s = run(&mut fb, StencilOp::Incr);
        assert_eq!((fb.stencil[0], s.stencil_saturations), (255, 1));
        run(&mut fb, StencilOp::IncrWrap);
        assert_eq!(fb.stencil[0], 0);
        let s = run(&mut fb, StencilOp::Decr);
        assert_eq!((fb.stencil[0], s.stencil_saturations), (0, 1));
        run(&mut fb, StencilOp::DecrWrap);
        assert_eq!(fb.stencil[0], 255);
    }

    #[test]
    fn equal_depth_passes_and_add_accumulates() {
        let mut fb = Framebuffer::new(1, 1, 8).unwrap();
        fb.depth[0] = 0.25;
        fb.color[0] = [0.1, 0.2, 0.3];
        let state = RenderState {
            depth_func: DepthFunc::Equal,
            depth_write: false,
            blend: BlendMode::Add,
            ..Default::default()
        };
        let mut stats = RasterStats::default();
        apply_fragment_ops(&mut fb, &state, &frag(Orientation::Front, 0.25), &mut |_| [0.5, 0.5, 0.5], &mut stats);
        assert_eq!(fb.color[0], [0.6, 0.7, 0.8]);
        apply_fragment_ops(&mut fb, &state, &frag(Orientation::Front, 0.2500001), &mut |_| [1.0; 3], &mut stats);
        assert_eq!(fb.color[0], [0.6, 0.7, 0.8]);
        assert_eq!(stats.color_writes, 1);
    }

    #[test]
    fn select_face_state() {
        let decr = StencilFaceState::ops(StencilOp::Decr, StencilOp::Keep);
        let incr = StencilFaceState::ops(StencilOp::Incr, StencilOp::Keep);
        let mut st = RenderState { stencil_front: decr, stencil_back: incr, two_sided: true, ..Default::default() };
        assert_eq!(*select_stencil_face(Orientation::Front, &st), decr);
        assert_eq!(*select_stencil_face(Orientation::Back, &st), incr);
        st.two_sided = false;
        assert_eq!(*select_stencil_face(Orientation::Back, &st), decr);
    }

    #[test]
    fn stencil_equal_gate_and_double_blend_guard() {
        let mut fb = Framebuffer::new(1, 1, 8).unwrap();
        fb.depth[0] = 0.5;
        let state = RenderState {
            depth_func: DepthFunc::Equal,
            depth_write: false,
            blend: BlendMode::Add,
            stencil_test: true,
            stencil_front: StencilFaceState {
                func: StencilFunc::Equal,
                on_depth_pass: StencilOp::Incr,
                ..Default::default()
            },
            ..Default::default()
        };
        let mut stats = RasterStats::default();
        for _ in 0..2 {
            apply_fragment_ops(&mut fb, &state, &frag(Orientation::Front, 0.5), &mut |_| [0.25; 3], &mut stats);
        }
        assert_eq!(fb.color[0], [0.25; 3]);
        assert_eq!(fb.stencil[0], 1);
    }

    #[test]
    fn depth_fail_selects_depth_fail_op() {
        let mut fb = Framebuffer::new(1, 1, 8).unwrap();
        fb.depth[0] = 0.3;
        let state = RenderState {
            depth_write: false,
            color_write: false,
            stencil_test: true,
            stencil_front: StencilFaceState::ops(StencilOp::Incr, StencilOp::Decr),
            ..Default::default()
        };
        let mut stats = RasterStats::default();
        apply_fragment_ops(&mut fb, &state, &frag(Orientation::Front, 0.6), &mut |_| [0.0; 3], &mut stats);
        assert_eq!(fb.stencil[0], 1);
        apply_fragment_ops(&mut fb, &state, &frag(Orientation::Front, 0.1), &mut |_| [0.0; 3], &mut stats);
        assert_eq!(fb.stencil[0], 0);
        assert_eq!(fb.depth[0], 0.3);
    }

    #[test]
    fn framebuffer_limits() {
        assert!(Framebuffer::new(0, 4, 8).is_err());
        assert!(Framebuffer::new(8193, 4, 8).is_err());
        assert!(Framebuffer::new(4, 4, 0).is_err());
        assert_eq!(Framebuffer::new(4, 4, 4).unwrap().stencil_max(), 15);
    }

    #[test]
    fn clip_vertex_default_attrs() {
        assert_eq!(ClipVertex::new(HVec4::point(1.0, 2.0, 3.0)).attrs, [0.0; ATTRS]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]
        #[test]
        fn wrap_ops_count_modulo(ops in proptest::collection::vec(any::<bool>(), 0..300), bits in prop_oneof![Just(4u32), Just(8u32)]) {
            let mut fb = Framebuffer::new(1, 1, bits).unwrap();
            let (mut k, mut m) = (0i64, 0i64);
            for up in &ops {
                if *up { k += 1; run(&mut fb, StencilOp::IncrWrap); } else { m += 1; run(&mut fb, StencilOp::DecrWrap); }
            }
            prop_assert_eq!(fb.stencil[0] as i64, (k - m).rem_euclid(1 << bits));
        }

        #[test]
        fn saturating_ops_clamp(ops in proptest::collection::vec(any::<bool>(), 0..300), bits in prop_oneof![Just(4u32), Just(8u32)]) {
            let mut fb = Framebuffer::new(1, 1, bits).unwrap();
            let max = (1i64 << bits) - 1;
            let mut expect = 0i64;
            for up in &ops {
                if *up { expect = (expect + 1).min(max); run(&mut fb, StencilOp::Incr); }
                else { expect = (expect - 1).max(0); run(&mut fb, StencilOp::Decr); }
            }
            prop_assert_eq!(fb.stencil[0] as i64, expect);
        }
    }
}
