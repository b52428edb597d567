//! Homogeneous vectors and matrices, perspective projections with finite and
//! infinite far planes, and plane equations that accept points at infinity.
//!
//! All math here is `f64`. A point with `w == 0` is a direction (a point at
//! infinity); model vertices and light positions are required to have `w >= 0`.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("invalid frustum parameter: {0}")]
    InvalidFrustum(&'static str),
    #[error("degenerate triangle: plane coefficients vanish")]
    DegenerateTriangle,
}

/// Homogeneous 4-vector `(x, y, z, w)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct HVec4 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub w: f64,
}

impl HVec4 {
    pub const fn new(x: f64, y: f64, z: f64, w: f64) -> Self {
        Self { x, y, z, w }
    }

    /// Affine point `(x, y, z, 1)`.
    pub const fn point(x: f64, y: f64, z: f64) -> Self {
        Self::new(x, y, z, 1.0)
    }

    /// Direction `(x, y, z, 0)`.
    pub const fn direction(x: f64, y: f64, z: f64) -> Self {
        Self::new(x, y, z, 0.0)
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.x, self.y, self.z, self.w]
    }

    pub fn dot(self, o: Self) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z + self.w * o.w
    }

    pub fn xyz(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn is_at_infinity(self) -> bool {
        self.w == 0.0
    }

    /// Euclidean position `xyz / w`; `None` for points at infinity.
    pub fn to_affine(self) -> Option<[f64; 3]> {
        if self.w == 0.0 {
            None
        } else {
            Some([self.x / self.w, self.y / self.w, self.z / self.w])
        }
    }

    pub fn max_abs(self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs()).max(self.w.abs())
    }

    pub fn is_zero(self) -> bool {
        self.x == 0.0 && self.y == 0.0 && self.z == 0.0 && self.w == 0.0
    }

    /// Linear interpolation `self + t * (o - self)` in homogeneous space.
    pub fn lerp(self, o: Self, t: f64) -> Self {
        Self::new(
            self.x + t * (o.x - self.x),
            self.y + t * (o.y - self.y),
            self.z + t * (o.z - self.z),
            self.w + t * (o.w - self.w),
        )
    }

    /// Bit pattern with `-0.0` folded onto `0.0`; used as an exact vertex identity.
    pub fn bit_key(self) -> [u64; 4] {
        let f = |v: f64| if v == 0.0 { 0u64 } else { v.to_bits() };
        [f(self.x), f(self.y), f(self.z), f(self.w)]
    }
}

impl Add for HVec4 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z, self.w + o.w)
    }
}

impl Sub for HVec4 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z, self.w - o.w)
    }
}

impl Mul<f64> for HVec4 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s, self.w * s)
    }
}

impl Neg for HVec4 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z, -self.w)
    }
}

/// Row-major 4x4 matrix acting on column vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HMat4 {
    pub rows: [[f64; 4]; 4],
}

impl Default for HMat4 {
    fn default() -> Self {
        Self::identity()
    }
}

impl HMat4 {
    pub const fn from_rows(rows: [[f64; 4]; 4]) -> Self {
        Self { rows }
    }

    pub const fn identity() -> Self {
        Self::from_rows([
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ])
    }

    pub fn row(&self, i: usize) -> [f64; 4] {
        self.rows[i]
    }

    pub fn translation(t: [f64; 3]) -> Self {
        Self::from_rows([
            [1.0, 0.0, 0.0, t[0]],
            [0.0, 1.0, 0.0, t[1]],
            [0.0, 0.0, 1.0, t[2]],
            [0.0, 0.0, 0.0, 1.0],
        ])
    }

    pub fn scale(s: [f64; 3]) -> Self {
        Self::from_rows([
            [s[0], 0.0, 0.0, 0.0],
            [0.0, s[1], 0.0, 0.0],
            [0.0, 0.0, s[2], 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ])
    }

    pub fn rotation_x(radians: f64) -> Self {
        let (s, c) = radians.sin_cos();
        Self::from_rows([
            [1.0, 0.0, 0.0, 0.0],
            [0.0, c, -s, 0.0],
            [0.0, s, c, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ])
    }

    pub fn rotation_y(radians: f64) -> Self {
        let (s, c) = radians.sin_cos();
        Self::from_rows([
            [c, 0.0, s, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [-s, 0.0, c, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ])
    }

    pub fn rotation_z(radians: f64) -> Self {
        let (s, c) = radians.sin_cos();
        Self::from_rows([
            [c, -s, 0.0, 0.0],
            [s, c, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ])
    }

    /// Viewing transform in the style of `gluLookAt`: the eye looks down `-z`.
    pub fn look_at(eye: [f64; 3], target: [f64; 3], up: [f64; 3]) -> Option<Self> {
        let f = normalize3(sub3(target, eye))?;
        let s = normalize3(cross3(f, up))?;
        let u = cross3(s, f);
        Some(Self::from_rows([
            [s[0], s[1], s[2], -dot3(s, eye)],
            [u[0], u[1], u[2], -dot3(u, eye)],
            [-f[0], -f[1], -f[2], dot3(f, eye)],
            [0.0, 0.0, 0.0, 1.0],
        ]))
    }

    pub fn mul_mat(&self, o: &HMat4) -> HMat4 {
        let mut r = [[0.0; 4]; 4];
        for (i, row) in r.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..4).map(|k| self.rows[i][k] * o.rows[k][j]).sum();
            }
        }
        HMat4::from_rows(r)
    }

    /// Determinant of the upper-left 3x3 block.
    pub fn linear_determinant(&self) -> f64 {
        let m = &self.rows;
        det3([
            [m[0][0], m[0][1], m[0][2]],
            [m[1][0], m[1][1], m[1][2]],
            [m[2][0], m[2][1], m[2][2]],
        ])
    }
}

impl Mul for HMat4 {
    type Output = HMat4;
    fn mul(self, o: HMat4) -> HMat4 {
        self.mul_mat(&o)
    }
}

/// Matrix-vector product. No perspective divide.
pub fn transform(m: &HMat4, v: HVec4) -> HVec4 {
    let r = |i: usize| {
        let row = m.rows[i];
        row[0] * v.x + row[1] * v.y + row[2] * v.z + row[3] * v.w
    };
    HVec4::new(r(0), r(1), r(2), r(3))
}

/// Far clip distance: a finite eye-space distance or infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FarPlane {
    Finite(f64),
    Infinite,
}

/// Symmetric perspective frustum in the field-of-view form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrustumParams {
    /// Vertical field of view, radians.
    pub fov_y: f64,
    pub aspect: f64,
    pub near: f64,
    pub far: FarPlane,
}

impl FrustumParams {
    pub fn new(fov_y: f64, aspect: f64, near: f64, far: FarPlane) -> Self {
        Self { fov_y, aspect, near, far }
    }

    pub fn validate(&self) -> Result<(), GeomError> {
        if !(self.fov_y > 0.0 && self.fov_y < std::f64::consts::PI) {
            return Err(GeomError::InvalidFrustum("field of view must be in (0, pi)"));
        }
        if !(self.aspect > 0.0 && self.aspect.is_finite()) {
            return Err(GeomError::InvalidFrustum("aspect must be positive"));
        }
        if !(self.near > 0.0 && self.near.is_finite()) {
            return Err(GeomError::InvalidFrustum("near must be positive"));
        }
        if let FarPlane::Finite(far) = self.far {
            if !(far > self.near) || !far.is_finite() {
                return Err(GeomError::InvalidFrustum("far must exceed near"));
            }
        }
        Ok(())
    }

    fn half_extents(&self) -> (f64, f64) {
        let top = self.near * (self.fov_y * 0.5).tan();
        (top * self.aspect, top)
    }
}

/// General `glFrustum` matrix. `far == None` selects the infinite limit.
pub(crate) fn frustum_matrix(
    left: f64,
    right: f64,
    bottom: f64,
    top: f64,
    near: f64,
    far: Option<f64>,
) -> HMat4 {
    let row2 = match far {
        Some(far) => [0.0, 0.0, -(far + near) / (far - near), -2.0 * far * near / (far - near)],
        None => [0.0, 0.0, -1.0, -2.0 * near],
    };
    HMat4::from_rows([
        [2.0 * near / (right - left), 0.0, (right + left) / (right - left), 0.0],
        [0.0, 2.0 * near / (top - bottom), (top + bottom) / (top - bottom), 0.0],
        row2,
        [0.0, 0.0, -1.0, 0.0],
    ])
}

/// Standard perspective projection with a finite far plane.
pub fn perspective_finite(p: &FrustumParams) -> Result<HMat4, GeomError> {
    p.validate()?;
    let far = match p.far {
        FarPlane::Finite(f) => f,
        FarPlane::Infinite => {
            return Err(GeomError::InvalidFrustum("finite projection needs a finite far plane"))
        }
    };
    let (right, top) = p.half_extents();
    Ok(frustum_matrix(-right, right, -top, top, p.near, Some(far)))
}

/// Perspective projection with the far plane driven to infinity. Only row 2
/// differs from [`perspective_finite`]: `(0, 0, -1, -2 near)`.
pub fn perspective_infinite(p: &FrustumParams) -> Result<HMat4, GeomError> {
    let q = FrustumParams { far: FarPlane::Infinite, ..*p };
    q.validate()?;
    let (right, top) = q.half_extents();
    Ok(frustum_matrix(-right, right, -top, top, q.near, None))
}

/// Factor `(far - near) / far` by which the depth range shrinks to fit
/// infinity when switching from the finite to the infinite projection.
pub fn depth_compression_factor(near: f64, far: f64) -> f64 {
    (far - near) / far
}

/// Plane `a x + b y + c z + d w = 0`. Coefficients are not normalized.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Plane {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Plane {
    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    pub fn eval(&self, p: HVec4) -> f64 {
        self.a * p.x + self.b * p.y + self.c * p.z + self.d * p.w
    }

    pub fn normal(&self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    pub fn max_abs(&self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs()).max(self.d.abs())
    }
}

/// Plane through three homogeneous points, oriented so that points on the
/// counterclockwise (front) side evaluate non-negative.
///
/// The coefficients are the cofactors of the first row of the 4x4 matrix
/// `[x; a; b; c]`, so the plane evaluates to `det([p; a; b; c])`. Points at
/// infinity need no special handling.
pub fn plane_from_triangle(a: HVec4, b: HVec4, c: HVec4) -> Result<Plane, GeomError> {
    let p = plane_cofactors(a, b, c);
    let scale = a.max_abs().max(b.max_abs()).max(c.max_abs());
    let tol = 1e-12 * scale * scale * scale;
    if p.max_abs() <= tol || scale == 0.0 {
        return Err(GeomError::DegenerateTriangle);
    }
    Ok(p)
}

/// Cofactor plane without the degeneracy check.
pub(crate) fn plane_cofactors(a: HVec4, b: HVec4, c: HVec4) -> Plane {
    let r = [a.to_array(), b.to_array(), c.to_array()];
    let minor = |skip: usize| {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in r.iter().enumerate() {
            let mut k = 0;
            for (j, v) in row.iter().enumerate() {
                if j != skip {
                    m[i][k] = *v;
                    k += 1;
                }
            }
        }
        det3(m)
    };
    Plane::new(minor(0), -minor(1), minor(2), -minor(3))
}

pub(crate) fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

pub fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn sub3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn add3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn scale3(a: [f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn length3(a: [f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

pub fn normalize3(a: [f64; 3]) -> Option<[f64; 3]> {
    let l = length3(a);
    if l > 0.0 && l.is_finite() {
        Some(scale3(a, 1.0 / l))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fov90(aspect: f64, far: FarPlane) -> FrustumParams {
        FrustumParams::new(std::f64::consts::FRAC_PI_2, aspect, 1.0, far)
    }

    fn assert_row(actual: [f64; 4], expected: [f64; 4], tol: f64) {
        for k in 0..4 {
            assert!(
                (actual[k] - expected[k]).abs() <= tol,
                "row {actual:?} != {expected:?}"
            );
        }
    }

    #[test]
    fn finite_projection_fov90() {
        let p = perspective_finite(&fov90(1.0, FarPlane::Finite(100.0))).unwrap();
        assert_row(p.row(0), [1.0, 0.0, 0.0, 0.0], 1e-12);
        assert_row(p.row(1), [0.0, 1.0, 0.0, 0.0], 1e-12);
        assert_row(p.row(2), [0.0, 0.0, -101.0 / 99.0, -200.0 / 99.0], 1e-12);
        assert_row(p.row(3), [0.0, 0.0, -1.0, 0.0], 0.0);
    }

    #[test]
    fn finite_projection_aspect2() {
        let p = perspective_finite(&fov90(2.0, FarPlane::Finite(100.0))).unwrap();
        assert_row(p.row(0), [0.5, 0.0, 0.0, 0.0], 1e-12);
        assert_row(p.row(1), [0.0, 1.0, 0.0, 0.0], 1e-12);
        assert_row(p.row(2), [0.0, 0.0, -101.0 / 99.0, -200.0 / 99.0], 1e-12);
    }

    #[test]
    fn finite_projection_approaches_infinite_limit() {
        let p = perspective_finite(&fov90(1.0, FarPlane::Finite(1e9))).unwrap();
        assert_row(p.row(2), [0.0, 0.0, -1.0, -2.0], 1e-8);
    }

    #[test]
    fn finite_projection_rejects_bad_parameters() {
        let bad = [
            FrustumParams::new(1.0, 1.0, 0.0, FarPlane::Finite(10.0)),
            FrustumParams::new(1.0, 1.0, -1.0, FarPlane::Finite(10.0)),
            FrustumParams::new(1.0, 1.0, 2.0, FarPlane::Finite(2.0)),
            FrustumParams::new(0.0, 1.0, 1.0, FarPlane::Finite(10.0)),
            FrustumParams::new(1.0, 0.0, 1.0, FarPlane::Finite(10.0)),
            FrustumParams::new(1.0, 1.0, 1.0, FarPlane::Infinite),
        ];
        for p in bad {
            assert!(perspective_finite(&p).is_err(), "{p:?}");
        }
        assert!(perspective_infinite(&FrustumParams::new(1.0, 1.0, 0.0, FarPlane::Infinite)).is_err());
    }

    #[test]
    fn infinite_projection_third_row() {
        let p = perspective_infinite(&fov90(1.0, FarPlane::Infinite)).unwrap();
        assert_eq!(p.row(2), [0.0, 0.0, -1.0, -2.0]);
        assert_eq!(p.row(3), [0.0, 0.0, -1.0, 0.0]);
    }

    #[test]
    fn infinite_projection_maps_forward_direction_to_depth_one() {
        let p = perspective_infinite(&fov90(1.0, FarPlane::Infinite)).unwrap();
        let c = transform(&p, HVec4::direction(0.0, 0.0, -1.0));
        assert_eq!(c, HVec4::new(0.0, 0.0, 1.0, 1.0));
        assert_eq!(c.z / c.w, 1.0);
    }

    #[test]
    fn finite_projection_maps_forward_direction_beyond_depth_range() {
        let p = perspective_finite(&fov90(1.0, FarPlane::Finite(100.0))).unwrap();
        let c = transform(&p, HVec4::direction(0.0, 0.0, -1.0));
        assert!((c.z - 101.0 / 99.0).abs() < 1e-12);
        assert_eq!(c.w, 1.0);
        let window_depth = (c.z / c.w) * 0.5 + 0.5;
        assert!((window_depth - 100.0 / 99.0).abs() < 1e-12);
    }

    #[test]
    fn identity_transform() {
        let v = HVec4::new(1.5, -2.0, 3.25, 0.5);
        assert_eq!(transform(&HMat4::identity(), v), v);
    }

    #[test]
    fn depth_compression() {
        assert_eq!(depth_compression_factor(1.0, 100.0), 0.99);
        assert_eq!(depth_compression_factor(50.0, 100.0), 0.5);
        assert!((depth_compression_factor(1.0, 1e6) - 0.999999).abs() < 1e-15);
    }

    #[test]
    fn plane_examples() {
        let a = HVec4::point(0.0, 0.0, 0.0);
        let b = HVec4::point(1.0, 0.0, 0.0);
        let c = HVec4::point(0.0, 1.0, 0.0);
        assert_eq!(plane_from_triangle(a, b, c).unwrap(), Plane::new(0.0, 0.0, 1.0, 0.0));
        assert_eq!(plane_from_triangle(a, c, b).unwrap(), Plane::new(0.0, 0.0, -1.0, 0.0));
        let p = plane_from_triangle(a, HVec4::point(2.0, 0.0, 0.0), HVec4::point(0.0, 2.0, 0.0)).unwrap();
        assert_eq!(p, Plane::new(0.0, 0.0, 4.0, 0.0));
    }

    #[test]
    fn plane_through_points_at_infinity() {
        // Two finite points and one direction: the plane still contains all three.
        let a = HVec4::point(1.0, 0.0, 0.0);
        let b = HVec4::point(0.0, 1.0, 0.0);
        let c = HVec4::direction(0.0, 0.0, -1.0);
        let p = plane_from_triangle(a, b, c).unwrap();
        for v in [a, b, c] {
            assert!(p.eval(v).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_plane_rejected() {
        let a = HVec4::point(0.0, 0.0, 0.0);
        let b = HVec4::point(1.0, 1.0, 1.0);
        let c = HVec4::point(2.0, 2.0, 2.0);
        assert_eq!(plane_from_triangle(a, b, c), Err(GeomError::DegenerateTriangle));
    }

    #[test]
    fn look_at_maps_eye_to_origin_and_target_to_negative_z() {
        let v = HMat4::look_at([1.0, 2.0, 3.0], [1.0, 2.0, -7.0], [0.0, 1.0, 0.0]).unwrap();
        let e = transform(&v, HVec4::point(1.0, 2.0, 3.0));
        assert!(e.x.abs() < 1e-12 && e.y.abs() < 1e-12 && e.z.abs() < 1e-12);
        let t = transform(&v, HVec4::point(1.0, 2.0, -7.0));
        assert!((t.z + 10.0).abs() < 1e-12);
    }

    fn coord() -> impl Strategy<Value = f64> {
        -10.0f64..10.0
    }

    proptest! {
        #[test]
        fn forward_directions_reach_depth_one(
            fov in 0.1f64..3.0, aspect in 0.2f64..5.0, near in 1e-3f64..100.0,
            x in coord(), y in coord(), z in 0.01f64..10.0,
        ) {
            let p = perspective_infinite(&FrustumParams::new(fov, aspect, near, FarPlane::Infinite)).unwrap();
            let c = transform(&p, HVec4::direction(x, y, -z));
            prop_assert!((c.z - c.w).abs() <= 1e-12 * c.w.abs().max(1.0));
        }

        #[test]
        fn finite_and_infinite_share_rows_0_1_3(
            fov in 0.1f64..3.0, aspect in 0.2f64..5.0, near in 1e-3f64..10.0, extra in 1e-3f64..1e4,
        ) {
            let f = FrustumParams::new(fov, aspect, near, FarPlane::Finite(near + extra));
            let pf = perspective_finite(&f).unwrap();
            let pi = perspective_infinite(&f).unwrap();
            for r in [0, 1, 3] {
                prop_assert_eq!(pf.row(r), pi.row(r));
            }
        }

        #[test]
        fn plane_vanishes_on_its_vertices(
            a in proptest::array::uniform3(coord()), b in proptest::array::uniform3(coord()),
            c in proptest::array::uniform3(coord()), w in proptest::array::uniform3(0.0f64..2.0),
        ) {
            let va = HVec4::new(a[0], a[1], a[2], w[0]);
            let vb = HVec4::new(b[0], b[1], b[2], w[1]);
            let vc = HVec4::new(c[0], c[1], c[2], w[2]);
            if let Ok(p) = plane_from_triangle(va, vb, vc) {
                let m = p.max_abs();
                for v in [va, vb, vc] {
                    prop_assert!(p.eval(v).abs() <= 1e-9 * m.max(1.0) * v.max_abs().max(1.0));
                }
            }
        }

        #[test]
        fn front_side_is_positive(
            a in proptest::array::uniform3(coord()), b in proptest::array::uniform3(coord()),
            c in proptest::array::uniform3(coord()), off in 0.1f64..5.0, bary in proptest::array::uniform2(0.05f64..0.45),
        ) {
            let (va, vb, vc) = (HVec4::point(a[0], a[1], a[2]), HVec4::point(b[0], b[1], b[2]), HVec4::point(c[0], c[1], c[2]));
            let n = cross3(sub3(b, a), sub3(c, a));
            prop_assume!(length3(n) > 1e-3);
            let p = plane_from_triangle(va, vb, vc).unwrap();
            // Counterclockwise seen from the +n side, so the front side lies along +n.
            let inside = add3(a, add3(scale3(sub3(b, a), bary[0]), scale3(sub3(c, a), bary[1])));
            let q = add3(inside, scale3(normalize3(n).unwrap(), off));
            prop_assert!(p.eval(HVec4::point(q[0], q[1], q[2])) > 0.0);
        }
    }

    #[test]
    fn general_frustum_matches_symmetric_form() {
        let p = fov90(1.5, FarPlane::Finite(50.0));
        let top = p.near * (p.fov_y * 0.5).tan();
        let m = frustum_matrix(-top * 1.5, top * 1.5, -top, top, 1.0, Some(50.0));
        assert_eq!(m, perspective_finite(&p).unwrap());
        let asym = frustum_matrix(-1.0, 3.0, -2.0, 1.0, 1.0, None);
        assert_eq!(asym.row(0)[2], 0.5);
        assert_eq!(asym.row(1)[2], -1.0 / 3.0);
    }
}
