//! Command-line front end: JSON scene files, flag parsing, rendering,
//! oracle verification and output files.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hgeom::{FarPlane, FrustumParams, HMat4, HVec4};
use crate::mesh::obj::{load_obj, ObjError};
use crate::mesh::{primitives, TriMesh};
use crate::oracle::{
    compare_counts, compare_shadow_masks, depth_range, reference_image, rendered_mask, CountReport, DiffReport,
    OracleError,
};
use crate::pipeline::{
    render_frame, Camera, Counting, DoubleBlendGuard, Formulation, Light, Material, PassStats, PipelineError,
    PipelineModes, Projection, RenderTarget, Scene, SceneObject,
};
use crate::raster::image::{encode_depth_pgm, encode_ppm, encode_stencil_values};
use crate::volume::Encoding;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("scene {path}: {msg}")]
    SceneFormat { path: String, msg: String },
    #[error("mesh {index}: {source}")]
    Obj {
        index: usize,
        #[source]
        source: ObjError,
    },
    #[error("mesh {0}: needs exactly one of `obj` or `primitive`")]
    MeshSource(usize),
    #[error("scene has no meshes")]
    NoMeshes,
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("bad resolution {0:?}, expected WxH")]
    Resolution(String),
    #[error("--dump kind {0:?} is not one of depth, stencil, mask")]
    DumpKind(String),
    #[error("--dump mask needs at least one light")]
    MaskWithoutLight,
}

// ---------------------------------------------------------------- scene file

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SceneFile {
    pub camera: CameraSpec,
    #[serde(default)]
    pub lights: Vec<LightSpec>,
    #[serde(default)]
    pub ambient: [f64; 3],
    pub meshes: Vec<MeshSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CameraSpec {
    pub eye: [f64; 3],
    pub look_at: [f64; 3],
    pub up: [f64; 3],
    pub fov_y_degrees: f64,
    pub aspect: f64,
    pub near: f64,
    pub far: FarSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FarSpec {
    Distance(f64),
    Keyword(InfiniteKeyword),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InfiniteKeyword {
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct LightSpec {
    pub position: [f64; 4],
    #[serde(default = "white")]
    pub color: [f64; 3],
}

fn white() -> [f64; 3] {
    [1.0; 3]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct MeshSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obj: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub primitive: Option<PrimitiveSpec>,
    /// Applied to OBJ meshes, and after a primitive's own transform.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transform: Option<TransformSpec>,
    #[serde(default)]
    pub material: Material,
    /// Defaults to true for closed primitives and OBJ meshes, false for planes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub casts_shadow: Option<bool>,
    /// Counting used for this occluder under `--formulation mixed`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shadow_formulation: Option<Counting>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Tetrahedron,
    Cube,
    Plane,
    Icosphere,
    Cup,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct PrimitiveSpec {
    pub shape: Shape,
    #[serde(default)]
    pub transform: TransformSpec,
    /// Icosphere refinement level.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subdivisions: Option<u32>,
    /// Cup wall thickness.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScaleSpec {
    Uniform(f64),
    PerAxis([f64; 3]),
}

impl Default for ScaleSpec {
    fn default() -> Self {
        ScaleSpec::Uniform(1.0)
    }
}

/// `translate * rotZ * rotY * rotX * scale`, or an explicit row-major matrix.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct TransformSpec {
    #[serde(default)]
    pub translate: [f64; 3],
    #[serde(default)]
    pub rotate_degrees: [f64; 3],
    #[serde(default)]
    pub scale: ScaleSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<[f64; 16]>,
}

impl TransformSpec {
    pub fn translate(t: [f64; 3]) -> Self {
        TransformSpec { translate: t, ..Default::default() }
    }

    pub fn scaled(mut self, s: ScaleSpec) -> Self {
        self.scale = s;
        self
    }

    pub fn rotated(mut self, degrees: [f64; 3]) -> Self {
        self.rotate_degrees = degrees;
        self
    }

    pub fn matrix(&self) -> HMat4 {
        if let Some(m) = self.matrix {
            return HMat4::from_rows(std::array::from_fn(|r| std::array::from_fn(|c| m[r * 4 + c])));
        }
        let s = match self.scale {
            ScaleSpec::Uniform(s) => [s; 3],
            ScaleSpec::PerAxis(s) => s,
        };
        let [rx, ry, rz] = self.rotate_degrees.map(f64::to_radians);
        HMat4::translation(self.translate)
            * HMat4::rotation_z(rz)
            * HMat4::rotation_y(ry)
            * HMat4::rotation_x(rx)
            * HMat4::scale(s)
    }
}

impl SceneFile {
    pub fn parse(text: &str, path: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::SceneFormat { path: path.to_string(), msg: e.to_string() })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).unwrap_or_default()
    }

    /// Builds world-space geometry. Relative OBJ paths resolve against `base`.
    pub fn to_scene(&self, base: &Path) -> Result<Scene, CliError> {
        if self.meshes.is_empty() {
            return Err(CliError::NoMeshes);
        }
        let c = &self.camera;
        let far = match c.far {
            FarSpec::Distance(d) => FarPlane::Finite(d),
            FarSpec::Keyword(InfiniteKeyword::Infinite) => FarPlane::Infinite,
        };
        let camera = Camera {
            eye: c.eye,
            target: c.look_at,
            up: c.up,
            frustum: FrustumParams::new(c.fov_y_degrees.to_radians(), c.aspect, c.near, far),
        };
        let mut objects = Vec::with_capacity(self.meshes.len());
        for (index, m) in self.meshes.iter().enumerate() {
            let (mesh, default_cast) = match (&m.obj, &m.primitive) {
                (Some(p), None) => {
                    let path = base.join(p);
                    (load_obj(&path).map_err(|source| CliError::Obj { index, source })?, true)
                }
                (None, Some(p)) => {
                    let mesh = match p.shape {
                        Shape::Tetrahedron => primitives::tetrahedron(),
                        Shape::Cube => primitives::cube(),
                        Shape::Plane => primitives::plane(),
                        Shape::Icosphere => primitives::icosphere(p.subdivisions.unwrap_or(2).min(6)),
                        Shape::Cup => primitives::cup(p.wall.unwrap_or(0.2).clamp(0.01, 0.99)),
                    };
                    (mesh.transformed(&p.transform.matrix()), p.shape != Shape::Plane)
                }
                _ => return Err(CliError::MeshSource(index)),
            };
            let mesh: TriMesh = match &m.transform {
                Some(t) => mesh.transformed(&t.matrix()),
                None => mesh,
            };
            objects.push(SceneObject {
                mesh,
                material: m.material,
                casts_shadow: m.casts_shadow.unwrap_or(default_cast),
                counting_hint: m.shadow_formulation,
            });
        }
        let lights = self
            .lights
            .iter()
            .map(|l| Light { position: HVec4::from_array(l.position), color: l.color })
            .collect();
        let scene = Scene { camera, objects, lights, ambient: self.ambient };
        scene.validate()?;
        Ok(scene)
    }
}

// ---------------------------------------------------------------- flags

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FormulationArg {
    Zfail,
    Zpass,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProjectionArg {
    Finite,
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EncodingArg {
    Independent,
    Strips,
    Fans,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BlendGuardArg {
    Incr,
    Keep,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "render", version, about = "Render a scene with stenciled shadow volumes")]
pub struct Args {
    /// Scene description (JSON).
    pub scene: PathBuf,
    /// Output image (binary PPM).
    #[arg(short = 'o', value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[arg(long, value_name = "WxH", default_value = "512x512")]
    pub resolution: String,
    #[arg(long, value_enum, default_value_t = FormulationArg::Zfail)]
    pub formulation: FormulationArg,
    #[arg(long, value_enum, default_value_t = ProjectionArg::Infinite)]
    pub projection: ProjectionArg,
    #[arg(long)]
    pub depth_clamp: bool,
    #[arg(long)]
    pub two_sided: bool,
    /// Use saturating instead of wrapping stencil increments.
    #[arg(long)]
    pub no_wrap: bool,
    #[arg(long, value_name = "N", default_value_t = 8)]
    pub stencil_bits: u32,
    #[arg(long, value_enum, default_value_t = EncodingArg::Independent)]
    pub encoding: EncodingArg,
    #[arg(long, value_enum, default_value_t = BlendGuardArg::Incr)]
    pub avoid_double_blend: BlendGuardArg,
    /// Compare shadow masks and counts against the ray-cast oracle.
    #[arg(long)]
    pub verify: bool,
    /// Debug image: depth, stencil or mask (first light).
    #[arg(long, num_args = 2, value_names = ["KIND", "PATH"], action = clap::ArgAction::Append)]
    pub dump: Vec<String>,
    /// Write the run report (JSON) here as well as to standard output.
    #[arg(long, value_name = "PATH")]
    pub stats: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DumpKind {
    Depth,
    Stencil,
    Mask,
}

pub fn parse_resolution(s: &str) -> Result<(usize, usize), CliError> {
    let err = || CliError::Resolution(s.to_string());
    let (w, h) = s.split_once(['x', 'X']).ok_or_else(err)?;
    Ok((w.trim().parse().map_err(|_| err())?, h.trim().parse().map_err(|_| err())?))
}

impl Args {
    pub fn modes(&self) -> PipelineModes {
        PipelineModes {
            formulation: match self.formulation {
                FormulationArg::Zfail => Formulation::ZFail,
                FormulationArg::Zpass => Formulation::ZPass,
                FormulationArg::Mixed => Formulation::Mixed,
            },
            projection: match self.projection {
                ProjectionArg::Finite => Projection::Finite,
                ProjectionArg::Infinite => Projection::Infinite,
            },
            depth_clamp: self.depth_clamp,
            two_sided: self.two_sided,
            wrap_ops: !self.no_wrap,
            avoid_double_blend: match self.avoid_double_blend {
                BlendGuardArg::Incr => DoubleBlendGuard::Incr,
                BlendGuardArg::Keep => DoubleBlendGuard::Keep,
            },
            encoding: match self.encoding {
                EncodingArg::Independent => Encoding::Independent,
                EncodingArg::Strips => Encoding::Strips,
                EncodingArg::Fans => Encoding::Fans,
            },
            drop_directional_back_cap: false,
        }
    }

    pub fn dumps(&self) -> Result<Vec<(DumpKind, PathBuf)>, CliError> {
        self.dump
            .chunks(2)
            .map(|pair| {
                let kind = match pair[0].as_str() {
                    "depth" => DumpKind::Depth,
                    "stencil" => DumpKind::Stencil,
                    "mask" => DumpKind::Mask,
                    other => return Err(CliError::DumpKind(other.to_string())),
                };
                Ok((kind, PathBuf::from(&pair[1])))
            })
            .collect()
    }
}

// ---------------------------------------------------------------- report

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ModesEcho {
    pub resolution: String,
    pub formulation: FormulationArg,
    pub projection: ProjectionArg,
    pub depth_clamp: bool,
    pub two_sided: bool,
    pub no_wrap: bool,
    pub stencil_bits: u32,
    pub encoding: EncodingArg,
    pub avoid_double_blend: BlendGuardArg,
    pub verify: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LightVerification {
    pub light: usize,
    pub mask: DiffReport,
    pub counts: CountReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Verification {
    pub interior_mismatches: usize,
    pub boundary_mismatches: usize,
    pub boundary_pixels: usize,
    pub count_mismatches: usize,
    pub passed: bool,
    pub lights: Vec<LightVerification>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RunReport {
    pub scene: String,
    pub modes: ModesEcho,
    pub stats: PassStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<Verification>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).unwrap_or_default()
    }
}

pub fn verify_frame(scene: &Scene, frame: &crate::pipeline::Frame, projection: Projection) -> Result<Verification, CliError> {
    let fb = &frame.framebuffer;
    let range = depth_range(scene, projection);
    let mut lights = Vec::new();
    let mut total = DiffReport::default();
    let mut count_mismatches = 0;
    for li in 0..scene.lights.len() {
        let reference = reference_image(scene, li, fb.width(), fb.height(), range)?;
        let mask = compare_shadow_masks(&rendered_mask(frame, li)?, &reference.mask)?;
        let counts = compare_counts(&frame.shadow_counts[li], &fb.depth, &reference, fb.stencil_max());
        total.merge(&mask);
        count_mismatches += counts.interior_mismatches;
        lights.push(LightVerification { light: li, mask, counts });
    }
    Ok(Verification {
        interior_mismatches: total.interior_mismatches,
        boundary_mismatches: total.boundary_mismatches,
        boundary_pixels: total.boundary_pixels,
        count_mismatches,
        passed: total.interior_mismatches == 0 && count_mismatches == 0,
        lights,
    })
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

/// Runs one invocation and returns the report; the caller maps it to an
/// exit status.
pub fn run(args: &Args) -> Result<RunReport, CliError> {
    let (width, height) = parse_resolution(&args.resolution)?;
    let dumps = args.dumps()?;
    let file = SceneFile::load(&args.scene)?;
    let base = args.scene.parent().map(Path::to_path_buf).unwrap_or_default();
    let scene = file.to_scene(&base)?;
    let modes = args.modes();
    let target = RenderTarget { width, height, stencil_bits: args.stencil_bits };
    let frame = render_frame(&scene, &modes, target)?;

    if let Some(out) = &args.output {
        write_file(out, &encode_ppm(&frame.framebuffer))?;
    }
    let fb = &frame.framebuffer;
    for (kind, path) in &dumps {
        let bytes = match kind {
            DumpKind::Depth => encode_depth_pgm(fb),
            DumpKind::Stencil => {
                let counts = frame.shadow_counts.first().unwrap_or(&fb.stencil);
                encode_stencil_values(fb.width(), fb.height(), fb.stencil_max(), counts)
            }
            DumpKind::Mask => {
                if scene.lights.is_empty() {
                    return Err(CliError::MaskWithoutLight);
                }
                rendered_mask(&frame, 0)?.to_pgm()
            }
        };
        write_file(path, &bytes)?;
    }
    let verification = if args.verify { Some(verify_frame(&scene, &frame, modes.projection)?) } else { None };
    let report = RunReport {
        scene: args.scene.display().to_string(),
        modes: ModesEcho {
            resolution: format!("{width}x{height}"),
            formulation: args.formulation,
            projection: args.projection,
            depth_clamp: args.depth_clamp,
            two_sided: args.two_sided,
            no_wrap: args.no_wrap,
            stencil_bits: args.stencil_bits,
            encoding: args.encoding,
            avoid_double_blend: args.avoid_double_blend,
            verify: args.verify,
        },
        stats: frame.stats,
        verification,
    };
    if let Some(p) = &args.stats {
        write_file(p, report.to_json().as_bytes())?;
    }
    Ok(report)
}

/// Exit status: 0 success, 1 usage or scene error, 2 failed verification.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            if code == 0 {
                print!("{e}");
            } else {
                let msg = e.to_string();
                eprintln!("error: {}", msg.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: "));
            }
            return code;
        }
    };
    match run(&args) {
        Ok(report) => {
            println!("{}", report.to_json());
            match &report.verification {
                Some(v) if !v.passed => 2,
                _ => 0,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
