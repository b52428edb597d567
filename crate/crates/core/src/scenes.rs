//! Built-in scenes. Each is a [`SceneFile`], so it can be written out as JSON
//! and fed back to the command-line renderer.

use std::path::Path;

use crate::cli::{
    CameraSpec, CliError, FarSpec, LightSpec, MeshSpec, PrimitiveSpec, ScaleSpec, SceneFile,
    Shape, TransformSpec,
};
use crate::pipeline::{Material, Scene};

fn camera(eye: [f64; 3], look_at: [f64; 3], fov_y_degrees: f64, near: f64) -> CameraSpec {
    CameraSpec {
        eye,
        look_at,
        up: [0.0, 1.0, 0.0],
        fov_y_degrees,
        aspect: 1.0,
        near,
        far: FarSpec::Distance(40.0),
    }
}

fn mesh(shape: Shape, transform: TransformSpec, diffuse: [f64; 3]) -> MeshSpec {
    MeshSpec {
        obj: None,
        primitive: Some(PrimitiveSpec { shape, transform, subdivisions: None, wall: None }),
        transform: None,
        material: Material { diffuse, specular: Some([0.4; 3]), exponent: 24.0 },
        casts_shadow: None,
        shadow_formulation: None,
    }
}

fn sphere(center: [f64; 3], radius: f64, diffuse: [f64; 3]) -> MeshSpec {
    let mut m = mesh(Shape::Icosphere, TransformSpec::translate(center).scaled(ScaleSpec::Uniform(radius)), diffuse);
    if let Some(p) = m.primitive.as_mut() {
        p.subdivisions = Some(2);
    }
    m
}

fn floor(center: [f64; 3], half: f64) -> MeshSpec {
    let mut m = mesh(Shape::Plane, TransformSpec::translate(center).scaled(ScaleSpec::PerAxis([half, 1.0, half])), [0.75; 3]);
    m.material.specular = None;
    m
}

fn point_light(p: [f64; 3]) -> LightSpec {
    LightSpec { position: [p[0], p[1], p[2], 1.0], color: [0.9; 3] }
}

/// (a) A tetrahedron floating over a floor, lit by a point light above.
pub fn tetrahedron_over_plane() -> SceneFile {
    SceneFile {
        camera: camera([0.0, 4.0, 7.0], [0.0, 0.6, 0.0], 50.0, 0.5),
        lights: vec![point_light([1.2, 5.0, 1.5])],
        ambient: [0.15; 3],
        meshes: vec![
            floor([0.0, 0.0, 0.0], 4.0),
            mesh(
                Shape::Tetrahedron,
                TransformSpec::translate([0.0, 1.5, 0.0]).scaled(ScaleSpec::Uniform(0.6)).rotated([15.0, 25.0, 0.0]),
                [0.85, 0.3, 0.25],
            ),
        ],
    }
}

/// (b) A light inside an open box standing just above a floor, with a back
/// wall catching the light that escapes through the opening.
pub fn light_in_container() -> SceneFile {
    let mut cup = mesh(Shape::Cup, TransformSpec::translate([0.0, 0.1, 0.0]), [0.3, 0.5, 0.85]);
    if let Some(p) = cup.primitive.as_mut() {
        p.wall = Some(0.2);
    }
    let mut wall = floor([0.0, 3.0, -3.0], 1.0);
    if let Some(p) = wall.primitive.as_mut() {
        p.transform = TransformSpec::translate([0.0, 3.0, -3.0])
            .rotated([90.0, 0.0, 0.0])
            .scaled(ScaleSpec::PerAxis([4.0, 1.0, 3.0]));
    }
    SceneFile {
        camera: camera([0.4, 3.5, 5.0], [0.0, 0.6, 0.0], 50.0, 0.5),
        lights: vec![point_light([0.1, 0.75, 0.05])],
        ambient: [0.1; 3],
        meshes: vec![floor([0.0, 0.0, 0.0], 4.0), wall, cup],
    }
}

/// (c) A light column that slices through the near plane right in front of
/// the eye. Counting from the eye goes wrong here.
pub fn near_plane_piercing() -> SceneFile {
    SceneFile {
        camera: camera([0.0, 1.5, 6.0], [0.0, 0.0, 0.0], 60.0, 1.0),
        lights: vec![point_light([0.0, 8.0, 5.0])],
        ambient: [0.15; 3],
        meshes: vec![
            floor([0.0, 0.0, 0.0], 6.0),
            mesh(Shape::Cube, TransformSpec::translate([0.0, 3.5, 5.0]).scaled(ScaleSpec::Uniform(0.4)), [0.9, 0.8, 0.3]),
            sphere([0.8, 0.6, -0.5], 0.5, [0.4, 0.8, 0.4]),
        ],
    }
}

/// (d) The eye sits inside the shadow of a cube hanging overhead.
pub fn eye_in_shadow() -> SceneFile {
    SceneFile {
        camera: camera([0.0, 1.2, 0.2], [0.0, 0.0, -4.0], 60.0, 0.1),
        lights: vec![point_light([0.0, 6.0, 0.0])],
        ambient: [0.15; 3],
        meshes: vec![
            floor([0.0, 0.0, -2.0], 8.0),
            mesh(Shape::Cube, TransformSpec::translate([0.0, 3.0, 0.0]).scaled(ScaleSpec::Uniform(0.7)), [0.8, 0.8, 0.8]),
            mesh(
                Shape::Tetrahedron,
                TransformSpec::translate([-1.0, 0.8, -3.0]).scaled(ScaleSpec::Uniform(0.5)).rotated([10.0, 40.0, 0.0]),
                [0.85, 0.3, 0.25],
            ),
        ],
    }
}

/// (e) Several occluders under a directional light.
pub fn directional_light() -> SceneFile {
    SceneFile {
        camera: camera([0.0, 5.0, 8.0], [0.0, 0.5, 0.0], 50.0, 0.5),
        lights: vec![LightSpec { position: [0.3, 1.0, 0.4, 0.0], color: [0.9; 3] }],
        ambient: [0.15; 3],
        meshes: vec![
            floor([0.0, 0.0, 0.0], 6.0),
            mesh(
                Shape::Tetrahedron,
                TransformSpec::translate([-1.8, 1.2, 0.5]).scaled(ScaleSpec::Uniform(0.6)).rotated([20.0, 10.0, 0.0]),
                [0.85, 0.3, 0.25],
            ),
            mesh(
                Shape::Cube,
                TransformSpec::translate([0.2, 1.0, -0.8]).scaled(ScaleSpec::Uniform(0.5)).rotated([0.0, 30.0, 0.0]),
                [0.8, 0.8, 0.3],
            ),
            sphere([1.7, 1.4, 0.9], 0.7, [0.3, 0.5, 0.85]),
        ],
    }
}

/// A sphere inside a sphere with the light at their common center; points
/// outside both are two volumes deep.
pub fn nested_spheres() -> SceneFile {
    SceneFile {
        camera: camera([0.0, 6.0, 9.0], [0.0, 0.5, 0.0], 50.0, 0.5),
        lights: vec![point_light([0.0, 2.5, 0.0])],
        ambient: [0.15; 3],
        meshes: vec![
            floor([0.0, 0.0, 0.0], 6.0),
            sphere([0.0, 2.5, 0.0], 1.0, [0.9, 0.9, 0.9]),
            sphere([0.0, 2.5, 0.0], 2.0, [0.3, 0.5, 0.85]),
        ],
    }
}

/// Light position, tetrahedron transform and floor height for the top-down
/// shadow area check.
pub const AREA_LIGHT: [f64; 3] = [-4.0, 3.0, 0.0];
pub const AREA_EYE_HEIGHT: f64 = 10.0;
pub const AREA_FOV_Y_DEGREES: f64 = 40.0;

pub fn area_tetrahedron() -> TransformSpec {
    TransformSpec::translate([0.0, 1.0, 0.0]).scaled(ScaleSpec::Uniform(0.3))
}

/// Top-down view of a tetrahedron shadow cast sideways onto the floor, so the
/// occluder never hides its own shadow from the camera.
pub fn shadow_area() -> SceneFile {
    let mut cam = camera([2.0, AREA_EYE_HEIGHT, 0.0], [2.0, 0.0, 0.0], AREA_FOV_Y_DEGREES, 0.5);
    cam.up = [0.0, 0.0, -1.0];
    SceneFile {
        camera: cam,
        lights: vec![point_light(AREA_LIGHT)],
        ambient: [0.15; 3],
        meshes: vec![floor([2.0, 0.0, 0.0], 8.0), mesh(Shape::Tetrahedron, area_tetrahedron(), [0.85, 0.3, 0.25])],
    }
}

/// The five hard cases, keyed by their letter.
pub fn hard_cases() -> Vec<(&'static str, SceneFile)> {
    vec![
        ("a_tetrahedron_over_plane", tetrahedron_over_plane()),
        ("b_light_in_container", light_in_container()),
        ("c_near_plane_piercing", near_plane_piercing()),
        ("d_eye_in_shadow", eye_in_shadow()),
        ("e_directional_light", directional_light()),
    ]
}

/// Builds a built-in scene; primitives need no base directory.
pub fn build(file: &SceneFile) -> Result<Scene, CliError> {
    file.to_scene(Path::new("."))
}
