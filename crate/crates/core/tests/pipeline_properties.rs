//! Whole-frame properties of the renderer.

use proptest::prelude::*;
use shadowvol::hgeom::{HMat4, HVec4};
use shadowvol::pipeline::{render_frame, Light, PipelineModes, RenderTarget, Scene};
use shadowvol::scenes;
use shadowvol::volume::Encoding;

fn small() -> RenderTarget {
    RenderTarget { width: 96, height: 96, stencil_bits: 8 }
}

fn base() -> Scene {
    scenes::build(&scenes::tetrahedron_over_plane()).unwrap()
}

fn light_strategy() -> impl Strategy<Value = HVec4> {
    prop_oneof![
        (-3.0f64..3.0, 3.5f64..7.0, -3.0f64..3.0).prop_map(|(x, y, z)| HVec4::point(x, y, z)),
        (-0.6f64..0.6, 0.5f64..1.0, -0.6f64..0.6).prop_map(|(x, y, z)| HVec4::direction(x, y, z)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Lights add: each light's pass contributes independently of the others.
    #[test]
    fn light_contributions_add(l1 in light_strategy(), l2 in light_strategy()) {
        let mut both = base();
        both.lights = vec![Light { position: l1, color: [0.6, 0.5, 0.4] }, Light { position: l2, color: [0.3, 0.4, 0.5] }];
        let mut first = both.clone();
        first.lights.truncate(1);
        let mut second = both.clone();
        second.lights.remove(0);
        let mut none = both.clone();
        none.lights.clear();
        let m = PipelineModes::default();
        let [fb, f1, f2, f0] = [&both, &first, &second, &none].map(|s| render_frame(s, &m, small()).unwrap().framebuffer);
        for i in 0..fb.color.len() {
            for k in 0..3 {
                let sum = f1.color[i][k] + f2.color[i][k] - f0.color[i][k];
                prop_assert!((fb.color[i][k] - sum).abs() < 1e-12);
            }
        }
        let r = render_frame(&both, &m, small()).unwrap();
        prop_assert_eq!(r.shadow_counts[0].clone(), render_frame(&first, &m, small()).unwrap().shadow_counts[0].clone());
    }

    /// Volume encoding never changes the stencil, for any light and any
    /// placement of the occluder.
    #[test]
    fn encoding_never_changes_stencil(light in light_strategy(), yaw in 0.0f64..6.3, lift in 0.8f64..2.5) {
        let mut s = base();
        s.lights = vec![Light { position: light, color: [1.0; 3] }];
        let occluder = &mut s.objects[1].mesh;
        *occluder = occluder.transformed(&(HMat4::translation([0.0, lift - 1.5, 0.0]) * HMat4::rotation_y(yaw)));
        let reference = render_frame(&s, &PipelineModes::default(), small()).unwrap();
        let mut encodings = vec![Encoding::Strips];
        if light.w == 0.0 {
            encodings.push(Encoding::Fans);
        }
        for encoding in encodings {
            for two_sided in [false, true] {
                let f = render_frame(&s, &PipelineModes { encoding, two_sided, ..Default::default() }, small()).unwrap();
                prop_assert_eq!(&f.shadow_counts, &reference.shadow_counts);
                prop_assert_eq!(&f.framebuffer.color, &reference.framebuffer.color);
            }
        }
    }
}

#[test]
fn output_is_deterministic() {
    let s = scenes::build(&scenes::directional_light()).unwrap();
    let a = render_frame(&s, &PipelineModes::default(), small()).unwrap();
    let b = render_frame(&s, &PipelineModes::default(), small()).unwrap();
    assert_eq!(a.framebuffer.color, b.framebuffer.color);
    assert_eq!(serde_json::to_string(&a.stats).unwrap(), serde_json::to_string(&b.stats).unwrap());
}

#[test]
fn narrow_stencil_saturates_without_wrap() {
    let s = scenes::build(&scenes::nested_spheres()).unwrap();
    let target = RenderTarget { stencil_bits: 1, ..small() };
    let sat = render_frame(&s, &PipelineModes { wrap_ops: false, ..Default::default() }, target).unwrap();
    assert!(sat.stats.stencil_overflow && sat.stats.stencil_saturations > 0);
    let wrap = render_frame(&s, &PipelineModes::default(), target).unwrap();
    assert!(!wrap.stats.stencil_overflow);
    // two volumes deep wraps to zero in one bit
    let wide = render_frame(&s, &PipelineModes::default(), small()).unwrap();
    for (n, w) in wrap.shadow_counts[0].iter().zip(&wide.shadow_counts[0]) {
        assert_eq!(*n, w % 2);
    }
}
