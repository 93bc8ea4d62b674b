use nalgebra::Vector4;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use twistorlab_core::legendrian::{alpha_pullback, generate_legendrian, reference, ComplexPoly};
use twistorlab_core::quaternion::{hopf_phi, structure_from_quaternion, Quaternion};
use twistorlab_core::surface::forms::shape_operator;
use twistorlab_core::surface::{
    catalog, differentiate, fundamental_forms, mean_curvature, sample_point, DiffConfig, Orientation, Rect,
};
use twistorlab_core::twistor_s4::{
    alpha_form, fiber_point, fiber_structure, project_vector, twistor_involution, twistor_project, ProjectivePoint,
};

fn quat() -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-2.0..2.0f64)
        .prop_map(|a| Quaternion::from_vector(&Vector4::from(a)))
        .prop_filter("away from zero", |q| q.norm() > 0.1)
}

fn c64() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b)| Complex64::new(a, b))
}

fn point() -> impl Strategy<Value = ProjectivePoint> {
    prop::array::uniform4(c64()).prop_filter_map("nonzero", |z| ProjectivePoint::from_coords(z).ok())
}

proptest! {
    #[test]
    fn norm_is_multiplicative(p in quat(), q in quat()) {
        prop_assert!(((p * q).norm() - p.norm() * q.norm()).abs() < 1e-12);
    }

    #[test]
    fn multiplication_is_associative(p in quat(), q in quat(), r in quat()) {
        prop_assert!(((p * q) * r).distance(p * (q * r)) < 1e-12);
    }

    #[test]
    fn inverse_is_two_sided(q in quat()) {
        let inv = q.inverse().unwrap();
        let one = Quaternion::from_vector(&Vector4::x());
        prop_assert!((q * inv).distance(one) < 1e-12);
        prop_assert!((inv * q).distance(one) < 1e-12);
    }

    #[test]
    fn hopf_map_is_constant_on_circle_fibres(q in quat(), t in -3.2..3.2f64) {
        let u = hopf_phi(q).unwrap();
        prop_assert!(u.is_imaginary_unit(1e-12));
        prop_assert!(hopf_phi(Quaternion::exp_i(t) * q).unwrap().distance(u) < 1e-12);
    }

    #[test]
    fn structures_from_imaginary_units_are_orthogonal_complex(q in quat()) {
        let j = structure_from_quaternion(q.imaginary().normalize().unwrap()).unwrap();
        let (square, orth) = j.residuals();
        prop_assert!(square < 1e-12 && orth < 1e-12);
    }

    #[test]
    fn projection_ignores_complex_scale(p in point(), l in c64()) {
        prop_assume!(l.norm() > 0.1);
        let z = p.representative();
        prop_assert!((project_vector(&(z * l)) - project_vector(z)).norm() < 1e-12);
    }

    #[test]
    fn contact_form_is_bilinear(p in point(), q in point(), l in c64()) {
        let (z, w) = (p.representative(), q.representative());
        let scaled = alpha_form(&(z * l), &(w * l));
        prop_assert!((scaled - alpha_form(z, w) * l * l).norm() < 1e-11);
    }

    #[test]
    fn involution_is_fibre_preserving_and_free(p in point()) {
        let q = twistor_involution(&p);
        prop_assert!(twistor_involution(&q).chordal_distance(&p) < 1e-12);
        prop_assert!(q.chordal_distance(&p) > 0.5);
        prop_assert!(twistor_project(&q).distance(&twistor_project(&p)) < 1e-12);
    }

    #[test]
    fn fibre_structures_determine_the_point(p in point()) {
        let s = fiber_structure(&p);
        let (a, b, c) = s.residuals();
        prop_assert!(a.max(b).max(c) < 1e-10);
        prop_assert!(fiber_point(&s).unwrap().chordal_distance(&p) < 1e-9);
    }

    #[test]
    fn shape_operator_is_symmetric_and_linear_in_the_normal(u in -0.8..0.8f64, v in -0.8..0.8f64, a in -2.0..2.0f64, b in -2.0..2.0f64) {
        let cfg = DiffConfig::default();
        let jet = differentiate(&catalog::small_sphere(0.7), u, v, &cfg).unwrap();
        let forms = fundamental_forms(&jet).unwrap();
        let [n1, n2] = forms.normal;
        let s = shape_operator(&jet, &(n1 * a + n2 * b));
        let lin = shape_operator(&jet, &n1) * a + shape_operator(&jet, &n2) * b;
        prop_assert!((s - lin).norm() < 1e-9);
        prop_assert!((s[(0, 1)] - s[(1, 0)]).abs() < 1e-9);
    }

    #[test]
    fn mean_curvature_is_normal(u in -0.8..0.8f64, v in -0.8..0.8f64) {
        let cfg = DiffConfig::default();
        for s in [catalog::small_sphere(0.7), catalog::flat_graph()] {
            let forms = fundamental_forms(&differentiate(&s, u, v, &cfg).unwrap()).unwrap();
            let h = mean_curvature(&forms).vector;
            let scale = h.norm().max(1.0);
            for t in forms.tangent {
                prop_assert!(h.dot(&t).abs() < 1e-8 * scale);
            }
        }
    }

    #[test]
    fn reversing_orientation_flips_spin(u in -0.9..0.9f64, v in -0.9..0.9f64) {
        let cfg = DiffConfig::default();
        let s = reference::cubic_surface();
        let p = sample_point(&s, u, v, &cfg).unwrap();
        let r = sample_point(&s.with_orientation(Orientation::Reversed), u, v, &cfg).unwrap();
        prop_assume!(!p.masked && p.spin().is_some());
        prop_assert_eq!(r.spin(), p.spin().map(|s| s.flip()));
    }

    #[test]
    fn holomorphic_reparametrization_preserves_the_checks(u in -0.4..0.4f64, v in -0.4..0.4f64, a in c64(), b in c64()) {
        prop_assume!(a.norm() > 0.3);
        let b = b * 0.1;
        let cfg = DiffConfig::default();
        let s = reference::cubic_surface();
        let w = (Complex64::new(u, v) - b) / a;
        prop_assume!(w.re.abs() < 4.0 && w.im.abs() < 4.0);
        let r = s.reparametrized(a, b, Rect::square(5.0)).unwrap();
        let p = sample_point(&s, u, v, &cfg).unwrap();
        let q = sample_point(&r, w.re, w.im, &cfg).unwrap();
        prop_assume!(!p.masked && !q.masked);
        prop_assert_eq!(p.spin(), q.spin());
        prop_assert!(q.conformality < 1e-6 && q.mean_curvature < 1e-5);
    }

    #[test]
    fn generated_curves_are_legendrian(seed in any::<u64>(), d3 in 0usize..7, d4 in 0usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p3 = ComplexPoly::random(&mut rng, d3);
        let p4 = ComplexPoly::random(&mut rng, d4);
        let c = generate_legendrian(p3, p4, Default::default());
        prop_assert!(c.is_certified());
        prop_assert!(alpha_pullback(&c).is_zero());
    }
}

#[test]
fn branch_points_are_masked() {
    let p3 = ComplexPoly::parse("0,0,1").unwrap();
    let p4 = ComplexPoly::parse("0,0,0,1").unwrap();
    let s = twistorlab_core::legendrian::project_curve(&generate_legendrian(p3, p4, Default::default()), Rect::square(1.0))
        .unwrap();
    let cfg = DiffConfig::default();
    assert!(sample_point(&s, 0.0, 0.0, &cfg).unwrap().masked);
    assert!(!sample_point(&s, 0.5, 0.3, &cfg).unwrap().masked);
}
