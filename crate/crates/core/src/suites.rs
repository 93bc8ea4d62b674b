//! Seeded randomized identity sweeps over the quaternionic, projective and
//! hyperbolic constructions.

use nalgebra::{Vector3, Vector4, Vector5};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::quaternion::{
    hopf_phi, lambda2_basis, plane_to_structures, selfdual_split, structure_from_frame, structure_from_lambda2,
    structure_from_quaternion, Bivector, Frame4, OrientedPlane, Quaternion, Spin,
};
use crate::error::Result;
use crate::report::{CheckEntry, CheckReport, MaxTracker};
use crate::surface::diff::richardson_derivative;
use crate::surface::verify::entry;
use crate::surface::{catalog, intrinsic_length, superminimality_suite, ChartPath, DiffConfig, Grid, Rect, SuiteOptions};
use crate::twistor_h4::{hyperbolic_metric_eval, omega_membership, omega_membership_affine, stereo_h4, stereo_h4_inverse, BallPoint};
use crate::twistor_s4::{
    alpha_form, chordal_distance, phi2, project_vector, random_c4, rho, stereo_s4, stereo_s4_inverse,
    twistor_involution, twistor_project, ExtendedR4, ProjectivePoint, SpMatrix, SpherePoint,
};

/// Residual bound of the exact-arithmetic identities.
pub const IDENTITY_TOL: f64 = 1e-12;
/// Residual bound of the finite-difference metric pullbacks.
pub const PULLBACK_TOL: f64 = 1e-6;
/// Membership residual bound for generated group elements.
pub const GROUP_TOL: f64 = 1e-10;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian4<R: Rng + ?Sized>(r: &mut R) -> Vector4<f64> {
    Vector4::from_fn(|_, _| r.sample(StandardNormal))
}

fn random_bivector<R: Rng + ?Sized>(r: &mut R) -> Bivector {
    Bivector::new(std::array::from_fn(|_| r.sample(StandardNormal)))
}

fn random_unit_lambda2<R: Rng + ?Sized>(r: &mut R, spin: Spin) -> Bivector {
    let b = lambda2_basis(spin);
    let c = Vector3::<f64>::from_fn(|_, _| r.sample(StandardNormal)).normalize();
    b[0].scale(c[0]) + b[1].scale(c[1]) + b[2].scale(c[2])
}

/// A point of the ball with `|x| ≤ r_max`.
fn random_ball<R: Rng + ?Sized>(r: &mut R, r_max: f64) -> Vector4<f64> {
    let d = gaussian4(r).normalize();
    d * r_max * r.random::<f64>().powf(0.25)
}

fn nonzero_complex<R: Rng + ?Sized>(r: &mut R) -> Complex64 {
    loop {
        let z = Complex64::new(r.sample(StandardNormal), r.sample(StandardNormal));
        if z.norm() > 1e-3 {
            return z;
        }
    }
}

/// Quaternion identities, the Hopf map, `J_q`, the Λ²± calculus and the
/// frame, bivector and plane constructions, `n` random cases each.
pub fn algebra_suite(seed: u64, n: usize) -> CheckReport {
    let mut r = rng(seed);
    let mut rep = CheckReport::new("algebra");
    let mut t: [MaxTracker; 7] = Default::default();
    for k in 0..n {
        let at = || format!("case {k}");
        let (p, q, s) = (Quaternion::random(&mut r), Quaternion::random(&mut r), Quaternion::random(&mut r));
        let scale = p.norm() * q.norm() * s.norm();
        t[0].observe(((p * q) * s - p * (q * s)).norm() / scale, at);
        t[0].observe(((p * q).norm() - p.norm() * q.norm()).abs() / (p.norm() * q.norm()), at);
        t[0].observe(((p * q).conj() - q.conj() * p.conj()).norm() / (p.norm() * q.norm()), at);
        t[0].observe((q * q.inverse().expect("nonzero") - Quaternion::ONE).norm(), at);
        t[0].observe((p.left_matrix() * q.to_vector() - (p * q).to_vector()).norm() / (p.norm() * q.norm()), at);
        t[0].observe((q.right_matrix() * p.to_vector() - (p * q).to_vector()).norm() / (p.norm() * q.norm()), at);

        // Φ is constant on punctured complex lines and lands on the unit imaginaries.
        let lambda = nonzero_complex(&mut r);
        let lq = Quaternion::from_complex_pair(lambda, Complex64::new(0.0, 0.0)) * q;
        let u = hopf_phi(q).expect("nonzero");
        t[1].observe(hopf_phi(lq).expect("nonzero").distance(u), at);
        t[1].observe(((u.norm() - 1.0).abs()).max(u.x1.abs()), at);

        let jq = structure_from_quaternion(q).expect("nonzero");
        let (sq, orth) = jq.residuals();
        t[2].observe(sq.max(orth), at);
        t[2].observe(if jq.spin() == Spin::Positive { 0.0 } else { 1.0 }, at);

        // Λ² = Λ²₊ ⊕ Λ²₋ as ±1 eigenspaces of the Hodge star.
        let b = random_bivector(&mut r);
        let (bp, bm) = selfdual_split(&b);
        let bs = b.norm().max(1e-300);
        t[3].observe(bp.hodge_star().max_abs_diff(&bp) / bs, at);
        t[3].observe(bm.hodge_star().max_abs_diff(&bm.scale(-1.0)) / bs, at);
        t[3].observe((bp + bm).max_abs_diff(&b) / bs, at);
        t[3].observe(bp.dot(&bm).abs() / (bs * bs), at);
        t[3].observe(b.hodge_star().hodge_star().max_abs_diff(&b) / bs, at);

        // J±_e maps e1 to e2 and e3 to ±e4.
        let frame = Frame4::random(&mut r);
        let e = frame.vectors();
        for spin in [Spin::Positive, Spin::Negative] {
            let j = structure_from_frame(&frame, spin);
            t[4].observe((j.apply(&e[0]) - e[1]).norm(), at);
            t[4].observe((j.apply(&e[2]) - e[3] * spin.sign()).norm(), at);
            t[4].observe(if j.spin() == spin { 0.0 } else { 1.0 }, at);
            let (a, o) = j.residuals();
            t[4].observe(a.max(o), at);
        }

        // Unit bivectors of Λ²± and structures of spin ± correspond.
        for spin in [Spin::Positive, Spin::Negative] {
            let b = random_unit_lambda2(&mut r, spin);
            let j = structure_from_lambda2(&b, spin).expect("unit eigen-bivector");
            t[5].observe(j.to_bivector().max_abs_diff(&b), at);
            let (a, o) = j.residuals();
            t[5].observe(a.max(o), at);
            t[5].observe(if j.spin() == spin { 0.0 } else { 1.0 }, at);
        }

        // An oriented plane is its pair of structures: Σ ↦ (J⁺_Σ, J⁻_Σ) and
        // back through √2 (Σ₊ + Σ₋).
        let plane = OrientedPlane::from_span(&gaussian4(&mut r), &gaussian4(&mut r)).expect("generic span");
        let (jp, jm) = plane_to_structures(&plane);
        t[6].observe((jp.apply(plane.u()) - plane.v()).norm().max((jm.apply(plane.u()) - plane.v()).norm()), at);
        let sigma = Bivector::wedge(plane.u(), plane.v());
        let (sp, sm) = selfdual_split(&sigma);
        let r2 = std::f64::consts::SQRT_2;
        t[6].observe(jp.to_bivector().max_abs_diff(&sp.scale(r2)), at);
        t[6].observe(jm.to_bivector().max_abs_diff(&sm.scale(r2)), at);
        let back = (jp.to_bivector() + jm.to_bivector()).scale(1.0 / r2);
        t[6].observe(back.max_abs_diff(&sigma), at);
    }
    let tol = IDENTITY_TOL;
    for (id, k) in [
        ("quaternion_identities", 0),
        ("hopf_fibres", 1),
        ("structure_from_quaternion", 2),
        ("hodge_eigenspaces", 3),
        ("frame_structures", 4),
        ("lambda2_structures", 5),
        ("plane_structures", 6),
    ] {
        rep.push(entry(id, &t[k], tol));
    }
    rep.meta("cases", n);
    rep.meta("seed", seed);
    rep
}

/// The maps of the twistor fibration of S⁴ and the stereographic charts.
pub fn sphere_map_suite(seed: u64, n: usize) -> CheckReport {
    let mut r = rng(seed);
    let mut rep = CheckReport::new("twistor maps");
    let mut t: [MaxTracker; 7] = Default::default();
    let mut omega_disagree = 0usize;
    for k in 0..n {
        let at = || format!("case {k}");
        let x = gaussian4(&mut r) * 2.0;
        let y = stereo_s4(&ExtendedR4::Finite(x));
        t[0].observe((y.coords().norm() - 1.0).abs(), at);
        if let ExtendedR4::Finite(xb) = stereo_s4_inverse(&y) {
            t[0].observe((xb - x).norm() / (1.0 + x.norm()), at);
        } else {
            t[0].observe(f64::INFINITY, at);
        }
        let b = random_ball(&mut r, 0.95);
        let h = stereo_h4(&BallPoint::new(b).expect("inside"));
        t[1].observe(h.residual() / h.coords()[4].powi(2).max(1.0), at);
        t[1].observe((stereo_h4_inverse(&h).coords() - b).norm(), at);

        let z = random_c4(&mut r);
        let p = ProjectivePoint::new(z).expect("nonzero");
        let yz = project_vector(&z);
        let lambda = nonzero_complex(&mut r);
        t[2].observe((project_vector(&(z * lambda)) - yz).norm(), at);
        let via_chart = stereo_s4(&phi2(&p).to_extended());
        t[3].observe((via_chart.coords() - yz).norm(), at);
        let (q1, q2) = p.quaternions();
        t[3].observe((rho(q1, q2).expect("nonzero").coords() - yz).norm(), at);

        let ip = twistor_involution(&p);
        t[4].observe(twistor_involution(&ip).chordal_distance(&p), at);
        t[4].observe((twistor_project(&ip).coords() - yz).norm(), at);
        if omega_membership(&p) != omega_membership_affine(&p) {
            omega_disagree += 1;
        }

        // Metric pullbacks by finite differences along a random direction.
        let w = gaussian4(&mut r).normalize();
        let xs = gaussian4(&mut r);
        let d: Vector5<f64> = richardson_derivative(|s| *stereo_s4(&ExtendedR4::Finite(xs + w * s)).coords(), 1e-3, 2);
        let gs = 4.0 / (1.0 + xs.norm_squared()).powi(2);
        t[5].observe((d.norm_squared() - gs).abs() / gs, at);
        let xb = random_ball(&mut r, 0.9);
        let dh: Vector5<f64> = richardson_derivative(
            |s| *stereo_h4(&BallPoint::new(xb + w * s).expect("inside")).coords(),
            1e-4,
            2,
        );
        let lor = dh.fixed_rows::<4>(0).norm_squared() - dh[4] * dh[4];
        let gh = 4.0 / (1.0 - xb.norm_squared()).powi(2);
        t[6].observe((lor - gh).abs() / gh, at);
    }
    rep.push(entry("stereo_s4_on_sphere", &t[0], IDENTITY_TOL));
    rep.push(entry("stereo_h4_on_hyperquadric", &t[1], IDENTITY_TOL));
    rep.push(entry("projection_scale_invariance", &t[2], IDENTITY_TOL));
    rep.push(entry("projection_factorizations", &t[3], IDENTITY_TOL));
    rep.push(entry("involution", &t[4], IDENTITY_TOL));
    rep.check("omega_membership_disagreements", omega_disagree as f64, 0.0);
    rep.push(entry("round_metric_pullback", &t[5], PULLBACK_TOL));
    rep.push(entry("hyperbolic_metric_pullback", &t[6], PULLBACK_TOL));
    rep.meta("cases", n);
    rep.meta("seed", seed);
    rep
}

/// Random members of `U(4) ∩ Sp(2, ℂ)`: membership, invariance of α and the
/// induced isometries of S⁴.
pub fn group_suite(seed: u64, n: usize) -> CheckReport {
    let mut r = rng(seed);
    let mut rep = CheckReport::new("group");
    let mut t: [MaxTracker; 3] = Default::default();
    for k in 0..n {
        let at = || format!("element {k}");
        let a = SpMatrix::random(&mut r);
        let (u, sp) = a.membership_residuals();
        t[0].observe(u.max(sp), at);
        let (z, w) = (random_c4(&mut r), random_c4(&mut r));
        let (az, aw) = (a.apply(&z), a.apply(&w));
        t[1].observe((alpha_form(&az, &aw) - alpha_form(&z, &w)).norm() / (z.norm() * w.norm()), at);
        let d = |p: &nalgebra::Vector4<Complex64>, q: &nalgebra::Vector4<Complex64>| {
            SpherePoint::normalized(project_vector(p))
                .expect("unit")
                .distance(&SpherePoint::normalized(project_vector(q)).expect("unit"))
        };
        t[2].observe((d(&az, &aw) - d(&z, &w)).abs(), at);
        // The projective action is well defined.
        t[2].observe(chordal_distance(&a.apply(&(z * Complex64::new(0.0, 2.0))), &az), at);
    }
    rep.push(entry("membership", &t[0], GROUP_TOL));
    rep.push(entry("alpha_invariance", &t[1], IDENTITY_TOL));
    rep.push(entry("spherical_isometry", &t[2], GROUP_TOL));
    rep.meta("elements", n);
    rep.meta("seed", seed);
    rep
}

/// Tolerance of the integrated radial lengths against `2 atanh r`.
pub const LENGTH_TOL: f64 = 1e-8;

/// The hyperbolic model: ψ̃ onto the hyperquadric, the domain Ω against its
/// chart description, the ball metric, and a totally geodesic disc.
pub fn h4_suite(seed: u64, n: usize) -> Result<CheckReport> {
    let mut r = rng(seed);
    let mut rep = CheckReport::new("hyperbolic model");
    let mut t: [MaxTracker; 4] = Default::default();
    let (mut disagree, mut not_invariant, mut outside) = (0usize, 0usize, 0usize);
    for k in 0..n {
        let at = || format!("case {k}");
        let b = random_ball(&mut r, 0.99);
        let h = stereo_h4(&BallPoint::new(b)?);
        t[0].observe(h.residual() / h.coords()[4].powi(2), at);
        t[0].observe((stereo_h4_inverse(&h).coords() - b).norm(), at);

        let p = ProjectivePoint::new(random_c4(&mut r))?;
        let inside = omega_membership(&p);
        disagree += usize::from(inside != omega_membership_affine(&p));
        not_invariant += usize::from(inside != omega_membership(&twistor_involution(&p)));
        if inside {
            outside += usize::from(!(phi2(&p).norm() < 1.0));
            let y = twistor_project(&p);
            t[1].observe((y.coords() - stereo_s4(&phi2(&p).to_extended()).coords()).norm(), at);
        }

        let w = gaussian4(&mut r).normalize();
        let xb = random_ball(&mut r, 0.9);
        let dh: Vector5<f64> = richardson_derivative(|s| *stereo_h4(&BallPoint::new(xb + w * s).expect("inside")).coords(), 1e-4, 2);
        let lor = dh.fixed_rows::<4>(0).norm_squared() - dh[4] * dh[4];
        let gh = hyperbolic_metric_eval(&xb, &w)?;
        t[2].observe((lor - gh).abs() / gh, at);
    }
    let e1 = stereo_h4(&BallPoint::new(Vector4::new(0.5, 0.0, 0.0, 0.0))?);
    t[0].observe((e1.coords() - Vector5::new(4.0 / 3.0, 0.0, 0.0, 0.0, 5.0 / 3.0)).norm(), || "x = e1/2".into());
    rep.push(entry("stereo_h4_on_hyperquadric", &t[0], IDENTITY_TOL));
    rep.check("omega_membership_disagreements", disagree as f64, 0.0);
    rep.check("omega_involution_invariance", not_invariant as f64, 0.0);
    rep.check("omega_chart_outside_ball", outside as f64, 0.0);
    rep.push(entry("omega_projection_factorization", &t[1], IDENTITY_TOL));
    rep.push(entry("hyperbolic_metric_pullback", &t[2], PULLBACK_TOL));
    rep.push(CheckEntry::condition(
        "boundary_rejected",
        BallPoint::new(Vector4::x()).is_err() && hyperbolic_metric_eval(&Vector4::x(), &Vector4::y()).is_err(),
    ));

    let cfg = DiffConfig::default();
    let disc = catalog::ball_plane(catalog::ball_plane_domain());
    for radius in [0.5, 0.9, 0.99] {
        let path = ChartPath::Segment { from: [0.0, 0.0], to: [radius, 0.0] };
        let l = intrinsic_length(&disc, &path, &cfg)?;
        t[3].observe((l - 2.0 * radius.atanh()).abs(), || format!("r = {radius}"));
    }
    rep.push(entry("radial_length", &t[3], LENGTH_TOL));

    let grid = Grid::new(Rect::new(-0.9, 0.9, -0.08, 0.08)?, 11)?;
    let opts = SuiteOptions { expected_spin: None, lift_checks: true };
    let (disc_rep, _) = superminimality_suite(&disc, &grid, &cfg, opts)?;
    for mut e in disc_rep.entries {
        e.id = format!("ball_plane/{}", e.id);
        rep.push(e);
    }
    rep.meta("cases", n);
    rep.meta("seed", seed);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweeps_pass() {
        for rep in [algebra_suite(1, 200), sphere_map_suite(2, 200), group_suite(3, 20), h4_suite(4, 200).unwrap()] {
            assert!(rep.passed(), "{rep}");
        }
    }

    #[test]
    fn sweeps_are_deterministic() {
        assert_eq!(algebra_suite(9, 50), algebra_suite(9, 50));
    }
}
