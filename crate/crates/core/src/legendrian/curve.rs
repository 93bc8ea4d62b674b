//! Holomorphic Legendrian curves in CP³ and their projections to S⁴.

use std::sync::Arc;

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::poly::{eval_f64, CRational, ComplexPoly};
use super::LEGENDRIAN_SPIN;
use crate::error::{Error, Result};
use crate::report::{CheckReport, MaxTracker};
use crate::surface::verify::{entry, superminimality_suite, Grid, SuiteOptions};
use crate::surface::{twistor_lift, DiffConfig, ParamSurface, Rect, Target};
use crate::twistor_s4::{chordal_distance, project_vector, CVector4};

/// Generator data of a curve in the chart `z1 = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generators {
    pub p3: ComplexPoly,
    pub p4: ComplexPoly,
    pub c0: CRational,
}

/// A polynomial curve `t ↦ [z1(t) : z2(t) : z3(t) : z4(t)]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LegendrianCurve {
    z: [ComplexPoly; 4],
    certified: bool,
    generators: Option<Generators>,
}

/// `z1 z2' - z2 z1' + z3 z4' - z4 z3'`.
pub fn alpha_pullback_of(z: &[ComplexPoly; 4]) -> ComplexPoly {
    let d: Vec<ComplexPoly> = z.iter().map(ComplexPoly::derivative).collect();
    let a = &(&z[0] * &d[1]) - &(&z[1] * &d[0]);
    let b = &(&z[2] * &d[3]) - &(&z[3] * &d[2]);
    &a + &b
}

pub fn alpha_pullback(c: &LegendrianCurve) -> ComplexPoly {
    alpha_pullback_of(&c.z)
}

/// `z1 = 1, z3 = p3, z4 = p4, z2 = c0 + ∫ (p4 p3' - p3 p4')`.
pub fn generate_legendrian(p3: ComplexPoly, p4: ComplexPoly, c0: CRational) -> LegendrianCurve {
    let integrand = &(&p4 * &p3.derivative()) - &(&p3 * &p4.derivative());
    let z2 = integrand.antiderivative(c0.clone());
    let z = [ComplexPoly::constant(CRational::one()), z2, p3.clone(), p4.clone()];
    let certified = alpha_pullback_of(&z).is_zero();
    LegendrianCurve {
        z,
        certified,
        generators: Some(Generators { p3, p4, c0 }),
    }
}

impl LegendrianCurve {
    /// Any polynomial curve; certified iff its α-pullback vanishes exactly.
    pub fn from_components(z: [ComplexPoly; 4]) -> Self {
        let certified = alpha_pullback_of(&z).is_zero();
        Self {
            z,
            certified,
            generators: None,
        }
    }

    pub fn components(&self) -> &[ComplexPoly; 4] {
        &self.z
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }

    pub fn generators(&self) -> Option<&Generators> {
        self.generators.as_ref()
    }

    /// `λ Z`, which represents the same curve in CP³.
    pub fn scaled(&self, lambda: &CRational) -> Self {
        Self::from_components(self.z.clone().map(|p| p.scale(lambda)))
    }

    pub fn describe(&self) -> String {
        format!("[{} : {} : {} : {}]", self.z[0], self.z[1], self.z[2], self.z[3])
    }

    pub fn evaluator(&self) -> CurveEvaluator {
        CurveEvaluator {
            coeffs: Arc::new(self.z.clone().map(|p| p.to_f64_coeffs())),
        }
    }

    pub fn eval(&self, t: Complex64) -> CVector4 {
        self.evaluator().eval(t)
    }

    pub fn require_certified(&self) -> Result<()> {
        if self.certified {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "curve is not Legendrian: α-pullback = {}",
                alpha_pullback(self)
            )))
        }
    }
}

/// Double-precision evaluation of a polynomial curve.
#[derive(Debug, Clone)]
pub struct CurveEvaluator {
    coeffs: Arc<[Vec<Complex64>; 4]>,
}

impl CurveEvaluator {
    pub fn eval(&self, t: Complex64) -> CVector4 {
        CVector4::new(
            eval_f64(&self.coeffs[0], t),
            eval_f64(&self.coeffs[1], t),
            eval_f64(&self.coeffs[2], t),
            eval_f64(&self.coeffs[3], t),
        )
    }
}

/// Chart padding around a verification grid, as a fraction of its scale.
pub const GRID_PADDING: f64 = 0.02;

/// `(u, v) ↦ π(Z(u + iv))` on `domain` padded by [`GRID_PADDING`], for any
/// polynomial curve, certified or not.
pub fn project_polynomial_curve(c: &LegendrianCurve, domain: Rect) -> Result<ParamSurface> {
    let padded = domain.padded(GRID_PADDING * domain.scale());
    let ev = c.evaluator();
    for (u, v) in padded.grid(65) {
        let z = ev.eval(Complex64::new(u, v));
        if !(z.norm() > 1e-12) {
            return Err(Error::Domain(format!("curve vanishes near t = {u}{v:+}i")));
        }
    }
    Ok(ParamSurface::new(
        format!("legendrian_projection{}", c.describe()),
        Target::Sphere,
        padded,
        move |u, v| project_vector(&ev.eval(Complex64::new(u, v))),
    ))
}

/// The projection of a certified curve to S⁴.
pub fn project_curve(c: &LegendrianCurve, domain: Rect) -> Result<ParamSurface> {
    c.require_certified()?;
    project_polynomial_curve(c, domain)
}

/// The superminimality suite on the projection plus the distance between
/// the twistor lift (of the calibrated spin) and the curve itself.
pub fn roundtrip_verify(c: &LegendrianCurve, grid: &Grid, cfg: &DiffConfig) -> Result<CheckReport> {
    let s = project_curve(c, grid.domain)?;
    let opts = SuiteOptions {
        expected_spin: Some(LEGENDRIAN_SPIN),
        lift_checks: true,
    };
    let (mut rep, samples) = superminimality_suite(&s, grid, cfg, opts)?;
    rep.name = format!("roundtrip {}", c.describe());
    let ev = c.evaluator();
    let mut chordal = MaxTracker::default();
    for p in samples.iter().filter(|p| !p.masked) {
        let lift = twistor_lift(&s, p.u, p.v, LEGENDRIAN_SPIN, cfg)?;
        let z = ev.eval(Complex64::new(p.u, p.v));
        chordal.observe(chordal_distance(lift.representative(), &z), || p.label());
    }
    rep.push(entry("lift_chordal", &chordal, cfg.tolerances.chordal));
    let masked: Vec<String> = samples.iter().filter(|p| p.masked).map(|p| p.label()).collect();
    if !masked.is_empty() {
        rep.note(format!("masked branch points: {}", masked.join(", ")));
    }
    rep.meta("curve", c.describe());
    rep.meta("calibrated_spin", LEGENDRIAN_SPIN.to_string());
    Ok(rep)
}

/// The zero constant, for generator calls.
pub fn c0_zero() -> CRational {
    CRational::zero()
}
