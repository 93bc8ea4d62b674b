//! Hyperbolic 4-space: the hyperquadric in Lorentzian R^{4,1}, the Poincaré
//! ball, and the domain `Ω ⊂ CP³` lying over the ball.

use nalgebra::{Vector4, Vector5};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::twistor_s4::{phi2, ProjectivePoint};

/// A vector of R^{4,1}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LorentzVector(pub Vector5<f64>);

impl LorentzVector {
    /// `x∘y = x1y1 + … + x4y4 - x5y5`.
    pub fn dot(&self, o: &Self) -> f64 {
        let (a, b) = (&self.0, &o.0);
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3] - a[4] * b[4]
    }
}

/// A point of the upper sheet `x∘x = -1, x5 > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "[f64; 5]", try_from = "[f64; 5]")]
pub struct HyperboloidPoint(LorentzVector);

impl HyperboloidPoint {
    /// Tolerance on `x∘x + 1`, relative to `x5²` (the size of the cancelling terms).
    pub const TOL: f64 = 1e-12;

    pub fn new(x: Vector5<f64>) -> Result<Self> {
        let v = LorentzVector(x);
        let res = Self::residual_of(&v);
        if !(x[4] > 0.0) || !(res <= Self::TOL) {
            return Err(domain(format!(
                "not on the upper hyperboloid (x5 = {}, relative residual {res:e})",
                x[4]
            )));
        }
        Ok(Self(v))
    }

    fn residual_of(v: &LorentzVector) -> f64 {
        (v.dot(v) + 1.0).abs() / v.0[4].powi(2).max(1.0)
    }

    /// `|x∘x + 1| / max(1, x5²)`.
    pub fn residual(&self) -> f64 {
        Self::residual_of(&self.0)
    }

    pub fn coords(&self) -> &Vector5<f64> {
        &self.0 .0
    }

    pub fn lorentz(&self) -> &LorentzVector {
        &self.0
    }
}

impl From<HyperboloidPoint> for [f64; 5] {
    fn from(p: HyperboloidPoint) -> Self {
        p.0 .0.into()
    }
}

impl TryFrom<[f64; 5]> for HyperboloidPoint {
    type Error = crate::Error;
    fn try_from(a: [f64; 5]) -> Result<Self> {
        Self::new(Vector5::from(a))
    }
}

/// A point of the open unit ball.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallPoint(Vector4<f64>);

impl BallPoint {
    pub fn new(x: Vector4<f64>) -> Result<Self> {
        let r = x.norm();
        if !(r < 1.0) {
            return Err(domain(format!("|x| = {r} is not inside the unit ball")));
        }
        Ok(Self(x))
    }

    pub fn coords(&self) -> &Vector4<f64> {
        &self.0
    }
}

/// `ψ̃(x) = (2x, 1 + |x|²) / (1 - |x|²)`.
pub fn stereo_h4(x: &BallPoint) -> HyperboloidPoint {
    let x = x.0;
    let r2 = x.norm_squared();
    let d = 1.0 - r2;
    HyperboloidPoint(LorentzVector(
        Vector5::new(2.0 * x[0], 2.0 * x[1], 2.0 * x[2], 2.0 * x[3], 1.0 + r2) / d,
    ))
}

pub fn stereo_h4_inverse(h: &HyperboloidPoint) -> BallPoint {
    let x = h.coords();
    BallPoint(Vector4::new(x[0], x[1], x[2], x[3]) / (1.0 + x[4]))
}

/// Conformal factor `2 / (1 - |x|²)` of the ball metric over the Euclidean one.
pub fn ball_conformal_factor(x: &Vector4<f64>) -> Result<f64> {
    let r2 = x.norm_squared();
    if !(r2 < 1.0) {
        return Err(domain(format!("|x|² = {r2} is not inside the unit ball")));
    }
    Ok(2.0 / (1.0 - r2))
}

/// `g_h(v, v) = 4|v|² / (1 - |x|²)²`.
pub fn hyperbolic_metric_eval(x: &Vector4<f64>, v: &Vector4<f64>) -> Result<f64> {
    let l = ball_conformal_factor(x)?;
    Ok(l * l * v.norm_squared())
}

/// `|z1|² + |z2|² > |z3|² + |z4|²`: the points of CP³ lying over the ball.
pub fn omega_membership(p: &ProjectivePoint) -> bool {
    let z = p.representative();
    z[0].norm_sqr() + z[1].norm_sqr() > z[2].norm_sqr() + z[3].norm_sqr()
}

/// `|φ₂(z)| < 1`, the chart-side description of Ω.
pub fn omega_membership_affine(p: &ProjectivePoint) -> bool {
    phi2(p).norm() < 1.0
}

/// Hyperbolic distance from the origin of the ball, `2 atanh |x|`.
pub fn distance_from_origin(x: &BallPoint) -> f64 {
    2.0 * x.0.norm().atanh()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stereo_examples() {
        let o = stereo_h4(&BallPoint::new(Vector4::zeros()).unwrap());
        assert_eq!(*o.coords(), Vector5::new(0.0, 0.0, 0.0, 0.0, 1.0));
        let h = stereo_h4(&BallPoint::new(Vector4::new(0.5, 0.0, 0.0, 0.0)).unwrap());
        let expected = Vector5::new(4.0 / 3.0, 0.0, 0.0, 0.0, 5.0 / 3.0);
        assert!((h.coords() - expected).norm() < 1e-15);
        assert!(HyperboloidPoint::new(expected).is_ok());
        assert!(HyperboloidPoint::new(-expected).is_err());
        assert!(BallPoint::new(Vector4::new(1.0, 0.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn metric_examples() {
        assert_eq!(hyperbolic_metric_eval(&Vector4::zeros(), &Vector4::x()).unwrap(), 4.0);
        let mut last = 0.0;
        for r in [0.0, 0.5, 0.9, 0.99, 0.999] {
            let g = hyperbolic_metric_eval(&Vector4::new(r, 0.0, 0.0, 0.0), &Vector4::y()).unwrap();
            assert!(g > last);
            last = g;
        }
        assert!(hyperbolic_metric_eval(&Vector4::new(0.0, 1.0, 0.0, 0.0), &Vector4::y()).is_err());
    }

    #[test]
    fn omega_examples() {
        assert!(omega_membership(&ProjectivePoint::from_real([1.0, 0.0, 0.0, 0.0]).unwrap()));
        assert!(!omega_membership(&ProjectivePoint::from_real([0.0, 0.0, 1.0, 0.0]).unwrap()));
        assert!(!omega_membership(&ProjectivePoint::from_real([1.0, 0.0, 1.0, 0.0]).unwrap()));
    }
}
