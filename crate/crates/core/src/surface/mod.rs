//! Parametrized surfaces in S⁴, the Poincaré ball, or flat R⁴.
//!
//! All targets are embedded in R⁵: sphere points are unit vectors, ball and
//! flat points have vanishing fifth coordinate. The unit vector `ν` normal to
//! the target (`y` on the sphere, `e5` otherwise) closes every oriented frame
//! `(t1, t2, n1, n2, ν)`.

pub mod catalog;
pub mod diff;
pub mod forms;
pub mod indicatrix;
pub mod length;
pub mod lift;
pub mod verify;

use std::fmt;
use std::sync::Arc;

use nalgebra::{Vector2, Vector5};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

pub use diff::{differentiate, DiffConfig, SurfaceJet, Tolerances};
pub use forms::{fundamental_forms, mean_curvature, FundamentalForms, MeanCurvature};
pub use indicatrix::{fit_circle, indicatrix, CircleFit, IndicatrixReport, IndicatrixShape};
pub use length::{diameter_estimate, intrinsic_length, ChartPath};
pub use lift::{
    covariant_derivative_residual, lift_residuals, tangent_structure, twistor_lift, LiftResiduals,
};
pub use verify::{sample_grid, sample_point, superminimality_suite, Grid, PointSample, SuiteOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Sphere,
    Ball,
    Flat,
}

impl Target {
    /// Unit normal of the target inside R⁵ at `y`.
    pub fn normal(&self, y: &Vector5<f64>) -> Vector5<f64> {
        match self {
            Target::Sphere => *y,
            Target::Ball | Target::Flat => Vector5::new(0.0, 0.0, 0.0, 0.0, 1.0),
        }
    }

    pub fn contains(&self, y: &Vector5<f64>) -> bool {
        match self {
            Target::Sphere => (y.norm() - 1.0).abs() < 1e-9,
            Target::Ball => y[4] == 0.0 && y.norm() < 1.0,
            Target::Flat => y[4] == 0.0 && y.iter().all(|c| c.is_finite()),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::Sphere => "sphere",
            Target::Ball => "ball",
            Target::Flat => "flat",
        })
    }
}

/// Orientation of the target relative to its standard one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    #[default]
    Standard,
    Reversed,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Standard => 1.0,
            Orientation::Reversed => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Orientation::Standard => Orientation::Reversed,
            Orientation::Reversed => Orientation::Standard,
        }
    }
}

/// An open chart rectangle `(u0, u1) × (v0, v1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub u0: f64,
    pub u1: f64,
    pub v0: f64,
    pub v1: f64,
}

impl Rect {
    pub fn new(u0: f64, u1: f64, v0: f64, v1: f64) -> Result<Self> {
        if !(u0 < u1 && v0 < v1) {
            return Err(domain(format!("empty rectangle ({u0},{u1})×({v0},{v1})")));
        }
        Ok(Self { u0, u1, v0, v1 })
    }

    pub fn square(half: f64) -> Self {
        Self { u0: -half, u1: half, v0: -half, v1: half }
    }

    /// Largest side; finite-difference steps are relative to it.
    pub fn scale(&self) -> f64 {
        (self.u1 - self.u0).max(self.v1 - self.v0)
    }

    /// Whether `(u, v)` lies inside with at least `margin` to spare.
    pub fn contains_with_margin(&self, u: f64, v: f64, margin: f64) -> bool {
        u - margin > self.u0 && u + margin < self.u1 && v - margin > self.v0 && v + margin < self.v1
    }

    pub fn padded(&self, pad: f64) -> Self {
        Self {
            u0: self.u0 - pad,
            u1: self.u1 + pad,
            v0: self.v0 - pad,
            v1: self.v1 + pad,
        }
    }

    /// `n × n` points including the boundary, row-major in `v`, then `u`.
    pub fn grid(&self, n: usize) -> Vec<(f64, f64)> {
        let n = n.max(2);
        let mut out = Vec::with_capacity(n * n);
        for j in 0..n {
            let v = self.v0 + (self.v1 - self.v0) * j as f64 / (n - 1) as f64;
            for i in 0..n {
                let u = self.u0 + (self.u1 - self.u0) * i as f64 / (n - 1) as f64;
                out.push((u, v));
            }
        }
        out
    }

    /// The grid of [`Rect::grid`] shrunk into the open rectangle by `inset` of each side.
    pub fn interior_grid(&self, n: usize, inset: f64) -> Vec<(f64, f64)> {
        let du = (self.u1 - self.u0) * inset;
        let dv = (self.v1 - self.v0) * inset;
        Rect {
            u0: self.u0 + du,
            u1: self.u1 - du,
            v0: self.v0 + dv,
            v1: self.v1 - dv,
        }
        .grid(n)
    }
}

pub type SurfaceMap = Arc<dyn Fn(f64, f64) -> Vector5<f64> + Send + Sync>;

/// A parametrized surface `(u, v) ↦ f(u, v)` in one of the three targets.
#[derive(Clone)]
pub struct ParamSurface {
    id: String,
    target: Target,
    domain: Rect,
    orientation: Orientation,
    map: SurfaceMap,
}

impl fmt::Debug for ParamSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParamSurface")
            .field("id", &self.id)
            .field("target", &self.target)
            .field("domain", &self.domain)
            .field("orientation", &self.orientation)
            .finish_non_exhaustive()
    }
}

impl ParamSurface {
    pub fn new(
        id: impl Into<String>,
        target: Target,
        domain: Rect,
        map: impl Fn(f64, f64) -> Vector5<f64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            id: id.into(),
            target,
            domain,
            orientation: Orientation::Standard,
            map: Arc::new(map),
        }
    }

    /// A surface in R⁴ (flat or ball) given by 4-vectors.
    pub fn in_r4(
        id: impl Into<String>,
        target: Target,
        domain: Rect,
        map: impl Fn(f64, f64) -> [f64; 4] + Send + Sync + 'static,
    ) -> Self {
        Self::new(id, target, domain, move |u, v| {
            let x = map(u, v);
            Vector5::new(x[0], x[1], x[2], x[3], 0.0)
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn target(&self) -> Target {
        self.target
    }

    pub fn domain(&self) -> &Rect {
        &self.domain
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn eval(&self, u: f64, v: f64) -> Vector5<f64> {
        (self.map)(u, v)
    }

    pub fn eval_at(&self, p: Vector2<f64>) -> Vector5<f64> {
        (self.map)(p[0], p[1])
    }

    pub fn with_orientation(mut self, o: Orientation) -> Self {
        self.orientation = o;
        self
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn with_domain(mut self, domain: Rect) -> Self {
        self.domain = domain;
        self
    }

    /// `w ↦ f(a w + b)` on a new chart rectangle; conformal and orientation
    /// preserving for `a ≠ 0`.
    pub fn reparametrized(&self, a: Complex64, b: Complex64, domain: Rect) -> Result<Self> {
        if a.norm() == 0.0 {
            return Err(domain_err("reparametrization with a = 0"));
        }
        let map = self.map.clone();
        Ok(Self {
            id: format!("{}∘({a}w+{b})", self.id),
            target: self.target,
            domain,
            orientation: self.orientation,
            map: Arc::new(move |u, v| {
                let w = a * Complex64::new(u, v) + b;
                map(w.re, w.im)
            }),
        })
    }

    /// The image under the antipodal map of S⁴, which reverses orientation.
    pub fn antipodal(&self) -> Result<Self> {
        if self.target != Target::Sphere {
            return Err(domain_err("the antipodal map is defined on sphere targets only"));
        }
        let map = self.map.clone();
        Ok(Self {
            id: format!("antipodal({})", self.id),
            target: Target::Sphere,
            domain: self.domain,
            orientation: self.orientation,
            map: Arc::new(move |u, v| -map(u, v)),
        })
    }
}

fn domain_err(msg: &str) -> crate::Error {
    domain(msg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_layout() {
        let r = Rect::square(1.0);
        let g = r.grid(3);
        assert_eq!(g.len(), 9);
        assert_eq!(g[0], (-1.0, -1.0));
        assert_eq!(g[1], (0.0, -1.0));
        assert_eq!(g[8], (1.0, 1.0));
        assert!(r.contains_with_margin(0.9, 0.0, 0.05));
        assert!(!r.contains_with_margin(0.99, 0.0, 0.05));
        assert!(Rect::new(1.0, 0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn reparametrization_composes() {
        let s = ParamSurface::in_r4("id", Target::Flat, Rect::square(1.0), |u, v| [u, v, 0.0, 0.0]);
        let r = s
            .reparametrized(Complex64::new(0.0, 2.0), Complex64::new(0.5, 0.0), Rect::square(0.2))
            .unwrap();
        // i·2·(0.1 + 0i) + 0.5 = 0.5 + 0.2i
        let y = r.eval(0.1, 0.0);
        assert!((y - Vector5::new(0.5, 0.2, 0.0, 0.0, 0.0)).norm() < 1e-15);
    }
}
