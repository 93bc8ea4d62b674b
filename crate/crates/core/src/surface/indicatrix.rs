//! Curvature indicatrices and the superminimality test.
//!
//! For a unit tangent `v` the curve `θ ↦ S(cos θ ν1 + sin θ ν2) v` traces
//! the indicatrix `I(v)` in the tangent plane; over all `v` the operators
//! `S(n)` trace `I` inside `Sym(T) ≅ R³`, embedded by
//! `((a+c)/√2, √2 b, (a-c)/√2)`.

use nalgebra::{Matrix2, Matrix3, SMatrix, Vector2, Vector3};
use serde::{Deserialize, Serialize};

use super::diff::Tolerances;
use super::forms::FundamentalForms;
use crate::error::{domain, Result};
use crate::quaternion::Spin;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleFit {
    pub center: Vector2<f64>,
    pub radius: f64,
    /// Root-mean-square of `|p - c| - r`.
    pub rms: f64,
}

/// Algebraic (Kåsa) fit refined by Gauss–Newton on the geometric residuals.
pub fn fit_circle(points: &[Vector2<f64>]) -> Result<CircleFit> {
    if points.len() < 3 {
        return Err(domain("a circle fit needs at least three points"));
    }
    let n = points.len() as f64;
    let mean = points.iter().sum::<Vector2<f64>>() / n;
    let spread = points.iter().map(|p| (p - mean).norm()).fold(0.0, f64::max);
    if spread == 0.0 {
        return Ok(CircleFit { center: mean, radius: 0.0, rms: 0.0 });
    }
    // Centered and scaled coordinates keep the normal equations conditioned.
    let q: Vec<Vector2<f64>> = points.iter().map(|p| (p - mean) / spread).collect();
    let mut ata = Matrix3::zeros();
    let mut atb = Vector3::zeros();
    for p in &q {
        let row = Vector3::new(p[0], p[1], 1.0);
        ata += row * row.transpose();
        atb -= row * p.norm_squared();
    }
    let sol = ata
        .lu()
        .solve(&atb)
        .ok_or_else(|| domain("collinear points admit no circle"))?;
    let mut c = Vector2::new(-sol[0] / 2.0, -sol[1] / 2.0);
    let r2 = c.norm_squared() - sol[2];
    if !(r2 > 0.0) {
        return Err(domain("algebraic circle fit has no real radius"));
    }
    let mut r = r2.sqrt();
    for _ in 0..20 {
        let mut jtj = Matrix3::zeros();
        let mut jtr = Vector3::zeros();
        for p in &q {
            let d = p - c;
            let dist = d.norm();
            if dist == 0.0 {
                continue;
            }
            let res = dist - r;
            let row = Vector3::new(-d[0] / dist, -d[1] / dist, -1.0);
            jtj += row * row.transpose();
            jtr += row * res;
        }
        let Some(step) = jtj.lu().solve(&(-jtr)) else { break };
        c += Vector2::new(step[0], step[1]);
        r += step[2];
        if step.norm() < 1e-15 {
            break;
        }
    }
    let rms = (q.iter().map(|p| ((p - c).norm() - r).powi(2)).sum::<f64>() / n).sqrt();
    Ok(CircleFit {
        center: mean + c * spread,
        radius: r.abs() * spread,
        rms: rms * spread,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IndicatrixShape {
    Point,
    Segment,
    Ellipse,
    Circle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndicatrixReport {
    /// `S(n_k) v` at `K` equally spaced normal angles.
    pub samples: Vec<Vector2<f64>>,
    pub center: Vector2<f64>,
    pub center_norm: f64,
    pub radius: f64,
    /// Out-of-plane extent of `I` in R³ relative to its size.
    pub planarity_residual: f64,
    /// `rms(|p - c| - r) / r`.
    pub circularity_residual: f64,
    /// Sense of `n ↦ S(n) v` against the oriented normal circle; `None` when degenerate.
    pub spin: Option<Spin>,
    pub degenerate: bool,
    pub threshold: f64,
    /// `I` embedded in R³.
    pub sym_curve: Vec<Vector3<f64>>,
    pub shape: IndicatrixShape,
}

impl IndicatrixReport {
    /// Circle centred at 0 (or degenerate to the point 0).
    pub fn is_superminimal(&self, tol: &Tolerances) -> bool {
        self.degenerate
            || (self.center_norm <= tol.indicatrix_center * self.radius
                && self.circularity_residual <= tol.circularity)
    }
}

/// `((a+c)/√2, √2 b, (a-c)/√2)` for `S = ((a, b), (b, c))`.
pub fn sym_embed(s: &Matrix2<f64>) -> Vector3<f64> {
    let r2 = std::f64::consts::SQRT_2;
    let (a, b, c) = (s[(0, 0)], 0.5 * (s[(0, 1)] + s[(1, 0)]), s[(1, 1)]);
    Vector3::new((a + c) / r2, r2 * b, (a - c) / r2)
}

/// Indicatrix `I(v)` for a unit tangent `v` in the orthonormal tangent basis.
pub fn indicatrix(forms: &FundamentalForms, v: &Vector2<f64>, k: usize, tol: &Tolerances) -> Result<IndicatrixReport> {
    if k < 8 {
        return Err(domain("at least 8 normal angles are required"));
    }
    if (v.norm() - 1.0).abs() > 1e-10 {
        return Err(domain("indicatrix direction must be a unit vector"));
    }
    let thetas: Vec<f64> = (0..k).map(|i| std::f64::consts::TAU * i as f64 / k as f64).collect();
    let samples: Vec<Vector2<f64>> = thetas.iter().map(|t| forms.shape_at_angle(*t) * v).collect();
    let sym_curve: Vec<Vector3<f64>> = thetas.iter().map(|t| sym_embed(&forms.shape_at_angle(*t))).collect();

    let threshold = (tol.degeneracy * forms.curvature_scale).max(forms.noise_floor);
    let a = forms.shape[0] * v;
    let b = forms.shape[1] * v;
    let size = a.norm().max(b.norm());
    let degenerate = size < threshold;

    let (center, radius, circ) = if degenerate {
        let c = samples.iter().sum::<Vector2<f64>>() / k as f64;
        (c, size, 0.0)
    } else {
        match fit_circle(&samples) {
            Ok(fit) => (fit.center, fit.radius, fit.rms / fit.radius),
            // Collinear samples: a segment through the center, maximally non-circular.
            Err(_) => (samples.iter().sum::<Vector2<f64>>() / k as f64, size, 1.0),
        }
    };
    let spin = if degenerate {
        None
    } else {
        Some(Spin::from_sign(a[0] * b[1] - a[1] * b[0]))
    };

    let s1 = sym_embed(&forms.shape[0]);
    let s2 = sym_embed(&forms.shape[1]);
    let sv = SMatrix::<f64, 3, 2>::from_columns(&[s1, s2]).singular_values();
    let (big, small) = (sv.max(), sv.min());
    let shape = if big < threshold {
        IndicatrixShape::Point
    } else if small < threshold.max(tol.circularity * big) {
        IndicatrixShape::Segment
    } else if (big - small) / big < tol.circularity {
        IndicatrixShape::Circle
    } else {
        IndicatrixShape::Ellipse
    };
    let planarity_residual = planarity(&sym_curve);

    Ok(IndicatrixReport {
        samples,
        center,
        center_norm: center.norm(),
        radius,
        planarity_residual,
        circularity_residual: circ,
        spin,
        degenerate,
        threshold,
        sym_curve,
        shape,
    })
}

fn planarity(points: &[Vector3<f64>]) -> f64 {
    let n = points.len() as f64;
    let mean = points.iter().sum::<Vector3<f64>>() / n;
    let mut cov = Matrix3::zeros();
    for p in points {
        let d = p - mean;
        cov += d * d.transpose();
    }
    let ev = cov.symmetric_eigenvalues();
    let big = ev.max();
    if big <= 0.0 {
        0.0
    } else {
        (ev.min().max(0.0) / big).sqrt()
    }
}
