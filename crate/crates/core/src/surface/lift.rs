//! Twistor lifts of conformal immersions and their horizontality tests.
//!
//! At a conformal point the oriented tangent plane `(t1, t2)` and the
//! oriented normal plane `(n1, n2)` determine `F± = J±` of the frame
//! `(t1, t2, n1, n2)`. Ball and flat targets are carried to S⁴ by `ψ`,
//! which is conformal and orientation preserving, before the structure is
//! turned into a point of CP³.

use nalgebra::{Matrix4, Matrix5, Vector2, Vector4, Vector5};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::diff::{differentiate, richardson_derivative, DiffConfig, SurfaceJet};
use super::forms::fundamental_forms;
use super::{ParamSurface, Target};
use crate::error::{Error, Result};
use crate::quaternion::Spin;
use crate::twistor_s4::{
    alpha_form, fiber_point, stereo_s4, stereo_s4_conformal_factor, stereo_s4_differential, CVector4,
    ExtendedR4, ProjectivePoint, SphereStructure,
};

/// `F±` at a surface point as an operator on R⁵ vanishing on the target normal.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentStructure {
    pub jet: SurfaceJet,
    pub spin: Spin,
    pub m: Matrix5<f64>,
}

impl TangentStructure {
    /// `|F f_u - f_v| / |f_u|`: the matrix form of `df ∘ I = F ∘ df`.
    pub fn lift_equation_residual(&self) -> f64 {
        let [fu, fv] = &self.jet.df;
        (self.m * fu - fv).norm() / fu.norm()
    }

    /// The structure carried to `T_y S⁴`.
    pub fn on_sphere(&self) -> SphereStructure {
        let f = &self.jet.f;
        match self.jet.target {
            Target::Sphere => SphereStructure {
                base: crate::twistor_s4::SpherePoint::normalized(*f).expect("sphere point"),
                m: self.m,
            },
            Target::Ball | Target::Flat => {
                let x = Vector4::new(f[0], f[1], f[2], f[3]);
                let d = stereo_s4_differential(&x);
                let l = stereo_s4_conformal_factor(&x);
                let f4: Matrix4<f64> = self.m.fixed_view::<4, 4>(0, 0).into();
                let m = d * f4 * d.transpose() / (l * l);
                SphereStructure {
                    base: stereo_s4(&ExtendedR4::Finite(x)),
                    m,
                }
            }
        }
    }
}

/// `F±` at `(u, v)` for the sign `spin` relative to the target orientation.
pub fn tangent_structure(s: &ParamSurface, u: f64, v: f64, spin: Spin, cfg: &DiffConfig) -> Result<TangentStructure> {
    let jet = differentiate(s, u, v, cfg)?;
    let forms = fundamental_forms(&jet)?;
    if !(forms.conformality_residual <= cfg.tolerances.conformality) {
        return Err(Error::Precondition(format!(
            "not conformal at ({u}, {v}): residual {:.2e}",
            forms.conformality_residual
        )));
    }
    let [t1, t2] = jet.tangent;
    let [n1, n2] = jet.normal;
    let m = t2 * t1.transpose() - t1 * t2.transpose() + (n2 * n1.transpose() - n1 * n2.transpose()) * spin.sign();
    Ok(TangentStructure { jet, spin, m })
}

/// The twistor lift `F±(u, v)` as a point of CP³.
///
/// Lifts of positive spin (for the standard orientation of S⁴) lie over
/// `f(u, v)`; lifts of negative spin lie over the antipode, see
/// [`fiber_point`].
pub fn twistor_lift(s: &ParamSurface, u: f64, v: f64, spin: Spin, cfg: &DiffConfig) -> Result<ProjectivePoint> {
    fiber_point(&tangent_structure(s, u, v, spin, cfg)?.on_sphere())
}

/// Finite-difference horizontality and holomorphicity of the lift.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LiftResiduals {
    /// `max |α(Z, Z')| / (|Z| |Z'⊥|)` over the two chart directions. The
    /// contact distribution of α is horizontal for the round metric only, so
    /// this tests superminimality on sphere targets alone.
    pub alpha: f64,
    /// `|(Z_v - i Z_u)⊥| / |Z_u⊥|`.
    pub cauchy_riemann: f64,
    /// `|F f_u - f_v| / |f_u|`.
    pub lift_equation: f64,
}

fn align(z: &CVector4, reference: &CVector4) -> CVector4 {
    let c: Complex64 = reference.dotc(z);
    if c.norm() == 0.0 {
        *z
    } else {
        z * (c.conj() / c.norm())
    }
}

fn perp(z: &CVector4, reference: &CVector4) -> CVector4 {
    z - reference * (reference.dotc(z) / reference.norm_squared())
}

pub fn lift_residuals(s: &ParamSurface, u: f64, v: f64, spin: Spin, cfg: &DiffConfig) -> Result<LiftResiduals> {
    let ts = tangent_structure(s, u, v, spin, cfg)?;
    let z0 = *fiber_point(&ts.on_sphere())?.representative();
    let h = cfg.outer_step(s);
    let k = cfg.richardson_order;
    let lift_at = |a: f64, b: f64| -> Result<CVector4> {
        let p = twistor_lift(s, u + a, v + b, spin, cfg)?;
        Ok(align(p.representative(), &z0))
    };
    // Evaluate the stencil eagerly so errors propagate.
    let mut cache = std::collections::HashMap::new();
    for t in [h, -h, h / 2.0, -h / 2.0] {
        cache.insert((0, t.to_bits()), lift_at(t, 0.0)?);
        cache.insert((1, t.to_bits()), lift_at(0.0, t)?);
    }
    let zu = richardson_derivative(|t| cache[&(0, t.to_bits())], h, k);
    let zv = richardson_derivative(|t| cache[&(1, t.to_bits())], h, k);
    let alpha_of = |zd: &CVector4| {
        let p = perp(zd, &z0).norm();
        if p == 0.0 {
            0.0
        } else {
            alpha_form(&z0, zd).norm() / (z0.norm() * p)
        }
    };
    let cr_scale = perp(&zu, &z0).norm();
    let cr = if cr_scale == 0.0 {
        0.0
    } else {
        perp(&(zv - zu * Complex64::i()), &z0).norm() / cr_scale
    };
    Ok(LiftResiduals {
        alpha: alpha_of(&zu).max(alpha_of(&zv)),
        cauchy_riemann: cr,
        lift_equation: ts.lift_equation_residual(),
    })
}

/// `‖∇_w F‖ / |df(w)|` for the Levi-Civita connection of the target pulled
/// back along the surface.
///
/// On the sphere `∇ = P d` with `P` the projection onto `T S⁴`, so
/// `∇F = P (dF) P`. On the ball `∇_W X = D_W X + Γ_W X` with
/// `Γ_W = (W·∇σ) I + W ∇σᵀ - ∇σ Wᵀ`, giving `∇F = dF + [Γ_W, F]`.
pub fn covariant_derivative_residual(
    s: &ParamSurface,
    u: f64,
    v: f64,
    w: &Vector2<f64>,
    spin: Spin,
    cfg: &DiffConfig,
) -> Result<f64> {
    let base = tangent_structure(s, u, v, spin, cfg)?;
    let h = cfg.outer_step(s);
    let mut stencil = std::collections::HashMap::new();
    for t in [h, -h, h / 2.0, -h / 2.0] {
        let ts = tangent_structure(s, u + t * w[0], v + t * w[1], spin, cfg)?;
        stencil.insert(t.to_bits(), ts.m);
    }
    let df: Matrix5<f64> = richardson_derivative(|t| stencil[&t.to_bits()], h, cfg.richardson_order);
    let jet = &base.jet;
    let nu = jet.target_normal();
    let p = Matrix5::identity() - nu * nu.transpose();
    let wv = jet.push(w);
    let (nabla, speed) = match jet.target {
        Target::Sphere | Target::Flat => (p * df * p, wv.norm()),
        Target::Ball => {
            let f = &jet.f;
            let x = Vector5::new(f[0], f[1], f[2], f[3], 0.0);
            let d = 1.0 - x.norm_squared();
            let grad = x * (2.0 / d);
            let gamma = Matrix5::identity() * wv.dot(&grad) + wv * grad.transpose() - grad * wv.transpose();
            let nabla = df + gamma * base.m - base.m * gamma;
            (p * nabla * p, wv.norm() * 2.0 / d)
        }
    };
    Ok(spectral_norm(&nabla) / speed)
}

fn spectral_norm(m: &Matrix5<f64>) -> f64 {
    m.singular_values().max()
}
