//! First and second fundamental forms from a 2-jet.
//!
//! Shape operators are expressed in an orthonormal tangent basis for the
//! target metric. On the sphere the ambient projection already gives the
//! Riemannian normal component. On the ball `g = e^{2σ} δ` with
//! `e^σ = 2/(1 - |x|²)`, and for Euclidean unit `n`
//! `S_g(e^{-σ} n) = e^{-σ} (S_E(n) - <∇σ, n> I)`.

use nalgebra::{Matrix2, Vector4, Vector5};
use serde::{Deserialize, Serialize};

use super::diff::SurfaceJet;
use super::Target;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FundamentalForms {
    /// First fundamental form in the target metric.
    pub first: Matrix2<f64>,
    /// `(|E - G| + 2|F|) / (E + G)`.
    pub conformality_residual: f64,
    /// `e^σ` on the ball, 1 otherwise.
    pub metric_factor: f64,
    /// Euclidean-orthonormal tangent and normal frames from the jet.
    pub tangent: [Vector5<f64>; 2],
    pub normal: [Vector5<f64>; 2],
    /// `S(ν1), S(ν2)` for the target-unit normals `ν_k = normal[k] / metric_factor`.
    pub shape: [Matrix2<f64>; 2],
    /// Shape-operator scale of the ambient bending, for degeneracy tests.
    pub curvature_scale: f64,
    pub noise_floor: f64,
}

impl FundamentalForms {
    /// `S(cos θ ν1 + sin θ ν2)`.
    pub fn shape_at_angle(&self, theta: f64) -> Matrix2<f64> {
        self.shape[0] * theta.cos() + self.shape[1] * theta.sin()
    }

    /// Target-unit normals as vectors of R⁵.
    pub fn unit_normals(&self) -> [Vector5<f64>; 2] {
        [self.normal[0] / self.metric_factor, self.normal[1] / self.metric_factor]
    }

    /// Largest absolute shape-operator entry.
    pub fn shape_norm(&self) -> f64 {
        self.shape[0].amax().max(self.shape[1].amax())
    }
}

fn ball_sigma_gradient(f: &Vector5<f64>) -> (f64, Vector5<f64>) {
    let x = Vector4::new(f[0], f[1], f[2], f[3]);
    let d = 1.0 - x.norm_squared();
    let g = x * (2.0 / d);
    (2.0 / d, Vector5::new(g[0], g[1], g[2], g[3], 0.0))
}

/// `S(ν)` for the target-unit normal along the Euclidean normal vector `n`.
pub fn shape_operator(jet: &SurfaceJet, n: &Vector5<f64>) -> Matrix2<f64> {
    let [fuu, fuv, fvv] = &jet.d2f;
    let h = Matrix2::new(fuu.dot(n), fuv.dot(n), fuv.dot(n), fvv.dot(n));
    let rinv = jet.r.try_inverse().unwrap_or_else(Matrix2::zeros);
    let se = rinv.transpose() * h * rinv;
    match jet.target {
        Target::Sphere | Target::Flat => se,
        Target::Ball => {
            let (es, grad) = ball_sigma_gradient(&jet.f);
            (se - Matrix2::identity() * grad.dot(n)) / es
        }
    }
}

pub fn fundamental_forms(jet: &SurfaceJet) -> Result<FundamentalForms> {
    let [fu, fv] = &jet.df;
    let metric_factor = match jet.target {
        Target::Ball => ball_sigma_gradient(&jet.f).0,
        Target::Sphere | Target::Flat => 1.0,
    };
    let m2 = metric_factor * metric_factor;
    let first = Matrix2::new(fu.dot(fu), fu.dot(fv), fv.dot(fu), fv.dot(fv)) * m2;
    let (e, f, g) = (first[(0, 0)], first[(0, 1)], first[(1, 1)]);
    if !(first.determinant() > 0.0) {
        return Err(Error::Immersion("degenerate first fundamental form".into()));
    }
    let conformality_residual = ((e - g).abs() + 2.0 * f.abs()) / (e + g);
    let shape = [shape_operator(jet, &jet.normal[0]), shape_operator(jet, &jet.normal[1])];
    Ok(FundamentalForms {
        first,
        conformality_residual,
        metric_factor,
        tangent: jet.tangent,
        normal: jet.normal,
        shape,
        curvature_scale: jet.curvature_scale / metric_factor,
        noise_floor: jet.noise_floor / metric_factor,
    })
}

/// The mean curvature vector `H = ½ Σ tr S(ν_k) ν_k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanCurvature {
    /// Components in R⁵ (Euclidean chart components on the ball).
    pub vector: Vector5<f64>,
    /// Length in the target metric.
    pub norm: f64,
}

pub fn mean_curvature(forms: &FundamentalForms) -> MeanCurvature {
    let nu = forms.unit_normals();
    let t = [forms.shape[0].trace() / 2.0, forms.shape[1].trace() / 2.0];
    MeanCurvature {
        vector: nu[0] * t[0] + nu[1] * t[1],
        norm: t[0].hypot(t[1]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{catalog, differentiate, DiffConfig};

    #[test]
    fn holomorphic_graph_shape_operators() {
        let s = catalog::flat_holomorphic_graph();
        let j = differentiate(&s, 0.0, 0.0, &DiffConfig::default()).unwrap();
        let ff = fundamental_forms(&j).unwrap();
        // n1 = ±e3, n2 = ±e4 with det[e1,e2,n1,n2] > 0
        let s3 = shape_operator(&j, &Vector5::z());
        let s4 = shape_operator(&j, &Vector5::w());
        assert!((s3 - Matrix2::new(2.0, 0.0, 0.0, -2.0)).amax() < 1e-6);
        assert!((s4 - Matrix2::new(0.0, 2.0, 2.0, 0.0)).amax() < 1e-6);
        assert!(mean_curvature(&ff).norm < 1e-6);
        assert!(ff.conformality_residual < 1e-12);
    }

    #[test]
    fn totally_geodesic_sphere_has_vanishing_second_form() {
        let s = catalog::totally_geodesic_s2();
        for (u, v) in [(0.0, 0.0), (0.7, -1.2), (1.5, 1.5)] {
            let j = differentiate(&s, u, v, &DiffConfig::default()).unwrap();
            let ff = fundamental_forms(&j).unwrap();
            assert!(ff.shape_norm() < 1e-6, "{}", ff.shape_norm());
            assert!(mean_curvature(&ff).norm < 1e-6);
            assert!(ff.conformality_residual < 1e-10);
        }
    }

    #[test]
    fn small_spheres_are_umbilic_with_cotangent_curvature() {
        for r in [std::f64::consts::FRAC_PI_4, 0.5] {
            let s = catalog::small_sphere(r);
            let j = differentiate(&s, 0.4, -0.3, &DiffConfig::default()).unwrap();
            let ff = fundamental_forms(&j).unwrap();
            let h = mean_curvature(&ff);
            assert!((h.norm - 1.0 / r.tan()).abs() < 1e-6, "{} vs {}", h.norm, 1.0 / r.tan());
            // S along the mean curvature direction is a multiple of the identity.
            let n = h.vector / h.vector.norm();
            let sh = shape_operator(&j, &n);
            assert!((sh - Matrix2::identity() * sh[(0, 0)]).amax() < 1e-6);
        }
    }

    #[test]
    fn ball_plane_through_origin_is_totally_geodesic() {
        let s = catalog::ball_plane(catalog::ball_plane_domain());
        let j = differentiate(&s, 0.3, 0.05, &DiffConfig::default()).unwrap();
        let ff = fundamental_forms(&j).unwrap();
        assert!(ff.shape_norm() < 1e-6);
        // a plane not through the origin is not totally geodesic in the ball
        let off = crate::surface::ParamSurface::in_r4(
            "offset",
            Target::Ball,
            crate::surface::Rect::square(0.3),
            |u, v| [u, v, 0.2, 0.0],
        );
        let j = differentiate(&off, 0.1, 0.0, &DiffConfig::default()).unwrap();
        let ff = fundamental_forms(&j).unwrap();
        assert!(mean_curvature(&ff).norm > 0.1);
    }
}
