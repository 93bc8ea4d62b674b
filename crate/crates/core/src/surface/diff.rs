//! Finite-difference 2-jets of parametrized surfaces.

use nalgebra::{Matrix2, Matrix5, SMatrix, Vector2, Vector5};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Orientation, ParamSurface, Target};
use crate::error::{domain, Error, Result};

/// Acceptance thresholds for the per-point checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub conformality: f64,
    pub mean_curvature: f64,
    /// Indicatrix center distance, relative to the fitted radius.
    pub indicatrix_center: f64,
    pub circularity: f64,
    pub chordal: f64,
    pub alpha: f64,
    pub cauchy_riemann: f64,
    pub nabla_f: f64,
    /// `df ∘ I = F ∘ df` as a matrix identity.
    pub lift_equation: f64,
    /// Degenerate indicatrix below this multiple of the curvature scale.
    pub degeneracy: f64,
    /// Grid points whose singular-value ratio or relative speed falls below this are masked.
    pub branch_mask: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            conformality: 1e-6,
            mean_curvature: 1e-4,
            indicatrix_center: 1e-4,
            circularity: 1e-3,
            chordal: 1e-6,
            alpha: 1e-6,
            cauchy_riemann: 1e-4,
            nabla_f: 1e-4,
            lift_equation: 1e-8,
            degeneracy: 1e-7,
            branch_mask: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiffConfig {
    /// Base step as a fraction of the chart scale.
    pub step_scale: f64,
    /// Leading error order removed by the Richardson step.
    pub richardson_order: u32,
    /// Step, relative to the chart scale, for differentiating lifted fields.
    pub outer_step_scale: f64,
    /// Multiple of the round metric on the twistor fibres.
    pub fiber_scale: f64,
    /// Normal-circle sample count for indicatrices.
    pub indicatrix_samples: usize,
    pub tolerances: Tolerances,
}

impl Default for DiffConfig {
    fn default() -> Self {
        Self {
            step_scale: 1e-4,
            richardson_order: 2,
            outer_step_scale: 1e-3,
            fiber_scale: 1.0,
            indicatrix_samples: 64,
            tolerances: Tolerances::default(),
        }
    }
}

impl DiffConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step_scale > 0.0 && self.outer_step_scale > 0.0) {
            return Err(domain("finite-difference steps must be positive"));
        }
        if !(self.fiber_scale > 0.0) {
            return Err(domain("the fibre metric scale must be positive"));
        }
        if self.richardson_order == 0 {
            return Err(domain("Richardson order must be at least 1"));
        }
        if self.indicatrix_samples < 8 {
            return Err(domain("at least 8 indicatrix samples are required"));
        }
        Ok(())
    }

    pub fn step(&self, s: &ParamSurface) -> f64 {
        self.step_scale * s.domain().scale()
    }

    pub fn outer_step(&self, s: &ParamSurface) -> f64 {
        self.outer_step_scale * s.domain().scale()
    }

    pub fn with_step_scale(mut self, h: f64) -> Self {
        self.step_scale = h;
        self
    }
}

/// Values that finite differences can combine linearly.
pub trait FdValue: Clone {
    fn lin(a: &Self, ca: f64, b: &Self, cb: f64) -> Self;
}

impl<const R: usize, const C: usize> FdValue for SMatrix<f64, R, C> {
    fn lin(a: &Self, ca: f64, b: &Self, cb: f64) -> Self {
        a * ca + b * cb
    }
}

impl<const R: usize, const C: usize> FdValue for SMatrix<Complex64, R, C> {
    fn lin(a: &Self, ca: f64, b: &Self, cb: f64) -> Self {
        a * Complex64::from(ca) + b * Complex64::from(cb)
    }
}

fn richardson<T: FdValue>(coarse: &T, fine: &T, order: u32) -> T {
    let p = 2f64.powi(order as i32);
    T::lin(fine, p / (p - 1.0), coarse, -1.0 / (p - 1.0))
}

/// Central difference of `g` at offset 0 with one Richardson step.
pub fn richardson_derivative<T: FdValue>(g: impl Fn(f64) -> T, h: f64, order: u32) -> T {
    let d = |h: f64| T::lin(&g(h), 0.5 / h, &g(-h), -0.5 / h);
    richardson(&d(h), &d(h / 2.0), order)
}

/// Numerical 2-jet of a surface at a chart point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceJet {
    pub point: Vector2<f64>,
    pub target: Target,
    pub orientation: Orientation,
    pub f: Vector5<f64>,
    /// `f_u, f_v`, tangent to the target.
    pub df: [Vector5<f64>; 2],
    /// `f_uu, f_uv, f_vv`; on the sphere the radial component is removed.
    pub d2f: [Vector5<f64>; 3],
    /// Oriented Euclidean-orthonormal basis of the tangent plane.
    pub tangent: [Vector5<f64>; 2],
    /// `[f_u f_v] = [t1 t2] r`, `r` upper triangular.
    pub r: Matrix2<f64>,
    /// Euclidean-orthonormal normal frame inside the target, oriented so that
    /// `(t1, t2, n1, n2)` agrees with the target orientation.
    pub normal: [Vector5<f64>; 2],
    pub step: f64,
    /// Frobenius norm of `[f_u f_v]` times the chart scale, over `max(|f|∞, 1)`.
    /// Vanishes at branch points, where the singular ratio can stay near 1.
    pub relative_speed: f64,
    /// `max|f_ij| / |df|²` before projection; the scale of ambient bending.
    pub curvature_scale: f64,
    /// Roundoff level of second-fundamental-form entries at this step.
    pub noise_floor: f64,
}

impl SurfaceJet {
    /// Smallest over largest singular value of `[f_u f_v]`.
    pub fn singular_ratio(&self) -> f64 {
        singular_ratio(&self.df)
    }

    pub fn target_normal(&self) -> Vector5<f64> {
        self.target.normal(&self.f)
    }

    /// Pushes a chart vector forward: `w ↦ df(w)`.
    pub fn push(&self, w: &Vector2<f64>) -> Vector5<f64> {
        self.df[0] * w[0] + self.df[1] * w[1]
    }
}

fn singular_ratio(df: &[Vector5<f64>; 2]) -> f64 {
    let e = df[0].norm_squared();
    let f = df[0].dot(&df[1]);
    let g = df[1].norm_squared();
    let tr = e + g;
    let disc = ((e - g).powi(2) + 4.0 * f * f).sqrt();
    let big = 0.5 * (tr + disc);
    let small = (e * g - f * f).max(0.0) / big.max(f64::MIN_POSITIVE);
    if big == 0.0 {
        0.0
    } else {
        (small / big).sqrt()
    }
}

/// Central differences with one Richardson step at `(u, v)`.
pub fn differentiate(s: &ParamSurface, u: f64, v: f64, cfg: &DiffConfig) -> Result<SurfaceJet> {
    let h = cfg.step(s);
    if !s.domain().contains_with_margin(u, v, 2.0 * h) {
        return Err(domain(format!(
            "({u}, {v}) is closer than 2h = {:.2e} to the boundary of {:?}",
            2.0 * h,
            s.domain()
        )));
    }
    let f = s.eval(u, v);
    if !s.target().contains(&f) {
        return Err(domain(format!("f({u}, {v}) lies outside the {} target", s.target())));
    }
    let k = cfg.richardson_order;
    let mut fmax = f.amax();
    let mut ev = |a: f64, b: f64| {
        let y = s.eval(u + a, v + b);
        fmax = fmax.max(y.amax());
        y
    };
    let level = |ev: &mut dyn FnMut(f64, f64) -> Vector5<f64>, h: f64| {
        let (up, um) = (ev(h, 0.0), ev(-h, 0.0));
        let (vp, vm) = (ev(0.0, h), ev(0.0, -h));
        let (pp, pm, mp, mm) = (ev(h, h), ev(h, -h), ev(-h, h), ev(-h, -h));
        let fu = (up - um) / (2.0 * h);
        let fv = (vp - vm) / (2.0 * h);
        let fuu = (up - f * 2.0 + um) / (h * h);
        let fvv = (vp - f * 2.0 + vm) / (h * h);
        let fuv = (pp - pm - mp + mm) / (4.0 * h * h);
        [fu, fv, fuu, fuv, fvv]
    };
    let coarse = level(&mut ev, h);
    let fine = level(&mut ev, h / 2.0);
    let d: Vec<Vector5<f64>> = coarse.iter().zip(fine.iter()).map(|(c, fi)| richardson(c, fi, k)).collect();

    let nu = s.target().normal(&f);
    let tangential = |x: &Vector5<f64>| match s.target() {
        Target::Sphere => x - nu * nu.dot(x),
        Target::Ball | Target::Flat => *x,
    };
    let df = [tangential(&d[0]), tangential(&d[1])];
    let ratio = singular_ratio(&df);
    if !(ratio > 1e-8) {
        return Err(Error::Immersion(format!(
            "Jacobian singular-value ratio {ratio:.2e} at ({u}, {v})"
        )));
    }
    let raw_max = d[2].amax().max(d[3].amax()).max(d[4].amax());
    let d2f = [tangential(&d[2]), tangential(&d[3]), tangential(&d[4])];

    let n1 = df[0].norm();
    let t1 = df[0] / n1;
    let a = t1.dot(&df[1]);
    let w = df[1] - t1 * a;
    let n2 = w.norm();
    let t2 = w / n2;
    let r = Matrix2::new(n1, a, 0.0, n2);
    let normal = normal_frame(&t1, &t2, &nu, s.orientation());

    let dfmin2 = df[0].norm_squared().min(df[1].norm_squared());
    // One Richardson step of a second difference amplifies roundoff by ~23.
    let noise_floor = 250.0 * f64::EPSILON * fmax.max(1.0) / (h * h * dfmin2);

    Ok(SurfaceJet {
        point: Vector2::new(u, v),
        target: s.target(),
        orientation: s.orientation(),
        f,
        df,
        d2f,
        tangent: [t1, t2],
        r,
        normal,
        step: h,
        relative_speed: (df[0].norm_squared() + df[1].norm_squared()).sqrt() * h / cfg.step_scale / fmax.max(1.0),
        curvature_scale: raw_max / dfmin2,
        noise_floor,
    })
}

/// Orthonormal `(n1, n2)` completing `(t1, t2, ·, ·, ν)` to a positive basis
/// of R⁵; `n2` is negated for a reversed target.
pub(crate) fn normal_frame(
    t1: &Vector5<f64>,
    t2: &Vector5<f64>,
    nu: &Vector5<f64>,
    orientation: Orientation,
) -> [Vector5<f64>; 2] {
    let fixed = [*t1, *t2, *nu];
    let p = Matrix5::identity() - fixed.iter().map(|x| x * x.transpose()).sum::<Matrix5<f64>>();
    let mut cols: Vec<Vector5<f64>> = (0..5).map(|k| p.column(k).into()).collect();
    cols.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    let mut out: Vec<Vector5<f64>> = Vec::with_capacity(2);
    for c in cols {
        let mut x = c;
        for _ in 0..2 {
            for b in fixed.iter().chain(out.iter()) {
                x -= b * b.dot(&x);
            }
        }
        let n = x.norm();
        if n > 1e-6 {
            out.push(x / n);
        }
        if out.len() == 2 {
            break;
        }
    }
    let (n1, mut n2) = (out[0], out[1]);
    let det = Matrix5::from_columns(&[*t1, *t2, n1, n2, *nu]).determinant();
    if det < 0.0 {
        n2 = -n2;
    }
    [n1, n2 * orientation.sign()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{catalog, Rect};

    #[test]
    fn affine_flat_map() {
        let s = ParamSurface::in_r4("plane", Target::Flat, Rect::square(1.0), |u, v| [u, v, 0.0, 0.0]);
        let j = differentiate(&s, 0.1, -0.2, &DiffConfig::default()).unwrap();
        assert!((j.df[0] - Vector5::x()).norm() < 1e-12);
        assert!((j.df[1] - Vector5::y()).norm() < 1e-12);
        for d in j.d2f {
            assert!(d.norm() < 1e-6);
        }
        let m = Matrix5::from_columns(&[j.tangent[0], j.tangent[1], j.normal[0], j.normal[1], j.target_normal()]);
        assert!((m.determinant() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn equatorial_sphere_at_origin_has_conformal_factor_two() {
        let s = catalog::totally_geodesic_s2();
        let j = differentiate(&s, 0.0, 0.0, &DiffConfig::default()).unwrap();
        assert!((j.df[0].norm() - 2.0).abs() < 1e-10);
        assert!((j.df[1].norm() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn halving_the_step_divides_the_error() {
        // f(u, v) = (sin u, e^v, u v², 0); exact f_u = cos u, f_vv = 2u.
        let s = ParamSurface::in_r4("analytic", Target::Flat, Rect::square(1.0), |u, v| {
            [u.sin(), v.exp(), u * v * v, 0.0]
        });
        let (u, v) = (0.3, 0.2);
        let central = |h: f64| ((s.eval(u + h, v) - s.eval(u - h, v))[0] / (2.0 * h) - u.cos()).abs();
        let ratio = central(1e-2) / central(5e-3);
        assert!((ratio - 4.0).abs() < 0.01, "{ratio}");
        let err = |scale: f64| {
            let j = differentiate(&s, u, v, &DiffConfig::default().with_step_scale(scale)).unwrap();
            (j.df[0][0] - u.cos()).abs()
        };
        // one Richardson step removes the h² term
        let ratio = err(2e-2) / err(1e-2);
        assert!((ratio - 16.0).abs() < 0.5, "{ratio}");
        let j = differentiate(&s, u, v, &DiffConfig::default()).unwrap();
        assert!((j.df[0][0] - u.cos()).abs() < 1e-11);
        assert!((j.d2f[2][2] - 2.0 * u).abs() < 1e-6);
    }

    #[test]
    fn margin_and_rank_errors() {
        let s = catalog::totally_geodesic_s2();
        assert!(matches!(
            differentiate(&s, 1.9999, 0.0, &DiffConfig::default()),
            Err(Error::Domain(_))
        ));
        let degenerate = ParamSurface::in_r4("line", Target::Flat, Rect::square(1.0), |u, v| [u + v, u + v, 0.0, 0.0]);
        assert!(matches!(
            differentiate(&degenerate, 0.0, 0.0, &DiffConfig::default()),
            Err(Error::Immersion(_))
        ));
    }

    #[test]
    fn reversed_orientation_flips_second_normal() {
        let s = catalog::totally_geodesic_s2();
        let cfg = DiffConfig::default();
        let a = differentiate(&s, 0.3, 0.4, &cfg).unwrap();
        let b = differentiate(&s.clone().with_orientation(Orientation::Reversed), 0.3, 0.4, &cfg).unwrap();
        assert_eq!(a.normal[0], b.normal[0]);
        assert_eq!(a.normal[1], -b.normal[1]);
    }
}
