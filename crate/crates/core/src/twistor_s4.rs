//! The twistor fibration `π: CP³ → S⁴`.
//!
//! `C⁴ = H²` through `(q1, q2) = (z1 + z2 j, z3 + z4 j)`, complex scalars
//! acting on the left. A point of CP³ is a complex line in H², and its
//! image in S⁴ ⊂ R⁵ = C ⊕ C ⊕ R depends only on the quaternionic line
//! containing it.
//!
//! The fibre over a point of S⁴ is the sphere of positive almost hermitian
//! structures on its tangent space. [`fiber_structure`] computes that
//! structure from the horizontal distribution `ker α`, and [`fiber_point`]
//! inverts it through the stereographic charts.

use std::fmt;

use nalgebra::{Matrix4, Matrix5, SMatrix, Vector4, Vector5};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::quaternion::{fundamental_form_pfaffian, hopf_phi, hopf_preimage, Quaternion, Spin};

pub type CVector4 = Vector4<Complex64>;
pub type CMatrix4 = Matrix4<Complex64>;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A point of CP³, stored as a unit-norm representative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "[f64; 8]", try_from = "[f64; 8]")]
pub struct ProjectivePoint {
    z: CVector4,
}

impl ProjectivePoint {
    pub fn new(z: CVector4) -> Result<Self> {
        let n = z.norm();
        if !n.is_finite() {
            return Err(domain("non-finite homogeneous coordinates"));
        }
        if n == 0.0 {
            return Err(domain("homogeneous coordinates are all zero"));
        }
        Ok(Self { z: z.unscale(n) })
    }

    pub fn from_coords(z: [Complex64; 4]) -> Result<Self> {
        Self::new(CVector4::from(z))
    }

    /// Real coordinates `[z1, z2, z3, z4]`, for tests and literals.
    pub fn from_real(z: [f64; 4]) -> Result<Self> {
        Self::new(CVector4::from(z.map(|x| Complex64::new(x, 0.0))))
    }

    /// The complex line through `(q1, q2) ∈ H²`.
    pub fn from_quaternions(q1: Quaternion, q2: Quaternion) -> Result<Self> {
        let (z1, z2) = q1.to_complex_pair();
        let (z3, z4) = q2.to_complex_pair();
        Self::new(CVector4::new(z1, z2, z3, z4))
    }

    pub fn quaternions(&self) -> (Quaternion, Quaternion) {
        (
            Quaternion::from_complex_pair(self.z[0], self.z[1]),
            Quaternion::from_complex_pair(self.z[2], self.z[3]),
        )
    }

    /// The stored unit representative (phase arbitrary).
    pub fn representative(&self) -> &CVector4 {
        &self.z
    }

    /// Unit representative whose first nonvanishing coordinate is real positive.
    pub fn canonical(&self) -> CVector4 {
        let lead = self
            .z
            .iter()
            .find(|c| c.norm() > 1e-14)
            .copied()
            .unwrap_or(ONE);
        self.z * (lead.conj() / lead.norm())
    }

    /// `min_θ |ẑ - e^{iθ} ŵ|` over unit representatives; in `[0, √2]`.
    pub fn chordal_distance(&self, other: &Self) -> f64 {
        chordal_distance(&self.z, &other.z)
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            if let Ok(p) = Self::new(random_c4(rng)) {
                return p;
            }
        }
    }
}

impl From<ProjectivePoint> for [f64; 8] {
    fn from(p: ProjectivePoint) -> Self {
        let c = p.canonical();
        [
            c[0].re, c[0].im, c[1].re, c[1].im, c[2].re, c[2].im, c[3].re, c[3].im,
        ]
    }
}

impl TryFrom<[f64; 8]> for ProjectivePoint {
    type Error = Error;
    fn try_from(a: [f64; 8]) -> Result<Self> {
        Self::new(CVector4::new(
            Complex64::new(a[0], a[1]),
            Complex64::new(a[2], a[3]),
            Complex64::new(a[4], a[5]),
            Complex64::new(a[6], a[7]),
        ))
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.canonical();
        write!(f, "[{} : {} : {} : {}]", c[0], c[1], c[2], c[3])
    }
}

pub fn random_c4<R: Rng + ?Sized>(rng: &mut R) -> CVector4 {
    CVector4::from_fn(|_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

/// Chordal distance between the complex lines through `z` and `w`.
///
/// Aligns phases with `arg <ẑ, ŵ>` and measures the difference directly,
/// which keeps full relative precision for nearby points.
pub fn chordal_distance(z: &CVector4, w: &CVector4) -> f64 {
    let zh = z.unscale(z.norm());
    let wh = w.unscale(w.norm());
    let c: Complex64 = wh.iter().zip(zh.iter()).map(|(a, b)| a.conj() * b).sum();
    let phase = if c.norm() > 0.0 { c / c.norm() } else { ONE };
    (zh - wh * phase).norm()
}

/// A point of the unit sphere S⁴ ⊂ R⁵.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "[f64; 5]", try_from = "[f64; 5]")]
pub struct SpherePoint {
    x: Vector5<f64>,
}

impl SpherePoint {
    pub const TOL: f64 = 1e-12;

    pub fn new(x: Vector5<f64>) -> Result<Self> {
        let r = (x.norm() - 1.0).abs();
        if !(r <= Self::TOL) {
            return Err(domain(format!("point is off the unit sphere by {r:e}")));
        }
        Ok(Self { x })
    }

    /// Rescales a nonzero vector onto the sphere.
    pub fn normalized(x: Vector5<f64>) -> Result<Self> {
        let n = x.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(domain("cannot normalize onto S⁴"));
        }
        Ok(Self { x: x / n })
    }

    pub fn north() -> Self {
        Self { x: Vector5::new(0.0, 0.0, 0.0, 0.0, 1.0) }
    }

    pub fn south() -> Self {
        Self { x: Vector5::new(0.0, 0.0, 0.0, 0.0, -1.0) }
    }

    pub fn coords(&self) -> &Vector5<f64> {
        &self.x
    }

    pub fn antipode(&self) -> Self {
        Self { x: -self.x }
    }

    /// Great-circle distance.
    pub fn distance(&self, other: &Self) -> f64 {
        2.0 * ((self.x - other.x).norm() / 2.0).min(1.0).asin()
    }
}

impl From<SpherePoint> for [f64; 5] {
    fn from(p: SpherePoint) -> Self {
        p.x.into()
    }
}

impl TryFrom<[f64; 5]> for SpherePoint {
    type Error = Error;
    fn try_from(a: [f64; 5]) -> Result<Self> {
        Self::new(Vector5::from(a))
    }
}

/// A point of R⁴ ∪ {∞}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ExtendedR4 {
    Finite(Vector4<f64>),
    Infinity,
}

/// The stereographic chart `ψ: R⁴ ∪ {∞} → S⁴` from the south pole,
/// `ψ(x) = (2x, 1 - |x|²) / (1 + |x|²)`, `ψ(∞) = (0,0,0,0,-1)`.
pub fn stereo_s4(x: &ExtendedR4) -> SpherePoint {
    match x {
        ExtendedR4::Infinity => SpherePoint::south(),
        ExtendedR4::Finite(x) => {
            let r2 = x.norm_squared();
            if !r2.is_finite() {
                return SpherePoint::south();
            }
            let d = 1.0 + r2;
            let y = Vector5::new(2.0 * x[0], 2.0 * x[1], 2.0 * x[2], 2.0 * x[3], 1.0 - r2) / d;
            // Renormalize away the last-ulp drift of large |x|.
            SpherePoint { x: y / y.norm() }
        }
    }
}

pub fn stereo_s4_inverse(y: &SpherePoint) -> ExtendedR4 {
    let x = y.x;
    let d = 1.0 + x[4];
    if d == 0.0 {
        return ExtendedR4::Infinity;
    }
    ExtendedR4::Finite(Vector4::new(x[0], x[1], x[2], x[3]) / d)
}

/// The Jacobian `dψ_x` as a 5×4 matrix.
pub fn stereo_s4_differential(x: &Vector4<f64>) -> SMatrix<f64, 5, 4> {
    let r2 = x.norm_squared();
    let d = 1.0 + r2;
    let mut m = SMatrix::<f64, 5, 4>::zeros();
    for j in 0..4 {
        for i in 0..4 {
            m[(i, j)] = -4.0 * x[i] * x[j] / (d * d);
        }
        m[(j, j)] += 2.0 / d;
        m[(4, j)] = -4.0 * x[j] / (d * d);
    }
    m
}

/// Conformal factor `2 / (1 + |x|²)` of `ψ`, so that `g_s = λ² |dx|²`.
pub fn stereo_s4_conformal_factor(x: &Vector4<f64>) -> f64 {
    2.0 / (1.0 + x.norm_squared())
}

/// A point of `C² ∪ {∞} ≅ HP¹`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum AffineC2Point {
    Finite { w1: Complex64, w2: Complex64 },
    Infinity,
}

impl AffineC2Point {
    pub fn to_quaternion(&self) -> Option<Quaternion> {
        match self {
            AffineC2Point::Finite { w1, w2 } => Some(Quaternion::from_complex_pair(*w1, *w2)),
            AffineC2Point::Infinity => None,
        }
    }

    pub fn to_extended(&self) -> ExtendedR4 {
        match self.to_quaternion() {
            Some(q) => ExtendedR4::Finite(q.to_vector()),
            None => ExtendedR4::Infinity,
        }
    }

    pub fn norm(&self) -> f64 {
        match self {
            AffineC2Point::Finite { w1, w2 } => (w1.norm_sqr() + w2.norm_sqr()).sqrt(),
            AffineC2Point::Infinity => f64::INFINITY,
        }
    }
}

/// `φ₂ = q1⁻¹ q2` in complex coordinates.
pub fn phi2(p: &ProjectivePoint) -> AffineC2Point {
    let z = p.z;
    let n1 = z[0].norm_sqr() + z[1].norm_sqr();
    if n1 == 0.0 {
        return AffineC2Point::Infinity;
    }
    AffineC2Point::Finite {
        w1: (z[0].conj() * z[2] + z[1] * z[3].conj()) / n1,
        w2: (z[0].conj() * z[3] - z[1] * z[2].conj()) / n1,
    }
}

/// `ρ(q1, q2) = (2 q̄1 q2, |q1|² - |q2|²) / (|q1|² + |q2|²)`.
pub fn rho(q1: Quaternion, q2: Quaternion) -> Result<SpherePoint> {
    let n = q1.norm_sq() + q2.norm_sq();
    if n == 0.0 {
        return Err(domain("rho is undefined at the origin of H²"));
    }
    let a = (q1.conj() * q2).scale(2.0);
    Ok(SpherePoint {
        x: Vector5::new(a.x1, a.x2, a.x3, a.x4, q1.norm_sq() - q2.norm_sq()) / n,
    })
}

fn projection_numerator(z: &CVector4) -> Vector5<f64> {
    let a = (z[0].conj() * z[2] + z[1] * z[3].conj()) * 2.0;
    let b = (z[0].conj() * z[3] - z[1] * z[2].conj()) * 2.0;
    let t = z[0].norm_sqr() + z[1].norm_sqr() - z[2].norm_sqr() - z[3].norm_sqr();
    Vector5::new(a.re, a.im, b.re, b.im, t)
}

/// `π` on a nonzero vector of C⁴.
pub fn project_vector(z: &CVector4) -> Vector5<f64> {
    projection_numerator(z) / z.norm_squared()
}

/// The twistor projection `CP³ → S⁴`.
pub fn twistor_project(p: &ProjectivePoint) -> SpherePoint {
    let y = project_vector(&p.z);
    SpherePoint { x: y / y.norm() }
}

/// `dπ_z(w)` for a nonzero `z ∈ C⁴` and a real tangent vector `w ∈ C⁴`.
pub fn projection_differential(z: &CVector4, w: &CVector4) -> Vector5<f64> {
    let n2 = z.norm_squared();
    // dN(z)[w] = N(z + w) - N(z) - N(w) for the quadratic numerator N.
    let dn = projection_numerator(&(z + w)) - projection_numerator(z) - projection_numerator(w);
    let dn2 = 2.0 * z.iter().zip(w.iter()).map(|(a, b)| (a.conj() * b).re).sum::<f64>();
    (dn * n2 - projection_numerator(z) * dn2) / (n2 * n2)
}

/// `ι[z1 : z2 : z3 : z4] = [-z̄2 : z̄1 : -z̄4 : z̄3]`, i.e. left multiplication
/// by `j` on H².
pub fn twistor_involution(p: &ProjectivePoint) -> ProjectivePoint {
    let z = p.z;
    ProjectivePoint {
        z: CVector4::new(-z[1].conj(), z[0].conj(), -z[3].conj(), z[2].conj()),
    }
}

/// The holomorphic contact form as a bilinear form,
/// `α(z, w) = z1 w2 - z2 w1 + z3 w4 - z4 w3`.
pub fn alpha_form(z: &CVector4, w: &CVector4) -> Complex64 {
    z[0] * w[1] - z[1] * w[0] + z[2] * w[3] - z[3] * w[2]
}

/// `α₀(z, w) = z2 w1 - z1 w2 + z4 w3 - z3 w4 = z J₀ wᵀ`, the negative of [`alpha_form`].
pub fn alpha0_form(z: &CVector4, w: &CVector4) -> Complex64 {
    z[1] * w[0] - z[0] * w[1] + z[3] * w[2] - z[2] * w[3]
}

/// Coefficient of `α ∧ dα` against `dz2 ∧ dz3 ∧ dz4` in the affine chart
/// `z1 = 1`, at the chart point `(z2, z3, z4)`.
pub fn contact_volume_coefficient(z2: Complex64, z3: Complex64, z4: Complex64) -> Complex64 {
    let z = CVector4::new(ONE, z2, z3, z4);
    let e = |k: usize| {
        let mut v = CVector4::zeros();
        v[k] = ONE;
        v
    };
    // α = Σ a_i dx_i with a_i(z) = α(z, e_i); dα_ij = α(e_i, e_j) - α(e_j, e_i).
    let a: Vec<Complex64> = (1..4).map(|i| alpha_form(&z, &e(i))).collect();
    let da = |i: usize, j: usize| alpha_form(&e(i), &e(j)) - alpha_form(&e(j), &e(i));
    a[0] * da(2, 3) - a[1] * da(1, 3) + a[2] * da(1, 2)
}

/// The block-diagonal `J₀` with blocks `((0, -1), (1, 0))`.
pub fn j0() -> CMatrix4 {
    let mut m = CMatrix4::zeros();
    m[(0, 1)] = -ONE;
    m[(1, 0)] = ONE;
    m[(2, 3)] = -ONE;
    m[(3, 2)] = ONE;
    m
}

/// A complex 4×4 matrix, acting on row vectors `z ↦ z a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpMatrix {
    pub a: CMatrix4,
}

impl SpMatrix {
    pub const TOL: f64 = 1e-10;

    pub fn new(a: CMatrix4) -> Self {
        Self { a }
    }

    pub fn identity() -> Self {
        Self { a: CMatrix4::identity() }
    }

    /// `(|a aᴴ - I|, |a J₀ aᵀ - J₀|)`, max-entry.
    pub fn membership_residuals(&self) -> (f64, f64) {
        let unitary = (self.a * self.a.adjoint() - CMatrix4::identity()).map(|c| c.norm()).max();
        let sympl = (self.a * j0() * self.a.transpose() - j0()).map(|c| c.norm()).max();
        (unitary, sympl)
    }

    pub fn is_member(&self) -> bool {
        let (u, s) = self.membership_residuals();
        u <= Self::TOL && s <= Self::TOL
    }

    /// `z ↦ z a` on row vectors.
    pub fn apply(&self, z: &CVector4) -> CVector4 {
        self.a.transpose() * z
    }

    pub fn act(&self, p: &ProjectivePoint) -> Result<ProjectivePoint> {
        if !self.is_member() {
            let (u, s) = self.membership_residuals();
            return Err(domain(format!(
                "matrix is not in U(4) ∩ Sp2(C) (unitary {u:e}, symplectic {s:e})"
            )));
        }
        ProjectivePoint::new(self.apply(&p.z))
    }

    /// Complexification of a 2×2 quaternionic matrix acting on the right of
    /// row vectors in H²; row `k` is the image of the `k`-th complex basis
    /// vector `(1,0), (j,0), (0,1), (0,j)`.
    pub fn from_quaternionic(b: [[Quaternion; 2]; 2]) -> Self {
        let basis = [
            [Quaternion::ONE, Quaternion::ZERO],
            [Quaternion::J, Quaternion::ZERO],
            [Quaternion::ZERO, Quaternion::ONE],
            [Quaternion::ZERO, Quaternion::J],
        ];
        let mut a = CMatrix4::zeros();
        for (k, e) in basis.iter().enumerate() {
            let r1 = e[0] * b[0][0] + e[1] * b[1][0];
            let r2 = e[0] * b[0][1] + e[1] * b[1][1];
            let (z1, z2) = r1.to_complex_pair();
            let (z3, z4) = r2.to_complex_pair();
            a[(k, 0)] = z1;
            a[(k, 1)] = z2;
            a[(k, 2)] = z3;
            a[(k, 3)] = z4;
        }
        Self { a }
    }

    /// A random element of `Sp(2) ≅ U(4) ∩ Sp₂(C)`: quaternionic Gram–Schmidt
    /// on two Gaussian rows of H², then complexification.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            if let Some(b) = quaternionic_unitary(rng) {
                return Self::from_quaternionic(b);
            }
        }
    }
}

/// `<p, q> = Σ p_i q̄_i` on H² (quaternion-valued).
fn hinner(p: &[Quaternion; 2], q: &[Quaternion; 2]) -> Quaternion {
    p[0] * q[0].conj() + p[1] * q[1].conj()
}

fn quaternionic_unitary<R: Rng + ?Sized>(rng: &mut R) -> Option<[[Quaternion; 2]; 2]> {
    let r1 = [Quaternion::random(rng), Quaternion::random(rng)];
    let r2 = [Quaternion::random(rng), Quaternion::random(rng)];
    let n1 = hinner(&r1, &r1).x1.sqrt();
    if n1 < 1e-6 {
        return None;
    }
    let b1 = [r1[0].scale(1.0 / n1), r1[1].scale(1.0 / n1)];
    let mut v = r2;
    for _ in 0..2 {
        let c = hinner(&v, &b1);
        v = [v[0] - c * b1[0], v[1] - c * b1[1]];
    }
    let n2 = hinner(&v, &v).x1.sqrt();
    if n2 < 1e-6 {
        return None;
    }
    Some([b1, [v[0].scale(1.0 / n2), v[1].scale(1.0 / n2)]])
}

/// A positively oriented orthonormal basis of `T_y S⁴ = y⊥`, where positive
/// means `det[t1, t2, t3, t4, y] > 0`.
pub fn tangent_frame(y: &Vector5<f64>) -> [Vector5<f64>; 4] {
    let p = Matrix5::identity() - y * y.transpose();
    let mut cols: Vec<(f64, Vector5<f64>)> = (0..5)
        .map(|k| {
            let c: Vector5<f64> = p.column(k).into();
            (c.norm(), c)
        })
        .collect();
    cols.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut frame: Vec<Vector5<f64>> = Vec::with_capacity(4);
    for (_, c) in cols {
        let mut v = c;
        for _ in 0..2 {
            for t in &frame {
                v -= t * t.dot(&v);
            }
            v -= y * y.dot(&v);
        }
        let n = v.norm();
        if n > 1e-6 {
            frame.push(v / n);
        }
        if frame.len() == 4 {
            break;
        }
    }
    let mut t = [frame[0], frame[1], frame[2], frame[3]];
    let det = Matrix5::from_columns(&[t[0], t[1], t[2], t[3], *y]).determinant();
    if det < 0.0 {
        t[3] = -t[3];
    }
    t
}

/// A linear almost hermitian structure on `T_y S⁴`, stored as the operator
/// on R⁵ that vanishes on `y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereStructure {
    pub base: SpherePoint,
    pub m: Matrix5<f64>,
}

impl SphereStructure {
    /// Matrix in a positive orthonormal tangent frame.
    pub fn in_frame(&self, t: &[Vector5<f64>; 4]) -> Matrix4<f64> {
        Matrix4::from_fn(|i, j| t[i].dot(&(self.m * t[j])))
    }

    /// `(|J² + P|, |JᵀJ - P|, |J y|)` with `P` the tangent projection.
    pub fn residuals(&self) -> (f64, f64, f64) {
        let y = self.base.x;
        let p = Matrix5::identity() - y * y.transpose();
        (
            (self.m * self.m + p).abs().max(),
            (self.m.transpose() * self.m - p).abs().max(),
            (self.m * y).norm(),
        )
    }

    /// Spin against the outward orientation of S⁴.
    pub fn spin(&self) -> Spin {
        let t = tangent_frame(&self.base.x);
        Spin::from_sign(fundamental_form_pfaffian(&self.in_frame(&t)))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.m - other.m).abs().max()
    }
}

/// The structure on `T_{π(z)} S⁴` represented by `z`: the unique `J` with
/// `dπ(i h) = J dπ(h)` for `h` in the horizontal space `ker α(z, ·) ∩ z⊥`.
pub fn fiber_structure(p: &ProjectivePoint) -> SphereStructure {
    let z = p.z;
    // α(z, w) = Σ a_i w_i, so the horizontal space is {ā, z}⊥, and ā ⊥ z
    // because α(z, z) = 0.
    let abar = CVector4::new(-z[1], z[0], -z[3], z[2]).conjugate();
    let n2 = z.norm_squared();
    let proj = CMatrix4::identity() - (z * z.adjoint() + abar * abar.adjoint()).unscale(n2);
    let mut cols: Vec<CVector4> = (0..4).map(|k| proj.column(k).into()).collect();
    cols.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    let h1 = cols[0].unscale(cols[0].norm());
    let h2 = cols
        .iter()
        .skip(1)
        .map(|c| c - h1 * h1.dotc(c))
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .expect("rank two projector");
    let h2 = h2.unscale(h2.norm());
    let i = Complex64::i();
    let ak = [
        projection_differential(&z, &h1),
        projection_differential(&z, &(h1 * i)),
        projection_differential(&z, &h2),
        projection_differential(&z, &(h2 * i)),
    ];
    let amat = SMatrix::<f64, 5, 4>::from_columns(&ak);
    let bmat = SMatrix::<f64, 5, 4>::from_columns(&[ak[1], -ak[0], ak[3], -ak[2]]);
    let gram = amat.transpose() * amat;
    let ginv = gram.try_inverse().expect("dπ is surjective on the horizontal space");
    let m = bmat * ginv * amat.transpose();
    SphereStructure { base: twistor_project(p), m }
}

/// The point of CP³ representing a structure on a tangent space of S⁴.
///
/// Positive structures at `y` land in the fibre over `y`. A negative
/// structure at `y` is a positive one at `-y` (the antipodal map reverses the
/// orientation of S⁴ and fixes the tangent space), so it lands over `-y`.
///
/// Over the chart `ψ` the point `[q1 : q1 x]` corresponds to left
/// multiplication by `Φ(q1)` in chart coordinates; near the south pole the
/// chart `x' ↦ ψ(1/x')` is used, where `[q2 x' : q2]` corresponds to `Φ(q2)`.
pub fn fiber_point(s: &SphereStructure) -> Result<ProjectivePoint> {
    let spin = s.spin();
    let b = match spin {
        Spin::Positive => s.base.x,
        Spin::Negative => -s.base.x,
    };
    let chart_structure = |d: &SMatrix<f64, 5, 4>, lambda: f64| -> Result<Quaternion> {
        let jc = d.transpose() * s.m * d / (lambda * lambda);
        let u = Quaternion::new(jc[(0, 0)], jc[(1, 0)], jc[(2, 0)], jc[(3, 0)]);
        let u = u.imaginary().normalize()?;
        Ok(u)
    };
    if b[4] >= 0.0 {
        let x = Vector4::new(b[0], b[1], b[2], b[3]) / (1.0 + b[4]);
        let d = stereo_s4_differential(&x);
        let u = chart_structure(&d, stereo_s4_conformal_factor(&x))?;
        let q1 = hopf_preimage(u)?;
        ProjectivePoint::from_quaternions(q1, q1 * Quaternion::from_vector(&x))
    } else {
        // x' = conj(b₁..₄) / (1 - b5), and ψ(1/x') = b.
        let xb = Vector4::new(b[0], -b[1], -b[2], -b[3]) / (1.0 - b[4]);
        let d = inverted_chart_differential(&xb);
        let u = chart_structure(&d, stereo_s4_conformal_factor(&xb))?;
        let q2 = hopf_preimage(u)?;
        ProjectivePoint::from_quaternions(q2 * Quaternion::from_vector(&xb), q2)
    }
}

/// Jacobian of `χ(x') = (2 x̄', |x'|² - 1) / (1 + |x'|²)`.
fn inverted_chart_differential(x: &Vector4<f64>) -> SMatrix<f64, 5, 4> {
    let mut d = stereo_s4_differential(x);
    // χ = diag(1, -1, -1, -1, -1) ∘ ψ.
    for j in 0..4 {
        for i in 1..5 {
            d[(i, j)] = -d[(i, j)];
        }
    }
    d
}

/// `Φ` of the first quaternion of a point; the chart structure attached to
/// `[q1 : q1 x]` over `ψ(x)`.
pub fn chart_quaternion(p: &ProjectivePoint) -> Result<Quaternion> {
    let (q1, _) = p.quaternions();
    hopf_phi(q1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const ZERO: Complex64 = Complex64::new(0.0, 0.0);

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn stereo_examples() {
        assert_eq!(stereo_s4(&ExtendedR4::Finite(Vector4::zeros())), SpherePoint::north());
        assert_eq!(stereo_s4(&ExtendedR4::Infinity), SpherePoint::south());
        assert_eq!(stereo_s4_inverse(&SpherePoint::south()), ExtendedR4::Infinity);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let x = Quaternion::random(&mut rng).to_vector();
            let y = stereo_s4(&ExtendedR4::Finite(x));
            assert!((y.coords().norm() - 1.0).abs() < 1e-15);
            match stereo_s4_inverse(&y) {
                ExtendedR4::Finite(x2) => assert!((x2 - x).norm() < 1e-12 * (1.0 + x.norm_squared())),
                ExtendedR4::Infinity => panic!(),
            }
        }
    }

    #[test]
    fn stereo_differential_matches_fd() {
        let x = Vector4::new(0.3, -0.2, 0.7, 1.1);
        let d = stereo_s4_differential(&x);
        let h = 1e-6;
        for j in 0..4 {
            let mut e = Vector4::zeros();
            e[j] = h;
            let fd = (stereo_s4(&ExtendedR4::Finite(x + e)).coords()
                - stereo_s4(&ExtendedR4::Finite(x - e)).coords())
                / (2.0 * h);
            assert!((fd - d.column(j)).norm() < 1e-8);
        }
        let at0 = stereo_s4_differential(&Vector4::zeros());
        assert_eq!(at0.column(0).norm(), 2.0);
    }

    #[test]
    fn projection_examples() {
        let n = twistor_project(&ProjectivePoint::from_real([1.0, 0.0, 0.0, 0.0]).unwrap());
        assert_eq!(n, SpherePoint::north());
        let s = twistor_project(&ProjectivePoint::from_real([0.0, 0.0, 1.0, 0.0]).unwrap());
        assert_eq!(s, SpherePoint::south());
        let zi = ProjectivePoint::from_coords([c(0.0, 1.0), ZERO, ZERO, ZERO]).unwrap();
        assert_eq!(twistor_project(&zi), SpherePoint::north());
        assert_eq!(phi2(&ProjectivePoint::from_real([0.0, 0.0, 1.0, 0.0]).unwrap()), AffineC2Point::Infinity);
    }

    #[test]
    fn phi2_is_quaternion_quotient() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let p = ProjectivePoint::random(&mut rng);
            let (q1, q2) = p.quaternions();
            let w = phi2(&p).to_quaternion().unwrap();
            assert!(w.distance(q1.inverse().unwrap() * q2) < 1e-12 * (1.0 + w.norm()));
        }
    }

    #[test]
    fn involution_examples() {
        let p = ProjectivePoint::from_real([1.0, 0.0, 0.0, 0.0]).unwrap();
        let q = ProjectivePoint::from_real([0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(twistor_involution(&p).chordal_distance(&q) < 1e-15);
        // ι is left multiplication by j.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = ProjectivePoint::random(&mut rng);
        let (q1, q2) = p.quaternions();
        let jp = ProjectivePoint::from_quaternions(Quaternion::J * q1, Quaternion::J * q2).unwrap();
        assert!(twistor_involution(&p).chordal_distance(&jp) < 1e-14);
    }

    #[test]
    fn alpha_examples() {
        let e = |k: usize| {
            let mut v = CVector4::zeros();
            v[k] = ONE;
            v
        };
        assert_eq!(alpha_form(&e(0), &e(1)), ONE);
        assert_eq!(alpha0_form(&e(0), &e(1)), -ONE);
        // ker α at [1:0:0:0] contains H₂ = {z1 = z2 = 0}.
        assert_eq!(alpha_form(&e(0), &e(2)), ZERO);
        assert_eq!(alpha_form(&e(0), &e(3)), ZERO);
        assert_eq!(contact_volume_coefficient(c(0.5, 1.0), c(-2.0, 0.1), c(3.0, 0.0)), c(2.0, 0.0));
    }

    #[test]
    fn quaternionic_identity_is_identity() {
        let b = [[Quaternion::ONE, Quaternion::ZERO], [Quaternion::ZERO, Quaternion::ONE]];
        assert_eq!(SpMatrix::from_quaternionic(b).a, CMatrix4::identity());
        assert!(SpMatrix::identity().is_member());
        let mut bad = CMatrix4::identity();
        bad[(0, 0)] = c(2.0, 0.0);
        let p = ProjectivePoint::from_real([1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(SpMatrix::new(bad).act(&p).is_err());
        // A diagonal unitary that breaks J₀.
        let mut u = CMatrix4::identity();
        u[(0, 0)] = c(0.0, 1.0);
        assert!(!SpMatrix::new(u).is_member());
    }

    #[test]
    fn tangent_frame_is_positive() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let y = *twistor_project(&ProjectivePoint::random(&mut rng)).coords();
            let t = tangent_frame(&y);
            let m = Matrix5::from_columns(&[t[0], t[1], t[2], t[3], y]);
            assert!((m.transpose() * m - Matrix5::identity()).abs().max() < 1e-13);
            assert!((m.determinant() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn fiber_structure_over_north_pole() {
        // [1 : 0 : 0 : 0] is the standard structure in the ψ chart.
        let p = ProjectivePoint::from_real([1.0, 0.0, 0.0, 0.0]).unwrap();
        let s = fiber_structure(&p);
        let d = stereo_s4_differential(&Vector4::zeros());
        let jc = d.transpose() * s.m * d / 4.0;
        assert!((jc - Quaternion::I.left_matrix()).abs().max() < 1e-14);
        assert_eq!(s.spin(), Spin::Positive);
    }

    #[test]
    fn fiber_point_inverts_fiber_structure() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for k in 0..500 {
            let mut z = random_c4(&mut rng);
            if k % 5 == 0 {
                // near the south pole
                z[0] *= 1e-3;
                z[1] *= 1e-3;
            }
            let p = ProjectivePoint::new(z).unwrap();
            let s = fiber_structure(&p);
            let (a, b, c) = s.residuals();
            assert!(a.max(b).max(c) < 1e-11, "{a:e} {b:e} {c:e}");
            assert_eq!(s.spin(), Spin::Positive);
            let back = fiber_point(&s).unwrap();
            assert!(back.chordal_distance(&p) < 1e-10, "{}", back.chordal_distance(&p));
        }
    }

    #[test]
    fn involution_negates_fiber_structure() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let p = ProjectivePoint::random(&mut rng);
            let s = fiber_structure(&p);
            let t = fiber_structure(&twistor_involution(&p));
            assert!((s.m + t.m).abs().max() < 1e-11);
        }
    }

    #[test]
    fn negative_structures_land_over_the_antipode() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let p = ProjectivePoint::random(&mut rng);
            let s = fiber_structure(&p);
            // The same operator viewed at -y is negative there.
            let neg = SphereStructure { base: s.base.antipode(), m: s.m };
            assert_eq!(neg.spin(), Spin::Negative);
            let back = fiber_point(&neg).unwrap();
            assert!(back.chordal_distance(&p) < 1e-10);
        }
    }

    #[test]
    fn chordal_distance_examples() {
        let p = ProjectivePoint::from_real([1.0, 0.0, 0.0, 0.0]).unwrap();
        let q = ProjectivePoint::from_real([0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!((p.chordal_distance(&q) - 2f64.sqrt()).abs() < 1e-15);
        let pi = ProjectivePoint::from_coords([c(0.0, 3.0), ZERO, ZERO, ZERO]).unwrap();
        assert_eq!(p.chordal_distance(&pi), 0.0);
        assert_eq!(pi.canonical(), p.canonical());
    }

    #[test]
    fn serde_round_trip() {
        let p = ProjectivePoint::from_coords([c(0.0, 2.0), c(1.0, 1.0), ZERO, c(-1.0, 0.5)]).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        let back: ProjectivePoint = serde_json::from_str(&s).unwrap();
        assert!(back.chordal_distance(&p) < 1e-15);
        let y = SpherePoint::north();
        assert_eq!(serde_json::to_string(&y).unwrap(), "[0.0,0.0,0.0,0.0,1.0]");
    }
}
