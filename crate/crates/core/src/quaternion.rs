//! Quaternions and the linear almost hermitian structures on R⁴.
//!
//! R⁴ is identified with the quaternions through the positively oriented
//! basis `1, i, j, k`; a quaternion `z1 + z2·j` with complex `z1, z2`
//! corresponds to the coordinates `(Re z1, Im z1, Re z2, Im z2)`.
//!
//! An almost hermitian structure is an orthogonal `J` with `J² = -I`. Its
//! spin is the sign of `ω ∧ ω` against the standard volume form, where
//! `ω(x, y) = <Jx, y>`. Structures of positive spin are exactly the left
//! multiplications by unit imaginary quaternions, those of negative spin
//! the right multiplications.
//!
//! Matrices act on column vectors. Bivectors use the lexicographic basis
//! `e1∧e2, e1∧e3, e1∧e4, e2∧e3, e2∧e4, e3∧e4`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Residual bound for identities that are pure algebra in double precision.
pub const ALGEBRA_TOL: f64 = 1e-12;
/// Residual bound for inputs that are expected to be normalized by the caller.
pub const NORMALIZED_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quaternion {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub x4: f64,
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(x1: f64, x2: f64, x3: f64, x4: f64) -> Self {
        Self { x1, x2, x3, x4 }
    }

    pub fn from_vector(v: &Vector4<f64>) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }

    pub fn to_vector(self) -> Vector4<f64> {
        Vector4::new(self.x1, self.x2, self.x3, self.x4)
    }

    /// The quaternion `z1 + z2·j`.
    pub fn from_complex_pair(z1: Complex64, z2: Complex64) -> Self {
        Self::new(z1.re, z1.im, z2.re, z2.im)
    }

    /// Inverse of [`Quaternion::from_complex_pair`].
    pub fn to_complex_pair(self) -> (Complex64, Complex64) {
        (
            Complex64::new(self.x1, self.x2),
            Complex64::new(self.x3, self.x4),
        )
    }

    /// `e^{i t} = cos t + i sin t`.
    pub fn exp_i(t: f64) -> Self {
        Self::new(t.cos(), t.sin(), 0.0, 0.0)
    }

    pub fn conj(self) -> Self {
        Self::new(self.x1, -self.x2, -self.x3, -self.x4)
    }

    pub fn norm_sq(self) -> f64 {
        self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3 + self.x4 * self.x4
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.x1 * s, self.x2 * s, self.x3 * s, self.x4 * s)
    }

    /// The imaginary part; lies in the 3-space of purely imaginary quaternions.
    pub fn imaginary(self) -> Self {
        Self::new(0.0, self.x2, self.x3, self.x4)
    }

    pub fn is_zero(self) -> bool {
        self.norm_sq() == 0.0
    }

    pub fn is_unit(self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    pub fn is_imaginary_unit(self, tol: f64) -> bool {
        self.x1.abs() <= tol && self.is_unit(tol)
    }

    pub fn inverse(self) -> Result<Self> {
        let n2 = self.norm_sq();
        if n2 == 0.0 {
            return Err(domain("the zero quaternion has no inverse"));
        }
        Ok(self.conj().scale(1.0 / n2))
    }

    pub fn normalize(self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(domain("cannot normalize the zero quaternion"));
        }
        Ok(self.scale(1.0 / n))
    }

    /// Matrix of `x ↦ self · x` on R⁴.
    pub fn left_matrix(self) -> Matrix4<f64> {
        let Self { x1: a, x2: b, x3: c, x4: d } = self;
        Matrix4::new(
            a, -b, -c, -d, //
            b, a, -d, c, //
            c, d, a, -b, //
            d, -c, b, a,
        )
    }

    /// Matrix of `x ↦ x · self` on R⁴.
    pub fn right_matrix(self) -> Matrix4<f64> {
        let Self { x1: a, x2: b, x3: c, x4: d } = self;
        Matrix4::new(
            a, -b, -c, -d, //
            b, a, d, -c, //
            c, -d, a, b, //
            d, c, -b, a,
        )
    }

    pub fn distance(self, other: Self) -> f64 {
        (self - other).norm()
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::new(
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        )
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3, self.x4 + o.x4)
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3, self.x4 - o.x4)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

/// Hamilton product with `ij = -ji = k`, `jk = -kj = i`, `ki = -ik = j`.
impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, q: Self) -> Self {
        let p = self;
        Self::new(
            p.x1 * q.x1 - p.x2 * q.x2 - p.x3 * q.x3 - p.x4 * q.x4,
            p.x1 * q.x2 + p.x2 * q.x1 + p.x3 * q.x4 - p.x4 * q.x3,
            p.x1 * q.x3 - p.x2 * q.x4 + p.x3 * q.x1 + p.x4 * q.x2,
            p.x1 * q.x4 + p.x2 * q.x3 - p.x3 * q.x2 + p.x4 * q.x1,
        )
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i + {}j + {}k", self.x1, self.x2, self.x3, self.x4)
    }
}

/// The Hopf map `q ↦ q⁻¹ i q` from nonzero quaternions onto the unit
/// imaginary quaternions. Its fibres are the punctured complex lines
/// `{λ q : λ ∈ ℂ*}` (complex scalars acting on the left).
pub fn hopf_phi(q: Quaternion) -> Result<Quaternion> {
    let inv = q.inverse()?;
    let u = inv * Quaternion::I * q;
    // The real part vanishes analytically.
    Ok(u.imaginary())
}

/// A unit quaternion `q` with `hopf_phi(q) = u` for a unit imaginary `u`.
///
/// Uses `q = 1 - i·u`, which satisfies `q u q⁻¹ = i`, and switches to
/// `q = j(1 + i·u)` near `u = -i` where the first choice degenerates.
pub fn hopf_preimage(u: Quaternion) -> Result<Quaternion> {
    if !u.is_imaginary_unit(NORMALIZED_TOL) {
        return Err(domain(format!("{u} is not a unit imaginary quaternion")));
    }
    let a = Quaternion::ONE - Quaternion::I * u;
    let b = Quaternion::J * (Quaternion::ONE + Quaternion::I * u);
    if a.norm_sq() >= b.norm_sq() {
        a.normalize()
    } else {
        b.normalize()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spin {
    Positive,
    Negative,
}

impl Spin {
    pub fn from_sign(s: f64) -> Self {
        if s >= 0.0 {
            Spin::Positive
        } else {
            Spin::Negative
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Spin::Positive => 1.0,
            Spin::Negative => -1.0,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Spin::Positive => 1,
            Spin::Negative => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Spin::Positive => Spin::Negative,
            Spin::Negative => Spin::Positive,
        }
    }
}

impl Neg for Spin {
    type Output = Self;
    fn neg(self) -> Self {
        self.flip()
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Spin::Positive => "+",
            Spin::Negative => "-",
        })
    }
}

/// Pfaffian of the fundamental form `ω_ij = <J e_i, e_j>`; `ω ∧ ω` equals
/// twice this value times the volume form.
pub fn fundamental_form_pfaffian(m: &Matrix4<f64>) -> f64 {
    let w = |i: usize, j: usize| m[(j, i)];
    w(0, 1) * w(2, 3) - w(0, 2) * w(1, 3) + w(0, 3) * w(1, 2)
}

/// An almost hermitian structure on R⁴ together with its computed spin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HermitianStructure {
    m: Matrix4<f64>,
    spin: Spin,
}

impl HermitianStructure {
    /// Validates `m² = -I` and `mᵀm = I` to [`ALGEBRA_TOL`] and computes the spin.
    pub fn new(m: Matrix4<f64>) -> Result<Self> {
        Self::with_tolerance(m, ALGEBRA_TOL)
    }

    pub fn with_tolerance(m: Matrix4<f64>, tol: f64) -> Result<Self> {
        let id = Matrix4::identity();
        let square = (m * m + id).abs().max();
        let ortho = (m.transpose() * m - id).abs().max();
        if square > tol || ortho > tol {
            return Err(domain(format!(
                "not an almost hermitian structure (|J²+I| = {square:e}, |JᵀJ-I| = {ortho:e})"
            )));
        }
        let pf = fundamental_form_pfaffian(&m);
        Ok(Self {
            m,
            spin: Spin::from_sign(pf),
        })
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.m
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn apply(&self, x: &Vector4<f64>) -> Vector4<f64> {
        self.m * x
    }

    /// Max-entry residuals of `J² + I` and `JᵀJ - I`.
    pub fn residuals(&self) -> (f64, f64) {
        let id = Matrix4::identity();
        (
            (self.m * self.m + id).abs().max(),
            (self.m.transpose() * self.m - id).abs().max(),
        )
    }

    /// The unit bivector in Λ²₊ or Λ²₋ (according to spin) mapped to this
    /// structure by [`structure_from_lambda2`].
    pub fn to_bivector(&self) -> Bivector {
        let mut c = [0.0; 6];
        for (k, (i, j)) in BIVECTOR_INDICES.iter().enumerate() {
            // e_i∧e_j contributes +c to m[j][i] and -c to m[i][j].
            c[k] = 0.5 * (self.m[(*j, *i)] - self.m[(*i, *j)]) / std::f64::consts::SQRT_2;
        }
        Bivector { c }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.m - other.m).abs().max()
    }
}

/// The structure `J_q`: left multiplication by `hopf_phi(q)`.
pub fn structure_from_quaternion(q: Quaternion) -> Result<HermitianStructure> {
    let u = hopf_phi(q)?;
    let m = u.left_matrix();
    let pf = fundamental_form_pfaffian(&m);
    Ok(HermitianStructure {
        m,
        spin: Spin::from_sign(pf),
    })
}

/// A positively oriented orthonormal basis of R⁴.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frame4 {
    e: [Vector4<f64>; 4],
}

impl Frame4 {
    pub fn new(e: [Vector4<f64>; 4]) -> Result<Self> {
        let m = Matrix4::from_columns(&e);
        let gram = (m.transpose() * m - Matrix4::identity()).abs().max();
        if gram > ALGEBRA_TOL {
            return Err(domain(format!("frame is not orthonormal (|G-I| = {gram:e})")));
        }
        if m.determinant() <= 0.0 {
            return Err(domain("frame is orientation reversing"));
        }
        Ok(Self { e })
    }

    pub fn standard() -> Self {
        Self {
            e: [Vector4::x(), Vector4::y(), Vector4::z(), Vector4::w()],
        }
    }

    /// Gram orthonormalization of a Gaussian matrix, reflecting the last
    /// column when the determinant is negative.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let g = Matrix4::from_fn(|_, _| rng.sample::<f64, _>(StandardNormal));
            if let Some(q) = gram_orthonormalize(&g) {
                let mut e: [Vector4<f64>; 4] = [q.column(0).into(), q.column(1).into(), q.column(2).into(), q.column(3).into()];
                if q.determinant() < 0.0 {
                    e[3] = -e[3];
                }
                return Self { e };
            }
        }
    }

    pub fn vectors(&self) -> &[Vector4<f64>; 4] {
        &self.e
    }

    pub fn matrix(&self) -> Matrix4<f64> {
        Matrix4::from_columns(&self.e)
    }
}

fn gram_orthonormalize(g: &Matrix4<f64>) -> Option<Matrix4<f64>> {
    let mut cols: Vec<Vector4<f64>> = Vec::with_capacity(4);
    for k in 0..4 {
        let mut v: Vector4<f64> = g.column(k).into();
        // Two passes keep the result orthonormal to ~1e-16.
        for _ in 0..2 {
            for c in &cols {
                v -= c * c.dot(&v);
            }
        }
        let n = v.norm();
        if n < 1e-8 {
            return None;
        }
        cols.push(v / n);
    }
    Some(Matrix4::from_columns(&cols))
}

/// `J±_e`: `e1 ↦ e2`, `e3 ↦ ±e4`, extended by `J² = -I`.
pub fn structure_from_frame(frame: &Frame4, spin: Spin) -> HermitianStructure {
    let [e1, e2, e3, e4] = frame.e;
    let s = spin.sign();
    let m = e2 * e1.transpose() - e1 * e2.transpose() + (e4 * e3.transpose() - e3 * e4.transpose()) * s;
    HermitianStructure { m, spin }
}

pub(crate) const BIVECTOR_INDICES: [(usize, usize); 6] =
    [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// A 2-vector on R⁴ in the lexicographic basis `e_i∧e_j`, `i < j`, which is
/// orthonormal for the inner product used here.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Bivector {
    pub c: [f64; 6],
}

impl Bivector {
    pub const fn new(c: [f64; 6]) -> Self {
        Self { c }
    }

    /// The basis element `e_i∧e_j` (zero-based indices, `i != j`).
    pub fn basis(i: usize, j: usize) -> Self {
        let mut b = Self::default();
        let (a, s) = if i < j { ((i, j), 1.0) } else { ((j, i), -1.0) };
        let k = BIVECTOR_INDICES.iter().position(|p| *p == a).expect("i != j in 0..4");
        b.c[k] = s;
        b
    }

    pub fn wedge(a: &Vector4<f64>, b: &Vector4<f64>) -> Self {
        let mut c = [0.0; 6];
        for (k, (i, j)) in BIVECTOR_INDICES.iter().enumerate() {
            c[k] = a[*i] * b[*j] - a[*j] * b[*i];
        }
        Self { c }
    }

    /// Hodge star, defined by `α ∧ *β = <α, β> Ω`.
    pub fn hodge_star(&self) -> Self {
        let [c12, c13, c14, c23, c24, c34] = self.c;
        Self::new([c34, -c24, c23, c14, -c13, c12])
    }

    pub fn dot(&self, o: &Self) -> f64 {
        self.c.iter().zip(o.c.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.c.map(|x| x * s))
    }

    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        self.c
            .iter()
            .zip(o.c.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// The endomorphism of the inclusion Λ² ⊂ R⁴ ⊗ R⁴ ≅ End(R⁴):
    /// `e_i∧e_j ↦ e_i* ⊗ e_j - e_j* ⊗ e_i`.
    pub fn to_endomorphism(&self) -> Matrix4<f64> {
        let mut m = Matrix4::zeros();
        for (k, (i, j)) in BIVECTOR_INDICES.iter().enumerate() {
            m[(*j, *i)] += self.c[k];
            m[(*i, *j)] -= self.c[k];
        }
        m
    }
}

impl Add for Bivector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut c = self.c;
        for (x, y) in c.iter_mut().zip(o.c) {
            *x += y;
        }
        Self { c }
    }
}

impl Sub for Bivector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + o.scale(-1.0)
    }
}

/// Splits `b` into its self-dual and anti-self-dual parts.
pub fn selfdual_split(b: &Bivector) -> (Bivector, Bivector) {
    let star = b.hodge_star();
    ((*b + star).scale(0.5), (*b - star).scale(0.5))
}

/// The oriented orthonormal basis of Λ²₊ (`spin = +`) or Λ²₋, normalized
/// to unit length: `(e12 ± e34)/√2, (e13 ± e42)/√2, (e14 ± e23)/√2`.
pub fn lambda2_basis(spin: Spin) -> [Bivector; 3] {
    let s = spin.sign();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    [
        Bivector::new([r, 0.0, 0.0, 0.0, 0.0, s * r]),
        Bivector::new([0.0, r, 0.0, 0.0, -s * r, 0.0]),
        Bivector::new([0.0, 0.0, r, s * r, 0.0, 0.0]),
    ]
}

/// Sends a unit bivector of Λ²_spin to an almost hermitian structure of that
/// spin. Unit length is Euclidean in the `e_i∧e_j` basis, so the endomorphism
/// is rescaled by √2; `(e12 + e34)/√2` goes to the structure `J⁺_e`.
pub fn structure_from_lambda2(b: &Bivector, spin: Spin) -> Result<HermitianStructure> {
    let norm = b.norm();
    if (norm - 1.0).abs() > NORMALIZED_TOL {
        return Err(domain(format!("bivector has norm {norm}, expected 1")));
    }
    let (plus, minus) = selfdual_split(b);
    let off = match spin {
        Spin::Positive => minus.norm(),
        Spin::Negative => plus.norm(),
    };
    if off > NORMALIZED_TOL {
        return Err(domain(format!(
            "bivector is not in the {spin} eigenspace of the Hodge star (off-component {off:e})"
        )));
    }
    let m = b.to_endomorphism() * std::f64::consts::SQRT_2;
    HermitianStructure::with_tolerance(m, NORMALIZED_TOL * 10.0).map(|h| HermitianStructure { m: h.m, spin })
}

/// An oriented 2-plane in R⁴, given by an ordered orthonormal pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrientedPlane {
    u: Vector4<f64>,
    v: Vector4<f64>,
}

impl OrientedPlane {
    pub fn new(u: Vector4<f64>, v: Vector4<f64>) -> Result<Self> {
        let res = (u.norm() - 1.0)
            .abs()
            .max((v.norm() - 1.0).abs())
            .max(u.dot(&v).abs());
        if res > ALGEBRA_TOL {
            return Err(domain(format!("plane basis is not orthonormal (residual {res:e})")));
        }
        Ok(Self { u, v })
    }

    /// Gram-Schmidt on an arbitrary oriented spanning pair.
    pub fn from_span(a: &Vector4<f64>, b: &Vector4<f64>) -> Result<Self> {
        let na = a.norm();
        if na == 0.0 {
            return Err(domain("degenerate plane: zero first vector"));
        }
        let u = a / na;
        let w = b - u * u.dot(b);
        let nw = w.norm();
        if nw <= 1e-12 * b.norm().max(f64::MIN_POSITIVE) {
            return Err(domain("degenerate plane: spanning vectors are parallel"));
        }
        Ok(Self { u, v: w / nw })
    }

    pub fn u(&self) -> &Vector4<f64> {
        &self.u
    }

    pub fn v(&self) -> &Vector4<f64> {
        &self.v
    }

    /// A positively oriented orthonormal frame `(u, v, e3, e4)`; `(e3, e4)`
    /// is the cooriented orthogonal complement.
    pub fn completed_frame(&self) -> Frame4 {
        let p = Matrix4::identity() - self.u * self.u.transpose() - self.v * self.v.transpose();
        let mut best: Vec<(f64, Vector4<f64>)> = (0..4)
            .map(|k| {
                let c: Vector4<f64> = p.column(k).into();
                (c.norm(), c)
            })
            .collect();
        best.sort_by(|a, b| b.0.total_cmp(&a.0));
        let e3 = best[0].1 / best[0].0;
        let mut w = best[1].1 - e3 * e3.dot(&best[1].1);
        if w.norm() < 1e-6 {
            w = best[2].1 - e3 * e3.dot(&best[2].1);
        }
        let mut e4 = w / w.norm();
        let det = Matrix4::from_columns(&[self.u, self.v, e3, e4]).determinant();
        if det < 0.0 {
            e4 = -e4;
        }
        Frame4 {
            e: [self.u, self.v, e3, e4],
        }
    }
}

/// The pair `(J⁺_Σ, J⁻_Σ)` rotating by `+π/2` on the oriented plane Σ and by
/// `±π/2` on its cooriented orthogonal complement.
pub fn plane_to_structures(p: &OrientedPlane) -> (HermitianStructure, HermitianStructure) {
    let frame = p.completed_frame();
    (
        structure_from_frame(&frame, Spin::Positive),
        structure_from_frame(&frame, Spin::Negative),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: Quaternion, b: Quaternion) -> bool {
        a.distance(b) < 1e-14
    }

    #[test]
    fn unit_table() {
        use Quaternion as Q;
        assert_eq!(Q::I * Q::J, Q::K);
        assert_eq!(Q::J * Q::I, -Q::K);
        assert_eq!(Q::J * Q::K, Q::I);
        assert_eq!(Q::K * Q::I, Q::J);
        assert_eq!(Q::I * Q::I, -Q::ONE);
        let q = Q::new(0.3, -1.0, 2.0, 0.5);
        assert_eq!(Q::ONE * q, q);
        // (1+i)(1+j) = 1 + j + i + ij
        assert_eq!((Q::ONE + Q::I) * (Q::ONE + Q::J), Q::new(1.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn multiplication_matrices_agree_with_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let p = Quaternion::random(&mut rng);
            let q = Quaternion::random(&mut rng);
            let pq = (p * q).to_vector();
            assert!((p.left_matrix() * q.to_vector() - pq).norm() < 1e-13);
            assert!((q.right_matrix() * p.to_vector() - pq).norm() < 1e-13);
        }
    }

    #[test]
    fn complex_pair_convention() {
        let z1 = Complex64::new(1.0, 2.0);
        let z2 = Complex64::new(3.0, 4.0);
        let q = Quaternion::from_complex_pair(z1, z2);
        let expected = Quaternion::new(1.0, 2.0, 0.0, 0.0) + Quaternion::new(3.0, 4.0, 0.0, 0.0) * Quaternion::J;
        assert!(close(q, expected));
        // Left multiplication by i is multiplication of both coordinates by i.
        let (w1, w2) = (Quaternion::I * q).to_complex_pair();
        assert_eq!((w1, w2), (z1 * Complex64::i(), z2 * Complex64::i()));
    }

    #[test]
    fn hopf_examples() {
        assert!(close(hopf_phi(Quaternion::I).unwrap(), Quaternion::I));
        assert!(close(hopf_phi(Quaternion::I.scale(2.0)).unwrap(), Quaternion::I));
        assert!(close(hopf_phi(Quaternion::J).unwrap(), -Quaternion::I));
        assert!(hopf_phi(Quaternion::ZERO).is_err());
    }

    #[test]
    fn hopf_differential_at_i() {
        // dΦ_i(j) = 2j for the restriction to unit quaternions.
        let h = 1e-6;
        let fwd = hopf_phi(Quaternion::I + Quaternion::J.scale(h)).unwrap();
        let bwd = hopf_phi(Quaternion::I - Quaternion::J.scale(h)).unwrap();
        let d = (fwd - bwd).scale(0.5 / h);
        assert!(d.distance(Quaternion::J.scale(2.0)) < 1e-8);
    }

    #[test]
    fn hopf_preimage_inverts() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let u = Quaternion::random(&mut rng).imaginary().normalize().unwrap();
            let q = hopf_preimage(u).unwrap();
            assert!(hopf_phi(q).unwrap().distance(u) < 1e-13);
        }
        for u in [Quaternion::I, -Quaternion::I, Quaternion::J, -Quaternion::K] {
            assert!(hopf_phi(hopf_preimage(u).unwrap()).unwrap().distance(u) < 1e-14);
        }
        assert!(hopf_preimage(Quaternion::ONE).is_err());
    }

    #[test]
    fn standard_structure_from_unit_quaternion() {
        let j = structure_from_quaternion(Quaternion::ONE).unwrap();
        assert_eq!(j.spin(), Spin::Positive);
        // J(1) = i, J(j) = k
        assert_eq!(j.apply(&Vector4::x()), Vector4::y());
        assert_eq!(j.apply(&Vector4::z()), Vector4::w());
        let lam = Quaternion::new(0.4, -2.0, 0.0, 0.0);
        let j2 = structure_from_quaternion(lam).unwrap();
        assert!(j.max_abs_diff(&j2) < 1e-15);
        assert!(structure_from_quaternion(Quaternion::ZERO).is_err());
    }

    #[test]
    fn frame_structures_have_expected_columns() {
        let e = Frame4::standard();
        let plus = structure_from_frame(&e, Spin::Positive);
        let cols = Matrix4::from_columns(&[Vector4::y(), -Vector4::x(), Vector4::w(), -Vector4::z()]);
        assert_eq!(*plus.matrix(), cols);
        assert_eq!(HermitianStructure::new(cols).unwrap().spin(), Spin::Positive);
        let minus = structure_from_frame(&e, Spin::Negative);
        let cols = Matrix4::from_columns(&[Vector4::y(), -Vector4::x(), -Vector4::w(), Vector4::z()]);
        assert_eq!(*minus.matrix(), cols);
        assert_eq!(HermitianStructure::new(cols).unwrap().spin(), Spin::Negative);
    }

    #[test]
    fn orientation_reversing_swap_exchanges_spins() {
        // A: e3 <-> e4 conjugates J⁺_e to J⁻_e.
        let a = Matrix4::from_columns(&[Vector4::x(), Vector4::y(), Vector4::w(), Vector4::z()]);
        let plus = structure_from_frame(&Frame4::standard(), Spin::Positive);
        let conj = HermitianStructure::new(a.transpose() * plus.matrix() * a).unwrap();
        assert_eq!(conj.spin(), Spin::Negative);
    }

    #[test]
    fn frame_validation() {
        let bad = [Vector4::x(), Vector4::y(), Vector4::w(), Vector4::z()];
        assert!(Frame4::new(bad).is_err());
        let skew = [Vector4::x(), Vector4::new(1.0, 1.0, 0.0, 0.0), Vector4::z(), Vector4::w()];
        assert!(Frame4::new(skew).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = Frame4::random(&mut rng);
        assert!(Frame4::new(*f.vectors()).is_ok());
    }

    #[test]
    fn hodge_star_fixes_selfdual_basis() {
        for spin in [Spin::Positive, Spin::Negative] {
            for b in lambda2_basis(spin) {
                assert!(b.hodge_star().max_abs_diff(&b.scale(spin.sign())) < 1e-15);
            }
        }
        let b = Bivector::basis(0, 1) + Bivector::basis(2, 3);
        let (p, m) = selfdual_split(&b);
        assert_eq!(p, b);
        assert_eq!(m, Bivector::default());
        let (p, m) = selfdual_split(&Bivector::basis(0, 1));
        assert_eq!(p, (Bivector::basis(0, 1) + Bivector::basis(2, 3)).scale(0.5));
        assert_eq!(m, (Bivector::basis(0, 1) - Bivector::basis(2, 3)).scale(0.5));
        let (p, m) = selfdual_split(&Bivector::default());
        assert_eq!((p, m), (Bivector::default(), Bivector::default()));
        assert_eq!(Bivector::basis(3, 1), Bivector::basis(1, 3).scale(-1.0));
    }

    #[test]
    fn lambda2_examples() {
        let b = lambda2_basis(Spin::Positive)[0];
        let j = structure_from_lambda2(&b, Spin::Positive).unwrap();
        let je = structure_from_frame(&Frame4::standard(), Spin::Positive);
        assert!(j.max_abs_diff(&je) < 1e-15);
        let b = lambda2_basis(Spin::Negative)[0];
        let j = structure_from_lambda2(&b, Spin::Negative).unwrap();
        let je = structure_from_frame(&Frame4::standard(), Spin::Negative);
        assert!(j.max_abs_diff(&je) < 1e-15);
        assert_eq!(j.spin(), Spin::Negative);
        // wrong eigenspace, wrong norm
        assert!(structure_from_lambda2(&b, Spin::Positive).is_err());
        assert!(structure_from_lambda2(&b.scale(2.0), Spin::Negative).is_err());
    }

    #[test]
    fn lambda2_basis_maps_to_left_multiplications() {
        // (e12+e34)/√2 ↦ L_i, (e13+e42)/√2 ↦ L_j, (e14+e23)/√2 ↦ L_k
        let basis = lambda2_basis(Spin::Positive);
        for (b, u) in basis.iter().zip([Quaternion::I, Quaternion::J, Quaternion::K]) {
            let j = structure_from_lambda2(b, Spin::Positive).unwrap();
            assert!((j.matrix() - u.left_matrix()).abs().max() < 1e-15);
        }
    }

    #[test]
    fn plane_examples() {
        let p = OrientedPlane::new(Vector4::x(), Vector4::y()).unwrap();
        let (plus, minus) = plane_to_structures(&p);
        let e = Frame4::standard();
        assert!(plus.max_abs_diff(&structure_from_frame(&e, Spin::Positive)) < 1e-15);
        assert!(minus.max_abs_diff(&structure_from_frame(&e, Spin::Negative)) < 1e-15);
        let rev = OrientedPlane::new(Vector4::y(), Vector4::x()).unwrap();
        let (rp, rm) = plane_to_structures(&rev);
        assert!((rp.apply(&Vector4::x()) + Vector4::y()).norm() < 1e-15);
        assert!((rm.apply(&Vector4::x()) + Vector4::y()).norm() < 1e-15);
        assert!(OrientedPlane::from_span(&Vector4::x(), &Vector4::x().scale(2.0)).is_err());
        assert!(OrientedPlane::new(Vector4::x(), Vector4::x()).is_err());
    }
}
