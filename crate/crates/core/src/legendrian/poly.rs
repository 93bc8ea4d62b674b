//! Polynomials in one complex variable with exact rational-complex coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

pub type Rational = BigRational;
pub type CRational = Complex<BigRational>;

/// Exact value of a finite double.
pub fn rational_from_f64(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| Error::Parse(format!("non-finite coefficient {x}")))
}

pub fn crational_from_c64(z: Complex64) -> Result<CRational> {
    Ok(CRational::new(rational_from_f64(z.re)?, rational_from_f64(z.im)?))
}

pub fn crational_to_c64(z: &CRational) -> Complex64 {
    Complex64::new(z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN))
}

/// Parses `7`, `-3/4`, `0.125` or `1.5e-3` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("'{s}' is not a rational number"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.is_empty() && frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let n: BigInt = digits.parse().map_err(|_| bad())?;
    let ten = BigInt::from(10);
    let shift = exp - frac.len() as i32;
    let scale = num_traits::pow(ten, shift.unsigned_abs() as usize);
    Ok(if shift >= 0 {
        Rational::from_integer(n * scale)
    } else {
        Rational::new(n, scale)
    })
}

/// Parses a complex rational: `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`.
pub fn parse_crational(s: &str) -> Result<CRational> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty coefficient".into()));
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok(CRational::new(parse_rational(&s)?, Rational::zero()));
    };
    // Split at the last sign that does not start the string or follow an exponent marker.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => Rational::one(),
        "-" => -Rational::one(),
        x => parse_rational(x)?,
    };
    Ok(CRational::new(parse_rational(re)?, im))
}

fn fmt_crational(z: &CRational) -> String {
    match (z.re.is_zero(), z.im.is_zero()) {
        (_, true) => z.re.to_string(),
        (true, false) => format!("{}i", z.im),
        (false, false) => {
            let sign = if z.im.is_negative() { '-' } else { '+' };
            format!("{}{}{}i", z.re, sign, z.im.abs())
        }
    }
}

/// `Σ c_k t^k` with the leading coefficient nonzero, or the zero polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ComplexPoly {
    coeffs: Vec<CRational>,
}

impl ComplexPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: CRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The identity polynomial `t`.
    pub fn t() -> Self {
        Self::monomial(CRational::one(), 1)
    }

    pub fn monomial(c: CRational, k: usize) -> Self {
        let mut v = vec![CRational::zero(); k + 1];
        v[k] = c;
        Self::from_coeffs(v)
    }

    /// Ascending coefficients; trailing zeros are dropped.
    pub fn from_coeffs(mut coeffs: Vec<CRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[i64]) -> Self {
        Self::from_coeffs(
            coeffs
                .iter()
                .map(|c| CRational::new(Rational::from_integer((*c).into()), Rational::zero()))
                .collect(),
        )
    }

    /// From `[re, im]` pairs, exactly.
    pub fn from_f64_pairs(pairs: &[[f64; 2]]) -> Result<Self> {
        pairs
            .iter()
            .map(|[re, im]| crational_from_c64(Complex64::new(*re, *im)))
            .collect::<Result<Vec<_>>>()
            .map(Self::from_coeffs)
    }

    /// Comma-separated ascending coefficients, e.g. `"0,1/2,1-2i"`.
    pub fn parse(s: &str) -> Result<Self> {
        if s.trim().is_empty() {
            return Ok(Self::zero());
        }
        s.split(',').map(parse_crational).collect::<Result<Vec<_>>>().map(Self::from_coeffs)
    }

    pub fn coeffs(&self) -> &[CRational] {
        &self.coeffs
    }

    pub fn to_f64_coeffs(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(crational_to_c64).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * CRational::from(Rational::from_integer(k.into())))
                .collect(),
        )
    }

    /// The antiderivative with constant term `c0`.
    pub fn antiderivative(&self, c0: CRational) -> Self {
        let mut v = Vec::with_capacity(self.coeffs.len() + 1);
        v.push(c0);
        for (k, c) in self.coeffs.iter().enumerate() {
            v.push(c / CRational::from(Rational::from_integer((k + 1).into())));
        }
        Self::from_coeffs(v)
    }

    pub fn scale(&self, c: &CRational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Horner evaluation in double precision.
    pub fn eval(&self, t: Complex64) -> Complex64 {
        eval_f64(&self.to_f64_coeffs(), t)
    }

    pub fn eval_exact(&self, t: &CRational) -> CRational {
        self.coeffs.iter().rev().fold(CRational::zero(), |acc, c| acc * t + c)
    }

    /// Random polynomial of degree at most `max_degree` with coefficients
    /// `(a + bi)/d`, `|a|, |b| ≤ 9`, `1 ≤ d ≤ 9`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, max_degree: usize) -> Self {
        let deg = rng.random_range(0..=max_degree);
        let mut q = || Rational::new(rng.random_range(-9i64..=9).into(), rng.random_range(1i64..=9).into());
        Self::from_coeffs((0..=deg).map(|_| CRational::new(q(), q())).collect())
    }
}

pub fn eval_f64(coeffs: &[Complex64], t: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * t + c)
}

impl fmt::Display for ComplexPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let c = fmt_crational(c);
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})t")?,
                _ => write!(f, "({c})t^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &ComplexPoly {
    type Output = ComplexPoly;

    fn add(self, rhs: &ComplexPoly) -> ComplexPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = CRational::zero();
        ComplexPoly::from_coeffs(
            (0..n)
                .map(|k| self.coeffs.get(k).unwrap_or(&zero) + rhs.coeffs.get(k).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Neg for &ComplexPoly {
    type Output = ComplexPoly;

    fn neg(self) -> ComplexPoly {
        ComplexPoly::from_coeffs(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl Sub for &ComplexPoly {
    type Output = ComplexPoly;

    fn sub(self, rhs: &ComplexPoly) -> ComplexPoly {
        self + &(-rhs)
    }
}

impl Mul for &ComplexPoly {
    type Output = ComplexPoly;

    fn mul(self, rhs: &ComplexPoly) -> ComplexPoly {
        if self.is_zero() || rhs.is_zero() {
            return ComplexPoly::zero();
        }
        let mut v = vec![CRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] = &v[i + j] + a * b;
            }
        }
        ComplexPoly::from_coeffs(v)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for ComplexPoly {
            type Output = ComplexPoly;

            fn $m(self, rhs: ComplexPoly) -> ComplexPoly {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> CRational {
        CRational::new(Rational::new(n.into(), d.into()), Rational::zero())
    }

    #[test]
    fn calculus() {
        let t3 = ComplexPoly::monomial(q(1, 1), 3);
        assert_eq!(t3.derivative(), ComplexPoly::monomial(q(3, 1), 2));
        let t2 = ComplexPoly::monomial(q(1, 1), 2);
        assert_eq!(t2.antiderivative(CRational::zero()), ComplexPoly::monomial(q(1, 3), 3));
        let a = ComplexPoly::from_real(&[1, 1]);
        let b = ComplexPoly::from_real(&[-1, 1]);
        assert_eq!(&a * &b, ComplexPoly::from_real(&[-1, 0, 1]));
        assert_eq!(ComplexPoly::constant(q(5, 1)).derivative(), ComplexPoly::zero());
        assert_eq!(ComplexPoly::zero().degree(), None);
        assert_eq!(&a - &a, ComplexPoly::zero());
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_rational("0.125").unwrap(), Rational::new(1.into(), 8.into()));
        assert_eq!(parse_rational("-3/6").unwrap(), Rational::new((-1).into(), 2.into()));
        assert_eq!(parse_rational("1.5e-3").unwrap(), Rational::new(3.into(), 2000.into()));
        assert_eq!(parse_rational("2e2").unwrap(), Rational::from_integer(200.into()));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
        assert_eq!(parse_crational("2-3i").unwrap(), CRational::new(Rational::from_integer(2.into()), Rational::from_integer((-3).into())));
        assert_eq!(parse_crational("-i").unwrap(), CRational::new(Rational::zero(), -Rational::one()));
        assert_eq!(parse_crational("1/2i").unwrap(), CRational::new(Rational::zero(), Rational::new(1.into(), 2.into())));
        assert_eq!(parse_crational("1e-2+1e+1i").unwrap().im, Rational::from_integer(10.into()));
        let p = ComplexPoly::parse("0, 1").unwrap();
        assert_eq!(p, ComplexPoly::t());
        assert_eq!(ComplexPoly::parse("0,0,0").unwrap(), ComplexPoly::zero());
    }

    #[test]
    fn display() {
        let p = ComplexPoly::parse("1,0,-1/3+2i").unwrap();
        assert_eq!(p.to_string(), "1 + (-1/3+2i)t^2");
    }

    #[test]
    fn float_and_exact_evaluation_agree() {
        let p = ComplexPoly::parse("1/3,2-i,0,-5/7i").unwrap();
        let t = Complex64::new(0.25, -0.5);
        let exact = p.eval_exact(&crational_from_c64(t).unwrap());
        assert!((crational_to_c64(&exact) - p.eval(t)).norm() < 1e-15);
    }
}
