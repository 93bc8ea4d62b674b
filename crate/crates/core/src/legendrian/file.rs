//! JSON curve files.
//!
//! ```json
//! {"chart": "z1", "c0": [0, 0], "p3": [[0, 0], [1, 0]], "p4": [[0, 0], [0, 0], [1, 0]],
//!  "z2": [[0, 0], [0, 0], [0, 0], ["-1/3", 0]]}
//! ```
//!
//! Coefficients are ascending `[re, im]` pairs. A part is a JSON number, or a
//! string holding an exact rational when the value is not a double. `z2` is
//! written for inspection and checked against the generators on load.

use std::path::Path;

use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::curve::{alpha_pullback, generate_legendrian, LegendrianCurve};
use super::poly::{parse_rational, rational_from_f64, CRational, ComplexPoly, Rational};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Part {
    Number(f64),
    Exact(String),
}

impl Part {
    fn to_rational(&self) -> Result<Rational> {
        match self {
            Part::Number(x) => rational_from_f64(*x),
            Part::Exact(s) => parse_rational(s),
        }
    }

    fn from_rational(q: &Rational) -> Self {
        match q.to_f64() {
            Some(x) if rational_from_f64(x).is_ok_and(|r| &r == q) => Part::Number(x),
            _ => Part::Exact(q.to_string()),
        }
    }
}

pub type Coef = [Part; 2];

fn coef_to(c: &Coef) -> Result<CRational> {
    Ok(CRational::new(c[0].to_rational()?, c[1].to_rational()?))
}

fn coef_from(c: &CRational) -> Coef {
    [Part::from_rational(&c.re), Part::from_rational(&c.im)]
}

fn poly_to(p: &[Coef]) -> Result<ComplexPoly> {
    p.iter().map(coef_to).collect::<Result<Vec<_>>>().map(ComplexPoly::from_coeffs)
}

fn poly_from(p: &ComplexPoly) -> Vec<Coef> {
    p.coeffs().iter().map(coef_from).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveFile {
    pub chart: String,
    pub c0: Coef,
    pub p3: Vec<Coef>,
    pub p4: Vec<Coef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z2: Option<Vec<Coef>>,
}

/// Relative agreement required between an emitted `z2` and the regenerated one.
const Z2_TOL: f64 = 1e-13;

impl CurveFile {
    pub fn from_curve(c: &LegendrianCurve) -> Result<Self> {
        let g = c
            .generators()
            .ok_or_else(|| Error::Precondition("only generated curves can be written".into()))?;
        Ok(Self {
            chart: "z1".into(),
            c0: coef_from(&g.c0),
            p3: poly_from(&g.p3),
            p4: poly_from(&g.p4),
            z2: Some(poly_from(&c.components()[1])),
        })
    }

    /// Regenerates the curve and re-certifies any emitted `z2`.
    pub fn to_curve(&self) -> Result<LegendrianCurve> {
        if self.chart != "z1" {
            return Err(Error::Parse(format!("unsupported chart '{}', expected 'z1'", self.chart)));
        }
        let p3 = poly_to(&self.p3)?;
        let p4 = poly_to(&self.p4)?;
        let curve = generate_legendrian(p3.clone(), p4.clone(), coef_to(&self.c0)?);
        if let Some(z2) = &self.z2 {
            let emitted = poly_to(z2)?;
            if !close(&emitted, &curve.components()[1]) {
                let z = curve.components();
                let stated = LegendrianCurve::from_components([z[0].clone(), emitted, p3, p4]);
                return Err(Error::Precondition(format!(
                    "curve is not Legendrian: α-pullback = {}",
                    alpha_pullback(&stated)
                )));
            }
        }
        Ok(curve)
    }

    pub fn load(path: &Path) -> Result<LegendrianCurve> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let file: CurveFile = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        file.to_curve()
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))?;
        std::fs::write(path, text + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }
}

fn close(a: &ComplexPoly, b: &ComplexPoly) -> bool {
    let n = a.coeffs().len().max(b.coeffs().len());
    let zero = CRational::default();
    (0..n).all(|k| {
        let x = a.coeffs().get(k).unwrap_or(&zero);
        let y = b.coeffs().get(k).unwrap_or(&zero);
        let d = x - y;
        let mag = |q: &Rational| q.abs().to_f64().unwrap_or(f64::INFINITY);
        let scale = mag(&y.re).max(mag(&y.im)).max(1.0);
        mag(&d.re).max(mag(&d.im)) <= Z2_TOL * scale
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::legendrian::reference;

    #[test]
    fn cubic_file_round_trip() {
        let c = reference::cubic_curve();
        let f = CurveFile::from_curve(&c).unwrap();
        let json = serde_json::to_string(&f).unwrap();
        assert!(json.contains("\"-1/3\""), "{json}");
        let back: CurveFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_curve().unwrap(), c);
    }

    #[test]
    fn rounded_z2_is_accepted() {
        let json = r#"{"chart":"z1","c0":[0,0],"p3":[[0,0],[1,0]],"p4":[[0,0],[0,0],[1,0]],
            "z2":[[0,0],[0,0],[0,0],[-0.3333333333333333,0]]}"#;
        let f: CurveFile = serde_json::from_str(json).unwrap();
        assert!(f.to_curve().unwrap().is_certified());
    }

    #[test]
    fn wrong_z2_is_rejected() {
        let json = r#"{"chart":"z1","c0":[0,0],"p3":[[0,0],[1,0]],"p4":[[0,0],[1,0]],"z2":[[0,0],[1,0]]}"#;
        let f: CurveFile = serde_json::from_str(json).unwrap();
        assert!(matches!(f.to_curve(), Err(Error::Precondition(_))));
    }

    #[test]
    fn other_charts_are_rejected() {
        let json = r#"{"chart":"z2","c0":[0,0],"p3":[],"p4":[]}"#;
        let f: CurveFile = serde_json::from_str(json).unwrap();
        assert!(matches!(f.to_curve(), Err(Error::Parse(_))));
    }
}
