//! Reference curves used by the catalog, the CLI and the test suites.

use super::curve::{generate_legendrian, project_curve, LegendrianCurve};
use super::poly::{CRational, ComplexPoly};
use crate::surface::{ParamSurface, Rect};

fn poly(s: &str) -> ComplexPoly {
    ComplexPoly::parse(s).expect("reference polynomial")
}

fn c(s: &str) -> CRational {
    poly(s).coeffs().first().cloned().unwrap_or_default()
}

/// `[1 : -t³/3 : t : t²]`.
pub fn cubic_curve() -> LegendrianCurve {
    generate_legendrian(poly("0,1"), poly("0,0,1"), c("0"))
}

/// `[1 : 0 : t : 0]`, projecting to a totally geodesic 2-sphere.
pub fn line_curve() -> LegendrianCurve {
    generate_legendrian(poly("0,1"), poly("0"), c("0"))
}

/// `[1 : t : t : t]`: holomorphic but not Legendrian.
pub fn non_legendrian_curve() -> LegendrianCurve {
    let t = poly("0,1");
    LegendrianCurve::from_components([poly("1"), t.clone(), t.clone(), t])
}

/// Reference curves for the round-trip suite.
pub fn roundtrip_curves() -> Vec<(&'static str, LegendrianCurve)> {
    vec![
        ("cubic", cubic_curve()),
        ("line", line_curve()),
        ("quadratic_pair", generate_legendrian(poly("1/2,0,1"), poly("0,1-1/2i"), c("1/4"))),
        ("quartic", generate_legendrian(poly("0,1,0,0,1/4"), poly("1/3i,0,1/2"), c("-1/2+1/2i"))),
        ("complex_coefficients", generate_legendrian(poly("1,i"), poly("0,0,1/2,1/5i"), c("0"))),
    ]
}

pub fn cubic_surface() -> ParamSurface {
    project_curve(&cubic_curve(), Rect::square(1.0))
        .expect("cubic curve projects")
        .with_id("legendrian_cubic")
}

pub fn line_surface() -> ParamSurface {
    project_curve(&line_curve(), Rect::square(1.0))
        .expect("line curve projects")
        .with_id("legendrian_line")
}
