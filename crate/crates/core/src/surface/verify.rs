//! Grid sweeps of the per-point checks and the superminimality suite.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Vector2, Vector5};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    covariant_derivative_residual, differentiate, fundamental_forms, indicatrix, lift_residuals, mean_curvature,
    DiffConfig, IndicatrixReport, ParamSurface, Rect, Target,
};
use crate::error::{Error, Result};
use crate::quaternion::Spin;
use crate::report::{CheckEntry, CheckReport, MaxTracker};

/// A chart rectangle sampled at `n × n` points, boundary included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub domain: Rect,
    pub n: usize,
}

impl Grid {
    pub fn new(domain: Rect, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("grid resolution {n} < 2")));
        }
        Ok(Self { domain, n })
    }

    pub fn points(&self) -> Vec<(f64, f64)> {
        self.domain.grid(self.n)
    }
}

/// `u0,u1,v0,v1,n`
impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 5 {
            return Err(Error::Parse(format!("grid '{s}': expected u0,u1,v0,v1,n")));
        }
        let f = |x: &str| x.parse::<f64>().map_err(|e| Error::Parse(format!("grid '{s}': {e}")));
        let n = parts[4].parse::<usize>().map_err(|e| Error::Parse(format!("grid '{s}': {e}")))?;
        Grid::new(Rect::new(f(parts[0])?, f(parts[1])?, f(parts[2])?, f(parts[3])?)?, n)
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = &self.domain;
        write!(f, "{},{},{},{},{}", r.u0, r.u1, r.v0, r.v1, self.n)
    }
}

/// Per-point results of the differential-geometric checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSample {
    pub u: f64,
    pub v: f64,
    pub f: Vector5<f64>,
    pub singular_ratio: f64,
    /// Branch point or rank drop: excluded from every verdict.
    pub masked: bool,
    pub conformality: f64,
    pub mean_curvature: f64,
    pub indicatrix: Option<IndicatrixReport>,
}

impl PointSample {
    pub fn label(&self) -> String {
        format!("({:.4}, {:.4})", self.u, self.v)
    }

    /// The indicatrix spin at a non-degenerate, unmasked point.
    pub fn spin(&self) -> Option<Spin> {
        self.indicatrix.as_ref().and_then(|i| i.spin)
    }
}

pub fn sample_point(s: &ParamSurface, u: f64, v: f64, cfg: &DiffConfig) -> Result<PointSample> {
    let masked = |ratio: f64| PointSample {
        u,
        v,
        f: s.eval(u, v),
        singular_ratio: ratio,
        masked: true,
        conformality: f64::NAN,
        mean_curvature: f64::NAN,
        indicatrix: None,
    };
    let jet = match differentiate(s, u, v, cfg) {
        Ok(j) => j,
        Err(Error::Immersion(_)) => return Ok(masked(0.0)),
        Err(e) => return Err(e),
    };
    let ratio = jet.singular_ratio();
    if ratio < cfg.tolerances.branch_mask || jet.relative_speed < cfg.tolerances.branch_mask {
        return Ok(masked(ratio));
    }
    let forms = fundamental_forms(&jet)?;
    let ind = indicatrix(&forms, &Vector2::x(), cfg.indicatrix_samples, &cfg.tolerances)?;
    Ok(PointSample {
        u,
        v,
        f: jet.f,
        singular_ratio: ratio,
        masked: false,
        conformality: forms.conformality_residual,
        mean_curvature: mean_curvature(&forms).norm,
        indicatrix: Some(ind),
    })
}

/// [`sample_point`] over the grid, in grid order.
pub fn sample_grid(s: &ParamSurface, grid: &Grid, cfg: &DiffConfig) -> Result<Vec<PointSample>> {
    cfg.validate()?;
    grid.points()
        .par_iter()
        .map(|(u, v)| sample_point(s, *u, *v, cfg))
        .collect()
}

/// The spin shared by every non-degenerate sample, if there is one.
pub fn common_spin(samples: &[PointSample]) -> std::result::Result<Option<Spin>, (usize, usize)> {
    let (mut plus, mut minus) = (0, 0);
    for s in samples.iter().filter(|s| !s.masked) {
        match s.spin() {
            Some(Spin::Positive) => plus += 1,
            Some(Spin::Negative) => minus += 1,
            None => {}
        }
    }
    match (plus, minus) {
        (0, 0) => Ok(None),
        (_, 0) => Ok(Some(Spin::Positive)),
        (0, _) => Ok(Some(Spin::Negative)),
        _ => Err((plus, minus)),
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SuiteOptions {
    /// Required indicatrix spin at non-degenerate points.
    pub expected_spin: Option<Spin>,
    /// Also test horizontality, holomorphicity and parallelism of the lift.
    pub lift_checks: bool,
}

/// Conformality, minimality, circular indicatrices with constant spin, and
/// optionally a horizontal lift, over a grid.
pub fn superminimality_suite(
    s: &ParamSurface,
    grid: &Grid,
    cfg: &DiffConfig,
    opts: SuiteOptions,
) -> Result<(CheckReport, Vec<PointSample>)> {
    let tol = &cfg.tolerances;
    let samples = sample_grid(s, grid, cfg)?;
    let mut rep = CheckReport::new(format!("superminimality {}", s.id()));
    let (mut conf, mut mc, mut center, mut circ) = Default::default();
    let mut degenerate = 0usize;
    for p in samples.iter().filter(|p| !p.masked) {
        let at = || p.label();
        observe(&mut conf, p.conformality, at);
        observe(&mut mc, p.mean_curvature, at);
        let ind = p.indicatrix.as_ref().expect("unmasked samples carry an indicatrix");
        if ind.degenerate {
            degenerate += 1;
        } else {
            observe(&mut center, ind.center_norm / ind.radius, at);
            observe(&mut circ, ind.circularity_residual, at);
        }
    }
    let masked = samples.iter().filter(|p| p.masked).count();
    let conformal = entry("conformality", &conf, tol.conformality);
    let lift_checks = opts.lift_checks && conformal.passed;
    if opts.lift_checks && !lift_checks {
        rep.note("lift checks skipped: the surface is not conformal");
    }
    rep.push(conformal);
    rep.push(entry("mean_curvature", &mc, tol.mean_curvature));
    rep.push(entry("indicatrix_center", &center, tol.indicatrix_center));
    rep.push(entry("circularity", &circ, tol.circularity));

    let spin = match common_spin(&samples) {
        Ok(spin) => {
            let ok = match (opts.expected_spin, spin) {
                (Some(e), Some(s)) => e == s,
                _ => true,
            };
            rep.push(CheckEntry::condition("spin_constant", ok));
            spin
        }
        Err((plus, minus)) => {
            rep.push(CheckEntry::new("spin_constant", plus.min(minus) as f64, 0.0));
            rep.note(format!("mixed spin: {plus} positive, {minus} negative"));
            None
        }
    };

    if lift_checks {
        // Degenerate everywhere: both lifts must be horizontal.
        let spins: Vec<Spin> = match spin.or(opts.expected_spin) {
            Some(s) => vec![s],
            None => vec![Spin::Positive, Spin::Negative],
        };
        for sp in spins {
            let (alpha, cr, nabla) = lift_sweep(s, &samples, sp, cfg)?;
            if s.target() == Target::Sphere {
                rep.push(entry(&format!("lift_alpha[{sp}]"), &alpha, tol.alpha));
            }
            rep.push(entry(&format!("lift_cauchy_riemann[{sp}]"), &cr, tol.cauchy_riemann));
            rep.push(entry(&format!("nabla_f[{sp}]"), &nabla, tol.nabla_f));
        }
    }

    rep.meta("surface", s.id());
    rep.meta("grid", grid.to_string());
    rep.meta("points", samples.len());
    rep.meta("masked", masked);
    rep.meta("degenerate", degenerate);
    rep.meta("spin", spin.map(|s| s.to_string()).unwrap_or_else(|| "degenerate".into()));
    Ok((rep, samples))
}

type Trackers = (MaxTracker, MaxTracker, MaxTracker);

fn lift_sweep(s: &ParamSurface, samples: &[PointSample], spin: Spin, cfg: &DiffConfig) -> Result<Trackers> {
    let per_point: Vec<(String, f64, f64, f64)> = samples
        .par_iter()
        .filter(|p| !p.masked)
        .map(|p| {
            let r = lift_residuals(s, p.u, p.v, spin, cfg)?;
            let mut nabla = 0.0f64;
            for w in [Vector2::x(), Vector2::y()] {
                nabla = nabla.max(covariant_derivative_residual(s, p.u, p.v, &w, spin, cfg)?);
            }
            Ok((p.label(), r.alpha, r.cauchy_riemann, nabla))
        })
        .collect::<Result<_>>()?;
    let mut t: Trackers = Default::default();
    for (at, a, c, n) in per_point {
        observe(&mut t.0, a, || at.clone());
        observe(&mut t.1, c, || at.clone());
        observe(&mut t.2, n, || at.clone());
    }
    Ok(t)
}

fn observe(t: &mut MaxTracker, v: f64, at: impl FnOnce() -> String) {
    t.observe(v, at);
}

/// An entry for the maximum, or a vacuous pass when nothing was observed.
pub(crate) fn entry(id: &str, t: &MaxTracker, tol: f64) -> CheckEntry {
    let mut e = CheckEntry::new(id, if t.count == 0 { 0.0 } else { t.value }, tol);
    if let Some(at) = &t.at {
        e.id = format!("{id} @ {at}");
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::catalog;

    #[test]
    fn grid_parsing() {
        let g: Grid = "-1,1,-0.5,0.5,21".parse().unwrap();
        assert_eq!(g.n, 21);
        assert_eq!(g.domain.v0, -0.5);
        assert_eq!(g.points().len(), 441);
        assert!("1,2,3".parse::<Grid>().is_err());
        assert!("0,1,0,1,1".parse::<Grid>().is_err());
        assert!("1,0,0,1,3".parse::<Grid>().is_err());
    }

    #[test]
    fn veronese_passes_the_suite() {
        let s = catalog::veronese();
        let grid = Grid::new(Rect::square(1.5), 7).unwrap();
        let opts = SuiteOptions { expected_spin: None, lift_checks: true };
        let (rep, _) = superminimality_suite(&s, &grid, &DiffConfig::default(), opts).unwrap();
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn totally_geodesic_sphere_is_degenerate_with_two_horizontal_lifts() {
        let s = catalog::totally_geodesic_s2();
        let grid = Grid::new(Rect::square(1.5), 5).unwrap();
        let opts = SuiteOptions { expected_spin: None, lift_checks: true };
        let (rep, samples) = superminimality_suite(&s, &grid, &DiffConfig::default(), opts).unwrap();
        assert!(rep.passed(), "{rep}");
        assert!(samples.iter().all(|p| p.indicatrix.as_ref().unwrap().degenerate));
        assert_eq!(rep.entries.iter().filter(|e| e.id.starts_with("lift_alpha")).count(), 2);
    }

    #[test]
    fn non_conformal_surfaces_fail_without_lift_checks() {
        let grid = Grid::new(Rect::square(0.9), 5).unwrap();
        let opts = SuiteOptions { expected_spin: None, lift_checks: true };
        let (rep, _) = superminimality_suite(&catalog::flat_graph(), &grid, &DiffConfig::default(), opts).unwrap();
        assert!(!rep.passed());
        assert!(rep.entries.iter().all(|e| !e.id.starts_with("nabla_f")));
        assert_eq!(rep.notes.len(), 1);
    }
}
