//! Lengths of chart paths in the induced metric and a graph diameter estimate.

use nalgebra::{Vector2, Vector4, Vector5};
use petgraph::algo::dijkstra;
use petgraph::graph::{NodeIndex, UnGraph};
use serde::{Deserialize, Serialize};

use super::diff::{richardson_derivative, DiffConfig};
use super::{ParamSurface, Target};
use crate::error::{domain, Result};

/// A path `λ: [0, 1] → chart`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ChartPath {
    Segment { from: [f64; 2], to: [f64; 2] },
    /// One full counter-clockwise turn.
    Circle { center: [f64; 2], radius: f64 },
    Constant { at: [f64; 2] },
}

impl ChartPath {
    pub fn point(&self, t: f64) -> Vector2<f64> {
        match *self {
            ChartPath::Segment { from, to } => {
                let (a, b) = (Vector2::from(from), Vector2::from(to));
                a + (b - a) * t
            }
            ChartPath::Circle { center, radius } => {
                let a = std::f64::consts::TAU * t;
                Vector2::from(center) + Vector2::new(a.cos(), a.sin()) * radius
            }
            ChartPath::Constant { at } => Vector2::from(at),
        }
    }

    /// Chart length of the path, used to scale the differentiation step.
    fn chart_length(&self) -> f64 {
        match *self {
            ChartPath::Segment { from, to } => (Vector2::from(to) - Vector2::from(from)).norm(),
            ChartPath::Circle { radius, .. } => std::f64::consts::TAU * radius.abs(),
            ChartPath::Constant { .. } => 0.0,
        }
    }
}

fn speed(s: &ParamSurface, path: &ChartPath, t: f64, h: f64, order: u32) -> f64 {
    let g = |dt: f64| {
        let p = path.point(t + dt);
        s.eval(p[0], p[1])
    };
    let d: Vector5<f64> = richardson_derivative(g, h, order);
    match s.target() {
        Target::Sphere | Target::Flat => d.norm(),
        Target::Ball => {
            let y = g(0.0);
            let x = Vector4::new(y[0], y[1], y[2], y[3]);
            2.0 * d.norm() / (1.0 - x.norm_squared())
        }
    }
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    // The integrand carries finite-difference noise, so stop at its level.
    if depth == 0 || delta.abs() <= 15.0 * tol.max(1e-14 * whole.abs()) {
        return left + right + delta / 15.0;
    }
    adaptive(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + adaptive(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// `∫₀¹ |d(f∘λ)/dt|_g dt` by adaptive Simpson quadrature.
pub fn intrinsic_length(s: &ParamSurface, path: &ChartPath, cfg: &DiffConfig) -> Result<f64> {
    let scale = s.domain().scale();
    let h_chart = cfg.step_scale * scale;
    let len = path.chart_length();
    if len == 0.0 {
        let p = path.point(0.0);
        if !s.domain().contains_with_margin(p[0], p[1], 0.0) {
            return Err(domain("path leaves the chart domain"));
        }
        return Ok(0.0);
    }
    let h = h_chart / len;
    for i in 0..=512 {
        let p = path.point(i as f64 / 512.0);
        if !s.domain().contains_with_margin(p[0], p[1], h_chart) {
            return Err(domain(format!("path leaves the chart domain at ({}, {})", p[0], p[1])));
        }
    }
    let f = |t: f64| speed(s, path, t, h, cfg.richardson_order);
    // Split into panels so periodic integrands are not sampled only at nodes.
    let panels = 8;
    let mut total = 0.0;
    for k in 0..panels {
        let a = k as f64 / panels as f64;
        let b = (k + 1) as f64 / panels as f64;
        let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
        total += adaptive(&f, a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), 1e-12, 30);
    }
    Ok(total)
}

/// Largest shortest-path distance on the 8-connected `n × n` chart grid,
/// with edges weighted by the target distance between their endpoints.
///
/// Grid paths overestimate geodesic distances between their nodes while
/// the grid misses far points off the nodes, so the result approximates the
/// diameter of the chart region without bounding it from either side.
pub fn diameter_estimate(s: &ParamSurface, n: usize, _cfg: &DiffConfig) -> Result<f64> {
    if n < 2 {
        return Err(domain("diameter grid needs n >= 2"));
    }
    let pts = s.domain().interior_grid(n, 0.01);
    let vals: Vec<Vector5<f64>> = pts.iter().map(|(u, v)| s.eval(*u, *v)).collect();
    let mut g: UnGraph<(), f64> = UnGraph::with_capacity(n * n, 4 * n * n);
    let nodes: Vec<NodeIndex> = (0..n * n).map(|_| g.add_node(())).collect();
    let dist = |a: &Vector5<f64>, b: &Vector5<f64>| -> f64 {
        let c = (a - b).norm();
        match s.target() {
            Target::Sphere => 2.0 * (c / 2.0).min(1.0).asin(),
            Target::Flat => c,
            Target::Ball => {
                let m = (a + b) / 2.0;
                2.0 * c / (1.0 - m.norm_squared())
            }
        }
    };
    for j in 0..n {
        for i in 0..n {
            let a = j * n + i;
            for (di, dj) in [(1i64, 0i64), (0, 1), (1, 1), (-1, 1)] {
                let (ii, jj) = (i as i64 + di, j as i64 + dj);
                if ii < 0 || jj < 0 || ii >= n as i64 || jj >= n as i64 {
                    continue;
                }
                let b = jj as usize * n + ii as usize;
                g.add_edge(nodes[a], nodes[b], dist(&vals[a], &vals[b]));
            }
        }
    }
    let mut best = 0.0f64;
    for src in &nodes {
        let d = dijkstra(&g, *src, None, |e| *e.weight());
        best = d.values().fold(best, |m, x| m.max(*x));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::catalog;

    #[test]
    fn equator_has_length_two_pi() {
        let s = catalog::totally_geodesic_s2();
        let l = intrinsic_length(
            &s,
            &ChartPath::Circle { center: [0.0, 0.0], radius: 1.0 },
            &DiffConfig::default(),
        )
        .unwrap();
        assert!((l - std::f64::consts::TAU).abs() < 1e-8, "{l}");
    }

    #[test]
    fn radial_ball_length_is_twice_atanh() {
        let s = catalog::ball_plane(catalog::ball_plane_domain());
        for r in [0.5, 0.9, 0.99] {
            let l = intrinsic_length(
                &s,
                &ChartPath::Segment { from: [0.0, 0.0], to: [r, 0.0] },
                &DiffConfig::default(),
            )
            .unwrap();
            assert!((l - 2.0 * f64::atanh(r)).abs() < 1e-8, "{r}: {l}");
        }
    }

    #[test]
    fn constant_path_has_zero_length() {
        let s = catalog::totally_geodesic_s2();
        let l = intrinsic_length(&s, &ChartPath::Constant { at: [0.3, 0.1] }, &DiffConfig::default()).unwrap();
        assert_eq!(l, 0.0);
    }

    #[test]
    fn leaving_the_domain_is_an_error() {
        let s = catalog::totally_geodesic_s2();
        let r = intrinsic_length(
            &s,
            &ChartPath::Segment { from: [0.0, 0.0], to: [3.0, 0.0] },
            &DiffConfig::default(),
        );
        assert!(r.is_err());
    }

    #[test]
    fn diameter_of_a_flat_square() {
        let s = crate::surface::ParamSurface::in_r4("sq", Target::Flat, crate::surface::Rect::square(1.0), |u, v| {
            [u, v, 0.0, 0.0]
        });
        let d = diameter_estimate(&s, 11, &DiffConfig::default()).unwrap();
        let diag = 2.0 * 0.98 * 2f64.sqrt();
        assert!((d - diag).abs() < 1e-12, "{d} {diag}");
    }
}
