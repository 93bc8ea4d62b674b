//! Built-in surfaces.

use nalgebra::{Vector3, Vector5};

use super::{ParamSurface, Rect, Target};

/// Names accepted by [`by_name`].
pub const NAMES: &[&str] = &[
    "totally_geodesic_s2",
    "small_sphere",
    "flat_graph",
    "flat_holomorphic_graph",
    "flat_antiholomorphic_graph",
    "flat_complex_line",
    "veronese",
    "ball_plane",
    "legendrian_cubic",
    "legendrian_line",
];

/// Inverse stereographic projection onto S² ⊂ R³ (same convention as `ψ`).
pub fn inverse_stereo_s2(u: f64, v: f64) -> Vector3<f64> {
    let r2 = u * u + v * v;
    Vector3::new(2.0 * u, 2.0 * v, 1.0 - r2) / (1.0 + r2)
}

/// `ψ(u, v, 0, 0)`: a great 2-sphere through both poles.
pub fn totally_geodesic_s2() -> ParamSurface {
    ParamSurface::new("totally_geodesic_s2", Target::Sphere, Rect::square(2.0), |u, v| {
        let r2 = u * u + v * v;
        Vector5::new(2.0 * u, 2.0 * v, 0.0, 0.0, 1.0 - r2) / (1.0 + r2)
    })
}

/// The 2-sphere at geodesic distance `r` from the north pole, inside
/// `x4 = 0`; umbilic with principal curvatures `cot r`.
pub fn small_sphere(r: f64) -> ParamSurface {
    let (sr, cr) = r.sin_cos();
    ParamSurface::new(format!("small_sphere({r})"), Target::Sphere, Rect::square(2.0), move |u, v| {
        let s = inverse_stereo_s2(u, v);
        Vector5::new(sr * s[0], sr * s[1], sr * s[2], 0.0, cr)
    })
}

/// `(u, v, u² - v², uv)`: minimal at the origin but with an elliptic,
/// non-circular indicatrix there.
pub fn flat_graph() -> ParamSurface {
    ParamSurface::in_r4("flat_graph", Target::Flat, Rect::square(1.0), |u, v| {
        [u, v, u * u - v * v, u * v]
    })
}

/// `w ↦ (w, w²)`, a complex curve for the structure `J⁺` of the standard frame.
pub fn flat_holomorphic_graph() -> ParamSurface {
    ParamSurface::in_r4("flat_holomorphic_graph", Target::Flat, Rect::square(1.0), |u, v| {
        [u, v, u * u - v * v, 2.0 * u * v]
    })
}

/// `w ↦ (w, w̄²)`, a complex curve for `J⁻`.
pub fn flat_antiholomorphic_graph() -> ParamSurface {
    ParamSurface::in_r4("flat_antiholomorphic_graph", Target::Flat, Rect::square(1.0), |u, v| {
        [u, v, u * u - v * v, -2.0 * u * v]
    })
}

/// The complex line `w ↦ (w, (a + ib) w)`.
pub fn flat_complex_line(a: f64, b: f64) -> ParamSurface {
    ParamSurface::in_r4(format!("flat_complex_line({a},{b})"), Target::Flat, Rect::square(1.0), move |u, v| {
        [u, v, a * u - b * v, a * v + b * u]
    })
}

/// The Veronese surface `√3 (yz, xz, xy, (x² - y²)/2, (x² + y² - 2z²)/(2√3))`
/// of the unit sphere, in the stereographic chart.
pub fn veronese() -> ParamSurface {
    ParamSurface::new("veronese", Target::Sphere, Rect::square(2.0), |u, v| {
        let p = inverse_stereo_s2(u, v);
        let (x, y, z) = (p[0], p[1], p[2]);
        let s3 = 3f64.sqrt();
        Vector5::new(
            s3 * y * z,
            s3 * x * z,
            s3 * x * y,
            s3 * (x * x - y * y) / 2.0,
            (x * x + y * y - 2.0 * z * z) / 2.0,
        )
    })
}

/// A long thin rectangle inside the unit disc, reaching `u = ±0.995`.
pub fn ball_plane_domain() -> Rect {
    Rect { u0: -0.995, u1: 0.995, v0: -0.09, v1: 0.09 }
}

/// The plane `(u, v, 0, 0)` through the origin of the Poincaré ball.
///
/// # Panics
/// If a corner of `domain` lies outside the open unit disc.
pub fn ball_plane(domain: Rect) -> ParamSurface {
    for (u, v) in [(domain.u0, domain.v0), (domain.u0, domain.v1), (domain.u1, domain.v0), (domain.u1, domain.v1)] {
        assert!(u * u + v * v < 1.0, "ball_plane domain must lie inside the unit disc");
    }
    ParamSurface::in_r4("ball_plane", Target::Ball, domain, |u, v| [u, v, 0.0, 0.0])
}

/// A catalog surface by name, with default parameters.
pub fn by_name(name: &str) -> Option<ParamSurface> {
    Some(match name {
        "totally_geodesic_s2" => totally_geodesic_s2(),
        "small_sphere" => small_sphere(std::f64::consts::FRAC_PI_4),
        "flat_graph" => flat_graph(),
        "flat_holomorphic_graph" => flat_holomorphic_graph(),
        "flat_antiholomorphic_graph" => flat_antiholomorphic_graph(),
        "flat_complex_line" => flat_complex_line(0.5, -1.0),
        "veronese" => veronese(),
        "ball_plane" => ball_plane(ball_plane_domain()),
        "legendrian_cubic" => crate::legendrian::reference::cubic_surface(),
        "legendrian_line" => crate::legendrian::reference::line_surface(),
        _ => return None,
    })
}
