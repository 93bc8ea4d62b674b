//! Holomorphic Legendrian curves for the contact form
//! `α = z1 dz2 - z2 dz1 + z3 dz4 - z4 dz3` on CP³, in exact arithmetic.

pub mod curve;
pub mod file;
pub mod poly;
pub mod reference;

use crate::quaternion::Spin;

pub use curve::{
    alpha_pullback, generate_legendrian, project_curve, project_polynomial_curve, roundtrip_verify, Generators,
    LegendrianCurve,
};
pub use file::CurveFile;
pub use poly::{CRational, ComplexPoly, Rational};

/// Indicatrix spin of projections of Legendrian curves, and the spin whose
/// twistor lift recovers the curve. Measured on the cubic reference curve.
pub const LEGENDRIAN_SPIN: Spin = Spin::Positive;
