//! Explicit twistor geometry of S⁴ and H⁴: quaternionic hermitian structures,
//! the projection CP³ → S⁴, holomorphic Legendrian curves and numerical
//! certification of the superminimal surfaces they project to.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod legendrian;
pub mod quaternion;
pub mod report;
pub mod suites;
pub mod surface;
pub mod twistor_h4;
pub mod twistor_s4;

pub use error::{Error, Result};
