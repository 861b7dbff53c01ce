//! Numerics for step-two Carnot groups: the sub-Riemannian exponential map, its
//! Jacobian and the asymptotics that determine the geodesic dimension and lower
//! bounds on the curvature exponent.
//!
//! All routines are generic over the scalar type through [`Real`]; the aliases
//! at the crate root fix it to `f64`. [`DoubleDouble`] is available where
//! `f64` runs out of digits.

// `!(x > 0)` is how NaN gets rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod analysis;
pub mod catalog;
pub mod error;
pub mod expmap;
pub mod extended;
pub mod flow;
pub mod gamma;
pub mod sampling;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use extended::DoubleDouble;
pub use scalar::Real;

/// Double-precision step-two algebra.
pub type Algebra = algebra::StepTwoAlgebra<f64>;
pub type Covector = algebra::Covector<f64>;
pub type GroupPoint = algebra::GroupPoint<f64>;
pub type SeriesConfig = expmap::SeriesConfig<f64>;
