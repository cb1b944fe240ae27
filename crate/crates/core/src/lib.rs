//! Lattice cubature, dyadic block analysis and sampling discretization of the
//! L2 norm for periodic functions of mixed smoothness on the torus.
// `!(x > y)` checks are kept on purpose so NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cubature;
pub mod discretization;
pub mod dyadic;
pub mod error;
pub mod experiments;
pub mod kernels;
pub mod scalar;
pub mod trig;

pub use error::{Error, Result};
pub use scalar::{Coefficient, Real};

pub type TrigPoly64 = trig::TrigPoly<f64>;
pub type TrigPoly32 = trig::TrigPoly<f32>;
pub type PointSet64 = trig::PointSet<f64>;
pub type CubatureRule64 = cubature::CubatureRule<f64>;
pub type CubatureRule32 = cubature::CubatureRule<f32>;
pub type ClassSpec64 = dyadic::ClassSpec<f64>;
pub type ErrorReport64 = cubature::ErrorReport<f64>;
pub type DiscretizationReport64 = discretization::DiscretizationReport<f64>;
/// Exact kernel coefficients.
pub type Rational = num_rational::Ratio<i64>;
