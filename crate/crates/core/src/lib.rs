//! Exact and numerical tools for the Picard modular group over the
//! Eisenstein integers: cyclotomic arithmetic, PU(2,1) words, period
//! polynomials, theta constants, complex hyperbolic geometry, quadrature on
//! the fundamental domain and path groupoids on the moduli of four points.
//!
//! Exact modules work over [`cyclotomic::CycNum`].  Numerical modules are
//! generic over a [`Real`] scalar; [`F64`] is the default.

pub mod cyclotomic;
pub mod matgroup;
pub mod polyaction;
pub mod cocycle;
pub mod elliptic;
pub mod thetaforms;
pub mod chgeometry;
pub mod quadrature;
pub mod modulipaths;
pub mod report;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Real scalar used by the numerical modules.
pub trait Real:
    Float + FloatConst + FromPrimitive + Send + Sync + std::fmt::Debug + std::fmt::Display + 'static
{
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + Send + Sync + std::fmt::Debug + std::fmt::Display + 'static
{
}

pub type F64 = f64;
pub type C64 = num_complex::Complex<f64>;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("singular matrix")]
    Singular,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown name: {0}")]
    UnknownName(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("did not converge: {0}")]
    NoConvergence(String),
}
