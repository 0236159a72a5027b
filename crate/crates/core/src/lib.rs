//! Numerical laboratory for the reversed Hardy-Littlewood-Sobolev
//! inequality: exponents, special functions, quadrature and quasi-norms,
//! the potential operators on the sphere and on `R^n`, inequality checkers,
//! and the extremal functions with their Euler-Lagrange system.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod error;
pub mod exponents;
pub mod extremal;
pub mod functions;
pub mod geometry;
pub mod inequalities;
pub mod interp;
pub mod norms;
pub mod operators;
pub mod quadrature;
pub mod report;
pub mod special;
pub mod suite;

pub use error::{Result, RhlsError};
pub use exponents::ExponentSet;
pub use functions::{RadialFn, SampledFn1D, SampledTable, ZonalFn};
pub use report::{Provenance, VerificationReport};
