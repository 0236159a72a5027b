//! Checkers for the reversed inequalities and the HLS quotient.
//!
//! Checks that compare two exact sums use [`EXACT_TOL`]. Converse Young and
//! reversed Riesz run on piecewise-constant circle models and use
//! [`DISCRETE_TOL`]: the continuous theorems need not transfer exactly to
//! a discretization, so shortfalls below that level are treated as
//! discretization artifacts.

pub mod classical;
pub mod hls;
pub mod random;
pub mod rearrangement;
pub mod weak_type;

pub use classical::{
    converse_young_check, periodic_convolution_nodes, reversed_holder_check, reversed_minkowski_check, DISCRETE_TOL,
    EXACT_TOL,
};
pub use hls::{
    bilinear_form, bilinear_form_with, hls_quotient, hls_quotient_with, hls_report, QuotientResult, QUADRATURE_TOL,
};
pub use random::{lognormal_values, random_matrix, random_step, random_zonal};
pub use rearrangement::{
    decreasing_rearrangement, increasing_rearrangement, riesz_reversed_check, symmetric_decreasing_circle,
    symmetric_increasing_circle,
};
pub use weak_type::{radial_sublevel_measure, weak_type_constant, WeakTypeResult};
