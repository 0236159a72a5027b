//! Integral operators: the zonal sphere potential, the radial potential on
//! `R^n`, its near/far split, and a Monte Carlo cross-check.

pub mod mc;
pub mod radial;
pub mod sphere;
pub mod split;

pub use mc::{mc_operator, McEstimate};
pub use radial::{radial_operator, RadialOperator, RadialOutput};
pub use sphere::{kernel_row_integral, sphere_operator, ZonalKernelMatrix};
pub use split::{split_both, split_operator, Part, SplitOutput};
