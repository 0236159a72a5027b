//! Extremal families, the Euler-Lagrange system, the fixed-point
//! minimizer and the moving-sphere diagnostic.

pub mod el;
pub mod families;
pub mod minimize;
pub mod moving;

pub use el::{asymptotic_coeffs, derive_el_constants, el_apply, el_residual, AsymptoticCoeffs, ELPair, EL_TOL};
pub use families::{extremal_rn, extremal_sphere, ExtremalParamsRn, ExtremalParamsSphere};
pub use minimize::{
    concentration_demo, el_map, fixed_point_minimize, ConcentrationResult, ConcentrationRow, MinimizeResult,
    DEFAULT_DAMPING,
};
pub use moving::{moving_sphere_check, snap_lambda, MovingSphere};
