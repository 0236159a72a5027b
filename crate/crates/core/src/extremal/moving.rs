//! Moving-sphere diagnostic: compares `u` with its Kelvin transform
//! outside the sphere of radius `lambda` about the origin.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result, RhlsError};
use crate::exponents::ExponentSet;
use crate::functions::RadialFn;
use crate::geometry::{kelvin_transform, KelvinParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MovingSphere {
    pub requested_lambda: f64,
    /// `lambda` snapped so the reflected grid lands on `u`'s nodes.
    pub lambda: f64,
    /// `min (u_lambda - u)` over nodes with `r > lambda`.
    pub min_difference: f64,
    /// The same minimum divided pointwise by `u`.
    pub min_relative_difference: f64,
    pub max_abs_difference: f64,
    /// `max |u_lambda - u| / u`.
    pub max_relative_difference: f64,
    /// Number of nodes compared.
    pub nodes: usize,
}

impl MovingSphere {
    /// `u_lambda >= u` on the compared nodes, up to `tol` relative.
    pub fn nonnegative(&self, tol: f64) -> bool {
        self.min_relative_difference >= -tol
    }
}

/// Nearest `lambda` with `2 ln lambda` a multiple of the log step `h`.
pub fn snap_lambda(lam: f64, h: f64) -> f64 {
    let twice = (2.0 * lam.ln() / h).round();
    (0.5 * twice * h).exp()
}

/// Compares `u_{0,lambda}` with `u` on the nodes beyond `lambda`.
///
/// The Kelvin transform reflects the log grid about `ln lambda`; `lambda`
/// is rounded so that `2 ln lambda` is a multiple of the step, which keeps
/// both functions on common nodes without interpolation.
pub fn moving_sphere_check(u: &RadialFn, lam: f64, exps: &ExponentSet) -> Result<MovingSphere> {
    if !(lam > 0.0) || !lam.is_finite() {
        return domain("lam", lam, "a finite positive radius");
    }
    if u.values.iter().any(|v| !(*v > 0.0)) {
        return Err(RhlsError::Degenerate("u must be positive".into()));
    }
    let lambda = snap_lambda(lam, u.h);
    let w = kelvin_transform(u, &KelvinParams::centered(u.n, lambda)?, exps)?;
    let offset = ((w.u0 - u.u0) / u.h).round() as i64;
    let ll = lambda.ln();
    let mut out = MovingSphere {
        requested_lambda: lam,
        lambda,
        min_difference: f64::INFINITY,
        min_relative_difference: f64::INFINITY,
        max_abs_difference: 0.0,
        max_relative_difference: 0.0,
        nodes: 0,
    };
    for k in 0..u.len() {
        let j = k as i64 - offset;
        if j < 0 || j as usize >= w.len() || u.log_radius(k) <= ll + 0.5 * u.h {
            continue;
        }
        let d = w.values[j as usize] - u.values[k];
        out.min_difference = out.min_difference.min(d);
        out.min_relative_difference = out.min_relative_difference.min(d / u.values[k]);
        out.max_abs_difference = out.max_abs_difference.max(d.abs());
        out.max_relative_difference = out.max_relative_difference.max(d.abs() / u.values[k]);
        out.nodes += 1;
    }
    if out.nodes == 0 {
        return Err(RhlsError::InvalidGrid("no grid nodes beyond lambda".into()));
    }
    Ok(out)
}
