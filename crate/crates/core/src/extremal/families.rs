//! Closed-form extremals on the sphere and on `R^n`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::exponents::ExponentSet;
use crate::functions::{RadialFn, ZonalFn};

/// `F(xi) = a (1 - xi . eta)^{-(n+alpha)/2}` with `eta` on the polar axis;
/// `eta` is its signed polar component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremalParamsSphere {
    pub a: f64,
    pub eta: f64,
}

impl ExtremalParamsSphere {
    pub fn new(a: f64, eta: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return domain("a", a, "a > 0");
        }
        if !(eta.abs() < 1.0) {
            return domain("eta", eta, "|eta| < 1");
        }
        Ok(ExtremalParamsSphere { a, eta })
    }

    pub fn eval(&self, exps: &ExponentSet, theta: f64) -> f64 {
        let k = 0.5 * (exps.n as f64 + exps.alpha);
        self.a * (1.0 - self.eta * theta.cos()).powf(-k)
    }
}

/// `f(x) = c (|x|^2 + d^2)^{-(n+alpha)/2}`, centered at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremalParamsRn {
    pub c: f64,
    pub d: f64,
}

impl ExtremalParamsRn {
    pub fn new(c: f64, d: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return domain("c", c, "c > 0");
        }
        if !(d > 0.0) || !d.is_finite() {
            return domain("d", d, "d > 0");
        }
        Ok(ExtremalParamsRn { c, d })
    }

    /// `f_eps(x) = (eps / (eps^2 + |x|^2))^{(n+alpha)/2}`.
    pub fn concentrating(eps: f64, exps: &ExponentSet) -> Result<Self> {
        let k = 0.5 * (exps.n as f64 + exps.alpha);
        ExtremalParamsRn::new(eps.powf(k), eps)
    }

    pub fn eval(&self, exps: &ExponentSet, r: f64) -> f64 {
        let k = 0.5 * (exps.n as f64 + exps.alpha);
        self.c * (r * r + self.d * self.d).powf(-k)
    }

    /// Sphere parameters of the lift. With `cos theta = (1-r^2)/(1+r^2)`,
    /// `2 (r^2 + d^2)/(1 + r^2) = (1 + d^2) - (1 - d^2) cos theta`, so the
    /// lift has `a = c (1+d^2)^{-(n+alpha)/2}` and
    /// `eta = (1 - d^2)/(1 + d^2)`.
    pub fn to_sphere(&self, exps: &ExponentSet) -> ExtremalParamsSphere {
        let k = 0.5 * (exps.n as f64 + exps.alpha);
        let dd = self.d * self.d;
        ExtremalParamsSphere {
            a: self.c * (1.0 + dd).powf(-k),
            eta: (1.0 - dd) / (1.0 + dd),
        }
    }
}

/// Samples the sphere extremal on the grid of `grid`.
pub fn extremal_sphere(params: &ExtremalParamsSphere, grid: &ZonalFn, exps: &ExponentSet) -> Result<ZonalFn> {
    exps.check_dimension(grid.n, "zonal grid")?;
    ExtremalParamsSphere::new(params.a, params.eta)?;
    grid.with_values(grid.angles.iter().map(|&t| params.eval(exps, t)).collect())
}

/// Samples the `R^n` extremal on the grid of `grid`.
pub fn extremal_rn(params: &ExtremalParamsRn, grid: &RadialFn, exps: &ExponentSet) -> Result<RadialFn> {
    exps.check_dimension(grid.n, "radial grid")?;
    ExtremalParamsRn::new(params.c, params.d)?;
    grid.with_values(grid.radii().into_iter().map(|r| params.eval(exps, r)).collect())
}
