//! The potential split at distance `rho`: the near part integrates over
//! `|y - x| <= rho`, the far part over the rest.
//!
//! In log-radius coordinates `|x - y|^2 = 2 e^{u+v} (cosh(u-v) - cos theta)`,
//! so the near part keeps the polar angles with
//! `cosh(u-v) - cos theta <= rho^2 / (2 e^{u+v})`. The far part is the
//! termwise complement, so `near + far` reproduces the full operator.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::exponents::ExponentSet;
use crate::functions::RadialFn;
use crate::operators::radial::{bump, RadialOperator, BUMP_SIGMA};
use crate::quadrature::adaptive;
use crate::special::sphere_area;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Part {
    Near,
    Far,
}

/// Both parts and the full potential on one grid.
#[derive(Debug, Clone)]
pub struct SplitOutput {
    pub near: RadialFn,
    pub far: RadialFn,
    pub full: RadialFn,
    /// `max_i |near + far - full| / full` before the parts are clipped.
    pub additivity_residual: f64,
    /// Smallest value of either part before clipping at zero.
    pub min_part: f64,
}

/// Angular integral restricted to `cosh w - cos theta <= c`.
fn zn_near(n: usize, alpha: f64, w: f64, c: f64) -> f64 {
    let beta = 0.5 * (alpha - n as f64);
    let sh = (0.5 * w).sinh();
    let cm1 = 2.0 * sh * sh;
    if n == 1 {
        let mut z = 0.0;
        if cm1 <= c {
            z += cm1.powf(beta);
        }
        if cm1 + 2.0 <= c {
            z += (cm1 + 2.0).powf(beta);
        }
        return z;
    }
    let gap = c - cm1;
    if gap <= 0.0 {
        return 0.0;
    }
    // 1 - cos(theta_max) = gap
    let theta_max = if gap >= 2.0 {
        PI
    } else {
        2.0 * (0.5 * gap).sqrt().asin()
    };
    let nm2 = (n - 2) as i32;
    let r = adaptive(
        |th: f64| {
            let s = (0.5 * th).sin();
            (cm1 + 2.0 * s * s).powf(beta) * th.sin().powi(nm2)
        },
        0.0,
        theta_max,
        1e-13,
        0.0,
    );
    sphere_area(n - 2) * r.value
}

fn near_kernel(exps: &ExponentSet, rho: f64, u: f64, v: f64) -> f64 {
    let beta = 0.5 * exps.kernel_power();
    let gamma = exps.n as f64 / exps.q + beta;
    let c = rho * rho / (2.0 * (u + v).exp());
    let w = u - v;
    (beta * std::f64::consts::LN_2 + gamma * w).exp() * zn_near(exps.n, exps.alpha, w, c)
}

/// Splits `I f` at distance `rho` on `f`'s grid.
pub fn split_both(f: &RadialFn, rho: f64, exps: &ExponentSet) -> Result<SplitOutput> {
    if !(rho > 0.0) || !rho.is_finite() {
        return domain("rho", rho, "a finite positive radius");
    }
    let op = RadialOperator::for_grid(f, exps)?;
    let full = op.apply(f)?;
    let nf = f.n as f64;
    let (a, b) = (nf / exps.p, nf / exps.q);
    let u = f.log_radii();
    let m = f.len();
    let h = f.h;
    let profile: Vec<f64> = u.iter().zip(&f.values).map(|(uk, v)| (a * uk).exp() * v).collect();
    let kmax = (10.0 * BUMP_SIGMA / h).ceil() as i64;
    let rows: Vec<(f64, f64)> = (0..m)
        .into_par_iter()
        .map(|i| {
            let ui = u[i];
            let mut near = 0.0;
            let mut far = 0.0;
            for k in 0..m {
                if profile[k] == 0.0 {
                    continue;
                }
                let full_k = op.kernel_at(i, k);
                let near_k = near_kernel(exps, rho, ui, u[k]).min(full_k);
                near += near_k * profile[k];
                far += (full_k - near_k) * profile[k];
            }
            // Kink correction restricted to the near region.
            let kern = |x: f64| near_kernel(exps, rho, ui, ui - x) * bump(x);
            let reach = 10.0 * BUMP_SIGMA;
            let exact =
                adaptive(kern, -reach, 0.0, 1e-12, 1e-300).value + adaptive(kern, 0.0, reach, 1e-12, 1e-300).value;
            let discrete: f64 = (-kmax..=kmax).map(|k| kern(k as f64 * h)).sum::<f64>() * h;
            let delta_near = exact - discrete;
            let near_i = h * near + delta_near * profile[i];
            let far_i = h * far + (op.delta - delta_near) * profile[i];
            let scale = (-b * ui).exp();
            (near_i * scale, far_i * scale)
        })
        .collect();
    let min_part = rows.iter().map(|(x, y)| x.min(*y)).fold(f64::INFINITY, f64::min);
    let near_v: Vec<f64> = rows.iter().map(|r| r.0.max(0.0)).collect();
    let far_v: Vec<f64> = rows.iter().map(|r| r.1.max(0.0)).collect();
    // Measured before clipping: the parts split each term of the full sum.
    let additivity_residual = rows
        .iter()
        .zip(&full.f.values)
        .map(|((x, y), z)| if *z > 0.0 { (x + y - z).abs() / z } else { (x + y).abs() })
        .fold(0.0, f64::max);
    Ok(SplitOutput {
        near: f.with_values(near_v)?,
        far: f.with_values(far_v)?,
        full: full.f,
        additivity_residual,
        min_part,
    })
}

pub fn split_operator(f: &RadialFn, rho: f64, part: Part, exps: &ExponentSet) -> Result<RadialFn> {
    let s = split_both(f, rho, exps)?;
    Ok(match part {
        Part::Near => s.near,
        Part::Far => s.far,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parts_add_up() {
        let e = ExponentSet::critical(1, 2.0).unwrap();
        let f = RadialFn::sample(1, 6.0, 128, |r| if r <= 1.0 { 1.0 } else { (-(r - 1.0)).exp() }).unwrap();
        let s = split_both(&f, 1.0, &e).unwrap();
        assert!(s.additivity_residual < 1e-10, "{}", s.additivity_residual);
        assert!(s.min_part > -1e-12 * s.full.values.iter().fold(0.0f64, |a, b| a.max(*b)));
    }

    #[test]
    fn limits_in_rho() {
        let e = ExponentSet::critical(1, 2.0).unwrap();
        let f = RadialFn::sample(1, 4.0, 64, |r| (1.0 + r * r).powf(-1.5)).unwrap();
        let big = split_both(&f, 1e12, &e).unwrap();
        for (a, b) in big.near.values.iter().zip(&big.full.values) {
            assert!((a - b).abs() <= 1e-10 * b);
        }
        let small = split_both(&f, 1e-9, &e).unwrap();
        for (a, b) in small.far.values.iter().zip(&small.full.values) {
            assert!((a - b).abs() <= 1e-6 * b);
        }
    }

    #[test]
    fn two_dimensional_near_kernel_saturates() {
        let e = ExponentSet::critical(2, 3.0).unwrap();
        let z = zn_near(2, 3.0, 0.4, 1e9);
        let full = crate::special::zn_kernel(2, 3.0, 0.4).unwrap();
        assert!((z - full).abs() <= 1e-12 * full);
        assert_eq!(zn_near(2, 3.0, 0.4, 0.0), 0.0);
        let _ = e;
    }
}
