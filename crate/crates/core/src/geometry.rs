//! Stereographic projection, the chordal metric, function lifts between
//! `R^n` and `S^n`, dilations and Kelvin transforms.
//!
//! The lift of a radial function places the log-radius node `u` at polar
//! angle `theta = 2 atan(e^u)`. The pulled-back surface element is
//! `|S^{n-1}| sin^n(theta) du`, so the lifted grid carries the weights
//! `h |S^{n-1}| sin^n(theta_k)` and quasi-norms transport term by term.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result, RhlsError};
use crate::exponents::ExponentSet;
use crate::functions::{RadialFn, ZonalFn};
use crate::interp::UniformPchip;
use crate::special::sphere_area;

fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// `R^n -> S^n`: `xi^j = 2x^j/(1+|x|^2)`, `xi^{n+1} = (1-|x|^2)/(1+|x|^2)`.
pub fn stereo_lift(x: &[f64]) -> Vec<f64> {
    let s = norm2(x);
    let d = 1.0 + s;
    let mut xi: Vec<f64> = x.iter().map(|v| 2.0 * v / d).collect();
    xi.push((1.0 - s) / d);
    xi
}

/// Inverse of [`stereo_lift`]; rejects the south pole.
pub fn stereo_drop(xi: &[f64]) -> Result<Vec<f64>> {
    let Some((&last, head)) = xi.split_last() else {
        return Err(RhlsError::DimensionMismatch("empty point".into()));
    };
    let d = 1.0 + last;
    if !(d > 0.0) {
        return domain("xi^{n+1}", last, "a value > -1 (the south pole has no preimage)");
    }
    Ok(head.iter().map(|v| v / d).collect())
}

/// `|S(x) - S(y)| = 2|x-y| / sqrt((1+|x|^2)(1+|y|^2))`.
pub fn chordal(x: &[f64], y: &[f64]) -> f64 {
    let diff: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
    2.0 * diff.sqrt() / ((1.0 + norm2(x)) * (1.0 + norm2(y))).sqrt()
}

/// Euclidean distance in `R^{n+1}`.
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KelvinParams {
    pub center: Vec<f64>,
    pub lambda: f64,
}

impl KelvinParams {
    pub fn new(center: Vec<f64>, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return domain("lambda", lambda, "a finite positive radius");
        }
        Ok(KelvinParams { center, lambda })
    }

    pub fn centered(n: usize, lambda: f64) -> Result<Self> {
        KelvinParams::new(vec![0.0; n], lambda)
    }
}

/// `xi^{x,lambda} = x + lambda^2 (xi - x)/|xi - x|^2`.
pub fn kelvin_point(xi: &[f64], kp: &KelvinParams) -> Result<Vec<f64>> {
    if xi.len() != kp.center.len() {
        return Err(RhlsError::DimensionMismatch(format!(
            "point of length {} against center of length {}",
            xi.len(),
            kp.center.len()
        )));
    }
    let d2: f64 = xi.iter().zip(&kp.center).map(|(a, b)| (a - b) * (a - b)).sum();
    if d2 == 0.0 {
        return Err(RhlsError::Degenerate("the Kelvin center has no image".into()));
    }
    let s = kp.lambda * kp.lambda / d2;
    Ok(xi.iter().zip(&kp.center).map(|(a, c)| c + s * (a - c)).collect())
}

/// Lift with conformal weight `((1+r^2)/2)^{power}`.
pub fn lift_with_power(f: &RadialFn, power: f64) -> Result<ZonalFn> {
    let n = f.n;
    let c = f.h * sphere_area(n - 1);
    let mut angles = Vec::with_capacity(f.len());
    let mut weights = Vec::with_capacity(f.len());
    let mut values = Vec::with_capacity(f.len());
    for (k, &v) in f.values.iter().enumerate() {
        let u = f.log_radius(k);
        let th = 2.0 * u.exp().atan();
        // (1+r^2)/2 = 1/(1 + cos theta), with 1 + cos theta = 2/(1 + r^2)
        let half = 0.5 * (1.0 + (2.0 * u).exp());
        angles.push(th);
        weights.push(c * th.sin().powi(n as i32));
        values.push(half.powf(power) * v);
    }
    ZonalFn::new(n, angles, weights, values)
}

/// Recovers the log grid of a lifted zonal function and applies the
/// weight `(2/(1+r^2))^{power}`.
pub fn drop_with_power(big_f: &ZonalFn, power: f64) -> Result<RadialFn> {
    let m = big_f.len();
    if m < 2 {
        return Err(RhlsError::InvalidGrid("need at least two nodes".into()));
    }
    let u: Vec<f64> = big_f.angles.iter().map(|t| (0.5 * t).tan().ln()).collect();
    let h = (u[m - 1] - u[0]) / (m - 1) as f64;
    for (k, &uk) in u.iter().enumerate() {
        if (uk - (u[0] + k as f64 * h)).abs() > 1e-8 * h.max(1.0) {
            return Err(RhlsError::InvalidGrid(
                "zonal grid is not the lift of a uniform log-radius grid".into(),
            ));
        }
    }
    let values = u
        .iter()
        .zip(&big_f.values)
        .map(|(&uk, &v)| (2.0 / (1.0 + (2.0 * uk).exp())).powf(power) * v)
        .collect();
    RadialFn::new(big_f.n, u[0], h, values)
}

/// `f -> F` with `F(xi) = ((1+|x|^2)/2)^{n/p} f(x)`, the weight that makes
/// `||F||_p = ||f||_p`.
pub fn lift_function(f: &RadialFn, exps: &ExponentSet) -> Result<ZonalFn> {
    exps.check_dimension(f.n, "radial function")?;
    lift_with_power(f, exps.n as f64 / exps.p)
}

pub fn drop_function(big_f: &ZonalFn, exps: &ExponentSet) -> Result<RadialFn> {
    exps.check_dimension(big_f.n, "zonal function")?;
    drop_with_power(big_f, exps.n as f64 / exps.p)
}

/// Lift of a potential: the weight exponent is `n/q`, which makes
/// `||G||_q = ||g||_q`.
pub fn lift_potential(g: &RadialFn, exps: &ExponentSet) -> Result<ZonalFn> {
    exps.check_dimension(g.n, "radial function")?;
    lift_with_power(g, exps.n as f64 / exps.q)
}

pub fn drop_potential(big_g: &ZonalFn, exps: &ExponentSet) -> Result<RadialFn> {
    exps.check_dimension(big_g.n, "zonal function")?;
    drop_with_power(big_g, exps.n as f64 / exps.q)
}

/// Result of [`dilate`].
#[derive(Debug, Clone)]
pub struct Dilation {
    pub f: RadialFn,
    /// Fraction of `int g^p` that moved off the grid.
    pub lost_fraction: f64,
    /// Relative change of `int g^p` between two cubic interpolants; zero
    /// for exact shifts.
    pub interpolation_estimate: f64,
    pub exact_shift: bool,
}

/// `g^lambda(x) = lambda^{-n/p} g(x/lambda)`.
///
/// In the profile `G(u) = e^{un/p} g(e^u)` this is the shift
/// `G(u) -> G(u - ln lambda)`. Exact when `ln lambda` is a multiple of the
/// step; otherwise monotone cubic interpolation (of `ln G` when `G > 0`).
pub fn dilate(g: &RadialFn, lam: f64, exps: &ExponentSet) -> Result<Dilation> {
    exps.check_dimension(g.n, "radial function")?;
    if !(lam > 0.0) || !lam.is_finite() {
        return domain("lam", lam, "a finite positive dilation factor");
    }
    let a = g.n as f64 / exps.p;
    let m = g.len();
    let u = g.log_radii();
    let profile: Vec<f64> = u.iter().zip(&g.values).map(|(uk, v)| (a * uk).exp() * v).collect();
    let mass: f64 = profile.iter().map(|v| v.powf(exps.p)).sum();
    let shift = lam.ln();
    let steps = shift / g.h;
    let exact = (steps - steps.round()).abs() < 1e-9;

    let mut lost = 0.0;
    if exact {
        let s = steps.round() as i64;
        let scale = lam.powf(-a);
        let mut values = vec![0.0; m];
        for (k, &pk) in profile.iter().enumerate() {
            let j = k as i64 + s;
            if j >= 0 && (j as usize) < m {
                values[j as usize] = if s == 0 { g.values[k] } else { scale * g.values[k] };
            } else {
                lost += pk.powf(exps.p);
            }
        }
        return Ok(Dilation {
            f: g.with_values(values)?,
            lost_fraction: if mass > 0.0 { lost / mass } else { 0.0 },
            interpolation_estimate: 0.0,
            exact_shift: true,
        });
    }

    let positive = profile.iter().all(|v| *v > 0.0);
    let data: Vec<f64> = if positive {
        profile.iter().map(|v| v.ln()).collect()
    } else {
        profile.clone()
    };
    let interp = UniformPchip::new(g.u0, g.h, data);
    let back = |x: f64| if positive { x.exp() } else { x.max(0.0) };
    let mut shifted = vec![0.0; m];
    let mut alt_mass = 0.0;
    let mut new_mass = 0.0;
    for (k, uk) in u.iter().enumerate() {
        if let (Some(v), Some(w)) = (interp.eval(uk - shift), interp.eval_catmull_rom(uk - shift)) {
            shifted[k] = back(v);
            new_mass += shifted[k].powf(exps.p);
            alt_mass += back(w).powf(exps.p);
        }
    }
    // Mass whose source lies inside the grid but lands outside it.
    for (k, uk) in u.iter().enumerate() {
        let target = uk + shift;
        if target < g.u0 || target > u[m - 1] {
            lost += profile[k].powf(exps.p);
        }
    }
    let values = u.iter().zip(&shifted).map(|(uk, v)| (-a * uk).exp() * v).collect();
    Ok(Dilation {
        f: g.with_values(values)?,
        lost_fraction: if mass > 0.0 { lost / mass } else { 0.0 },
        interpolation_estimate: if new_mass > 0.0 {
            (new_mass - alt_mass).abs() / new_mass
        } else {
            0.0
        },
        exact_shift: false,
    })
}

/// Kelvin transform about the origin of a radial function,
/// `w_lambda(x) = (lambda/|x|)^{n-alpha} w(lambda^2 x/|x|^2)`.
///
/// The inversion `u -> 2 ln(lambda) - u` maps the log grid onto a reflected
/// uniform grid with the same step, so the result is exact: it lives on
/// that reflected grid.
pub fn kelvin_transform(w: &RadialFn, kp: &KelvinParams, exps: &ExponentSet) -> Result<RadialFn> {
    exps.check_dimension(w.n, "radial function")?;
    if kp.center.len() != w.n {
        return Err(RhlsError::DimensionMismatch(format!(
            "center has length {} in dimension {}",
            kp.center.len(),
            w.n
        )));
    }
    if kp.center.iter().any(|c| *c != 0.0) {
        return Err(RhlsError::InvalidGrid(
            "radial Kelvin transforms need the center at the origin".into(),
        ));
    }
    let m = w.len();
    let ll = kp.lambda.ln();
    let u_last = w.log_radius(m - 1);
    let u0 = 2.0 * ll - u_last;
    let power = w.n as f64 - exps.alpha;
    let values = (0..m)
        .map(|k| {
            let s = u0 + k as f64 * w.h;
            (power * (ll - s)).exp() * w.values[m - 1 - k]
        })
        .collect();
    RadialFn::new(w.n, u0, w.h, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lift_examples() {
        let p = stereo_lift(&[0.0, 0.0]);
        assert_eq!(p, vec![0.0, 0.0, 1.0]);
        let p = stereo_lift(&[1.0]);
        assert!((p[0] - 1.0).abs() < 1e-15 && p[1].abs() < 1e-15);
        let q = stereo_lift(&[0.6, -0.8]);
        assert!(q[2].abs() < 1e-15);
    }

    #[test]
    fn drop_examples() {
        assert_eq!(stereo_drop(&[0.0, 1.0]).unwrap(), vec![0.0]);
        let x = stereo_drop(&[1.0, 0.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-15);
        assert!(stereo_drop(&[0.0, -1.0]).is_err());
    }

    #[test]
    fn chordal_examples() {
        assert_eq!(chordal(&[0.3], &[0.3]), 0.0);
        assert!((chordal(&[1.0], &[-1.0]) - 2.0).abs() < 1e-15);
        assert!((chordal(&[0.0], &[1e9]) - 2.0).abs() < 1e-9);
    }

    #[test]
    fn kelvin_point_examples() {
        let kp = KelvinParams::new(vec![0.0, 0.0], 1.0).unwrap();
        let p = kelvin_point(&[2.0, 0.0], &kp).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-15 && p[1] == 0.0);
        let on = [0.6, 0.8];
        let q = kelvin_point(&on, &kp).unwrap();
        assert!((q[0] - 0.6).abs() < 1e-15 && (q[1] - 0.8).abs() < 1e-15);
        assert!(kelvin_point(&[0.0, 0.0], &kp).is_err());
        let kp = KelvinParams::new(vec![1.0, -2.0], 0.7).unwrap();
        let x = [0.3, 0.4];
        let back = kelvin_point(&kelvin_point(&x, &kp).unwrap(), &kp).unwrap();
        assert!((back[0] - x[0]).abs() < 1e-12 && (back[1] - x[1]).abs() < 1e-12);
        assert!(KelvinParams::new(vec![0.0], 0.0).is_err());
    }

    #[test]
    fn constant_lift_norm() {
        // F = 1 drops to (2/(1+r^2))^{(n+alpha)/2}; for (1, 2) its
        // 2/3-power integrates to 2 pi.
        let e = ExponentSet::critical(1, 2.0).unwrap();
        let f = RadialFn::sample(1, 24.0, 1024, |r| (2.0 / (1.0 + r * r)).powf(1.5)).unwrap();
        let big = lift_function(&f, &e).unwrap();
        for v in &big.values {
            assert!((v - 1.0).abs() < 1e-13);
        }
        let s: f64 = f.weights().iter().zip(&f.values).map(|(w, v)| w * v.powf(e.p)).sum();
        assert!((s - 2.0 * std::f64::consts::PI).abs() < 1e-8);
    }

    #[test]
    fn lift_drop_round_trip() {
        let e = ExponentSet::critical(2, 3.0).unwrap();
        let f = RadialFn::sample(2, 6.0, 64, |r| (-r).exp() + 0.1).unwrap();
        let g = drop_function(&lift_function(&f, &e).unwrap(), &e).unwrap();
        assert!((g.u0 - f.u0).abs() < 1e-12 && (g.h - f.h).abs() < 1e-12);
        for (a, b) in f.values.iter().zip(&g.values) {
            assert!((a - b).abs() <= 1e-12 * a);
        }
    }

    #[test]
    fn kelvin_double_is_identity() {
        let e = ExponentSet::critical(1, 3.0).unwrap();
        let w = RadialFn::sample(1, 5.0, 50, |r| 1.0 + r.sin().abs()).unwrap();
        let kp = KelvinParams::centered(1, 1.7).unwrap();
        let once = kelvin_transform(&w, &kp, &e).unwrap();
        let twice = kelvin_transform(&once, &kp, &e).unwrap();
        assert!((twice.u0 - w.u0).abs() < 1e-12);
        for (a, b) in w.values.iter().zip(&twice.values) {
            assert!((a - b).abs() <= 1e-12 * a);
        }
        let off = KelvinParams::new(vec![1.0], 1.0).unwrap();
        assert!(kelvin_transform(&w, &off, &e).is_err());
    }

    #[test]
    fn dilate_identity_and_exact_shift() {
        let e = ExponentSet::critical(1, 2.0).unwrap();
        let g = RadialFn::sample(1, 12.0, 512, |r| (1.0 + r * r).powf(-1.5)).unwrap();
        let d = dilate(&g, 1.0, &e).unwrap();
        assert!(d.exact_shift);
        assert_eq!(d.f.values, g.values);
        let lam = (8.0 * g.h).exp();
        let d = dilate(&g, lam, &e).unwrap();
        assert!(d.exact_shift);
        let k = 600;
        let r = g.log_radius(k).exp();
        let want = lam.powf(-1.0 / e.p) * (1.0 + (r / lam).powi(2)).powf(-1.5);
        assert!((d.f.values[k] - want).abs() <= 1e-12 * want);
    }
}
