//! The Euler-Lagrange system
//! `u = I[v^kappa]`, `v = I[u^theta]` for radial `u, v` on `R^n`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result, RhlsError};
use crate::exponents::ExponentSet;
use crate::functions::RadialFn;
use crate::operators::RadialOperator;
use crate::quadrature::adaptive_to_infinity;
use crate::report::{Provenance, VerificationReport};
use crate::special::sphere_area;

/// Residual accepted for a solution pair.
pub const EL_TOL: f64 = 1e-3;

/// A candidate solution pair on one log grid.
#[derive(Debug, Clone)]
pub struct ELPair {
    pub u: RadialFn,
    pub v: RadialFn,
    pub exps: ExponentSet,
    /// Boundary values of `r^{n-alpha} u` and `r^{n-alpha} v`.
    pub a: f64,
    pub b: f64,
}

impl ELPair {
    pub fn new(u: RadialFn, v: RadialFn, exps: &ExponentSet) -> Result<Self> {
        exps.critical_required()?;
        exps.check_dimension(u.n, "u")?;
        if !u.same_grid(&v) {
            return Err(RhlsError::DimensionMismatch("u and v live on different grids".into()));
        }
        if u.values.iter().chain(&v.values).any(|x| !(*x > 0.0)) {
            return Err(RhlsError::Degenerate("u and v must be positive on the grid".into()));
        }
        let last = u.len() - 1;
        let w = ((exps.n as f64 - exps.alpha) * u.log_radius(last)).exp();
        let (a, b) = (w * u.values[last], w * v.values[last]);
        Ok(ELPair {
            u,
            v,
            exps: *exps,
            a,
            b,
        })
    }

    /// The closed-form pair `c_i (|x|^2 + d^2)^{(alpha-n)/2}` on `grid`.
    pub fn closed_form(c1: f64, c2: f64, d: f64, grid: &RadialFn, exps: &ExponentSet) -> Result<Self> {
        let s = exps.alpha - exps.n as f64;
        let shape = |r: f64| (r * r + d * d).powf(0.5 * s);
        let u = grid.with_values(grid.radii().into_iter().map(|r| c1 * shape(r)).collect())?;
        let v = grid.with_values(grid.radii().into_iter().map(|r| c2 * shape(r)).collect())?;
        ELPair::new(u, v, exps)
    }

    /// `C` in `(1 + r^{alpha-n})/C <= w(r) <= C (1 + r^{alpha-n})`, the
    /// smallest value that works for both functions on the grid.
    pub fn two_sided_bound(&self) -> f64 {
        let s = self.exps.alpha - self.exps.n as f64;
        let mut c: f64 = 1.0;
        for (k, r) in self.u.radii().into_iter().enumerate() {
            let base = 1.0 + r.powf(s);
            for w in [self.u.values[k], self.v.values[k]] {
                c = c.max(w / base).max(base / w);
            }
        }
        c
    }
}

/// `I[w^power]` on `w`'s grid.
pub fn el_apply(w: &RadialFn, power: f64, exps: &ExponentSet) -> Result<RadialFn> {
    let op = RadialOperator::for_grid(w, exps)?;
    Ok(op.apply(&w.map(|x| x.powf(power))?)?.f)
}

fn max_rel(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs() / y).fold(0.0, f64::max)
}

/// Max relative residual of both equations.
pub fn el_residual(pair: &ELPair) -> Result<VerificationReport> {
    let e = &pair.exps;
    e.critical_required()?;
    if (e.kappa - e.theta).abs() > 1e-12 {
        return Err(RhlsError::InconsistentExponents("kappa and theta differ".into()));
    }
    let op = RadialOperator::for_grid(&pair.u, e)?;
    let u_hat = op.apply(&pair.v.map(|x| x.powf(e.kappa))?)?;
    let v_hat = op.apply(&pair.u.map(|x| x.powf(e.theta))?)?;
    let ru = max_rel(&u_hat.f.values, &pair.u.values);
    let rv = max_rel(&v_hat.f.values, &pair.v.values);
    Ok(VerificationReport::new("el_residual", Provenance::IndependentRoute)
        .input("n", e.n as f64)
        .input("alpha", e.alpha)
        .computed("residual_u", ru)
        .computed("residual_v", rv)
        .computed(
            "truncation_estimate",
            u_hat.truncation_estimate.max(v_hat.truncation_estimate),
        )
        .judge(0.0, ru.max(rv), EL_TOL))
}

/// `(c1, c2)` for the pair `c_i (|x|^2 + d^2)^{(alpha-n)/2}`.
///
/// At `y = 0` both equations read `c_1 d^s = c_2^kappa A`, `c_2 d^s = c_1^kappa A`
/// with `s = alpha - n` and `A = |S^{n-1}| int_0^inf r^{alpha-1} (r^2+d^2)^{-(n+alpha)/2} dr`.
/// In logarithms this is linear; since `kappa != -1` the unique solution
/// has `c_1 = c_2 = (A d^{-s})^{1/(1-kappa)}`. `A` comes from adaptive
/// quadrature.
pub fn derive_el_constants(d: f64, exps: &ExponentSet) -> Result<(f64, f64)> {
    exps.critical_required()?;
    if !(d > 0.0) || !d.is_finite() {
        return domain("d", d, "d > 0");
    }
    let (n, alpha) = (exps.n as f64, exps.alpha);
    let k = 0.5 * (n + alpha);
    let integrand = |r: f64| {
        if r == 0.0 {
            0.0
        } else {
            r.powf(alpha - 1.0) * (r * r + d * d).powf(-k)
        }
    };
    // Split at d so the peak is resolved on both sides.
    let head = crate::quadrature::adaptive(integrand, 0.0, d, 1e-13, 0.0);
    let tail = adaptive_to_infinity(integrand, d, 1e-13, 0.0);
    if !(head.converged && tail.converged) {
        return Err(RhlsError::NoConvergence("amplitude integral did not converge".into()));
    }
    let amp = sphere_area(exps.n - 1) * (head.value + tail.value);
    let c = (amp * d.powf(n - alpha)).powf(1.0 / (1.0 - exps.kappa));
    Ok((c, c))
}

/// Boundary limits against the integrals they should equal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticCoeffs {
    /// `r^{n-alpha} u(r)` at the outer end of the grid.
    pub a_limit: f64,
    pub b_limit: f64,
    /// `int v^kappa` and `int u^theta`.
    pub a_integral: f64,
    pub b_integral: f64,
    /// Relative change of `r^{n-alpha} u` (resp. `v`) over the last decade.
    pub tail_slope_u: f64,
    pub tail_slope_v: f64,
    /// `int (1 + |y|^{alpha-n}) u^theta`.
    pub weighted_integral: f64,
}

impl AsymptoticCoeffs {
    pub fn max_relative_gap(&self) -> f64 {
        let ga = (self.a_limit - self.a_integral).abs() / self.a_integral;
        let gb = (self.b_limit - self.b_integral).abs() / self.b_integral;
        ga.max(gb)
    }
}

pub fn asymptotic_coeffs(pair: &ELPair) -> Result<AsymptoticCoeffs> {
    let e = &pair.exps;
    let u = &pair.u;
    let m = u.len();
    let decade = (10f64.ln() / u.h).round() as usize;
    if decade == 0 || decade >= m {
        return Err(RhlsError::InvalidGrid("grid does not span a decade".into()));
    }
    let s = e.n as f64 - e.alpha;
    let scaled = |w: &RadialFn, k: usize| (s * w.log_radius(k)).exp() * w.values[k];
    let slope = |w: &RadialFn| {
        let (x, y) = (scaled(w, m - 1), scaled(w, m - 1 - decade));
        (x - y).abs() / x
    };
    let (tail_slope_u, tail_slope_v) = (slope(u), slope(&pair.v));
    if tail_slope_u.max(tail_slope_v) >= 1e-4 {
        return Err(RhlsError::NoConvergence(format!(
            "tail has not stabilized: relative slope {:e} over the last decade",
            tail_slope_u.max(tail_slope_v)
        )));
    }
    let w = u.weights();
    let a_integral: f64 = pair.v.values.iter().zip(&w).map(|(x, wk)| x.powf(e.kappa) * wk).sum();
    let b_integral: f64 = u.values.iter().zip(&w).map(|(x, wk)| x.powf(e.theta) * wk).sum();
    let weighted_integral: f64 = u
        .values
        .iter()
        .zip(&w)
        .zip(u.radii())
        .map(|((x, wk), r)| (1.0 + r.powf(-s)) * x.powf(e.theta) * wk)
        .sum();
    Ok(AsymptoticCoeffs {
        a_limit: scaled(u, m - 1),
        b_limit: scaled(&pair.v, m - 1),
        a_integral,
        b_integral,
        tail_slope_u,
        tail_slope_v,
        weighted_integral,
    })
}
