//! The potential `I f(x) = int_{R^n} |x - y|^{alpha-n} f(y) dy` for radial
//! `f`, computed as a convolution in logarithmic radius.
//!
//! With `F(u) = e^{un/p} f(e^u)` and `H(u) = e^{un/q} (I f)(e^u)`,
//! `H(u) = int L(u - v) F(v) dv` where `L` is the kernel of
//! [`crate::special::ln_kernel`]. `L` has a `|w|^{alpha-n}` kink at `w = 0`;
//! the trapezoid sum is corrected there by a local term `delta F_i`, with
//! `delta` the exact-minus-discrete integral of `L` against a unit
//! Gaussian bump.

use rayon::prelude::*;

use crate::error::{Result, RhlsError};
use crate::exponents::ExponentSet;
use crate::functions::RadialFn;
use crate::quadrature::adaptive;
use crate::special::ln_kernel_unchecked;

/// Width of the bump used for the kink correction.
pub(crate) const BUMP_SIGMA: f64 = 0.5;
const BUMP_REACH: f64 = 10.0 * BUMP_SIGMA;

pub(crate) fn bump(x: f64) -> f64 {
    (-0.5 * (x / BUMP_SIGMA).powi(2)).exp()
}

/// Exact minus trapezoid integral of `kernel * bump` on the lattice `h Z`.
pub(crate) fn kink_correction<K: Fn(f64) -> f64>(kernel: K, h: f64) -> f64 {
    let f = |x: f64| kernel(x) * bump(x);
    let exact = adaptive(f, -BUMP_REACH, 0.0, 1e-14, 0.0).value + adaptive(f, 0.0, BUMP_REACH, 1e-14, 0.0).value;
    let kmax = (BUMP_REACH / h).ceil() as i64;
    let discrete: f64 = (-kmax..=kmax).map(|k| f(k as f64 * h)).sum::<f64>() * h;
    exact - discrete
}

/// Precomputed convolution for one grid shape.
#[derive(Debug, Clone)]
pub struct RadialOperator {
    pub exps: ExponentSet,
    pub h: f64,
    pub m: usize,
    /// `L(d h)` for `d = -(m-1) ..= m-1`, stored at `d + m - 1`.
    kernel: Vec<f64>,
    pub delta: f64,
}

/// Output of [`RadialOperator::apply`].
#[derive(Debug, Clone)]
pub struct RadialOutput {
    pub f: RadialFn,
    /// Largest estimated relative contribution of input mass beyond the
    /// grid ends (geometric extrapolation of the edge samples).
    pub truncation_estimate: f64,
    pub truncation_warning: bool,
    /// Set when the input vanishes identically; the output is then zero.
    pub degenerate: bool,
}

impl RadialOperator {
    pub fn new(exps: &ExponentSet, h: f64, m: usize) -> Result<Self> {
        exps.validate()?;
        if !(h > 0.0) || m < 2 {
            return Err(RhlsError::InvalidGrid(format!("bad log grid h = {h}, m = {m}")));
        }
        let e = *exps;
        let kernel: Vec<f64> = (0..2 * m - 1)
            .into_par_iter()
            .map(|i| ln_kernel_unchecked(&e, (i as f64 - (m - 1) as f64) * h))
            .collect();
        let delta = kink_correction(|x| ln_kernel_unchecked(&e, x), h);
        Ok(RadialOperator {
            exps: e,
            h,
            m,
            kernel,
            delta,
        })
    }

    pub fn for_grid(f: &RadialFn, exps: &ExponentSet) -> Result<Self> {
        exps.check_dimension(f.n, "radial function")?;
        RadialOperator::new(exps, f.h, f.len())
    }

    /// `L((i - k) h)`.
    pub fn kernel_at(&self, i: usize, k: usize) -> f64 {
        self.kernel[i + self.m - 1 - k]
    }

    /// `H_i = h sum_k L((i-k)h) F_k + delta F_i`.
    pub fn apply_profile(&self, profile: &[f64]) -> Vec<f64> {
        (0..self.m)
            .into_par_iter()
            .map(|i| {
                let s: f64 = (0..self.m).map(|k| self.kernel_at(i, k) * profile[k]).sum();
                self.h * s + self.delta * profile[i]
            })
            .collect()
    }

    pub fn apply(&self, f: &RadialFn) -> Result<RadialOutput> {
        self.exps.check_dimension(f.n, "radial function")?;
        if f.len() != self.m || (f.h - self.h).abs() > 1e-14 * self.h {
            return Err(RhlsError::DimensionMismatch(
                "radial function is not on the operator's grid".into(),
            ));
        }
        let nf = f.n as f64;
        let (a, b) = (nf / self.exps.p, nf / self.exps.q);
        let u = f.log_radii();
        let profile: Vec<f64> = u.iter().zip(&f.values).map(|(uk, v)| (a * uk).exp() * v).collect();
        let degenerate = profile.iter().all(|v| *v == 0.0);
        let big_h = self.apply_profile(&profile);
        let values: Vec<f64> = u
            .iter()
            .zip(&big_h)
            .map(|(uk, v)| ((-b * uk).exp() * v).max(0.0))
            .collect();
        let est = if degenerate {
            0.0
        } else {
            self.truncation_estimate(&profile, &big_h)
        };
        Ok(RadialOutput {
            f: f.with_values(values)?,
            truncation_estimate: est,
            truncation_warning: est > 1e-8,
            degenerate,
        })
    }

    fn truncation_estimate(&self, profile: &[f64], big_h: &[f64]) -> f64 {
        let m = self.m;
        let beta = 0.5 * self.exps.kernel_power();
        let gamma = self.exps.n as f64 / self.exps.q + beta;
        // Kernel growth per step away from the evaluation point is at most
        // e^{(beta + |gamma|) h}.
        let growth = ((beta + gamma.abs()) * self.h).exp();
        let edge = |last: usize, prev: usize| -> Option<(f64, f64)> {
            let fl = profile[last];
            if fl == 0.0 {
                return Some((0.0, 0.0));
            }
            let ratio = if profile[prev] > 0.0 { fl / profile[prev] } else { 1.0 };
            let r = ratio * growth;
            if r >= 1.0 {
                None
            } else {
                Some((fl, r / (1.0 - r)))
            }
        };
        let (Some((fr, gr)), Some((fl, gl))) = (edge(m - 1, m - 2), edge(0, 1)) else {
            return f64::INFINITY;
        };
        (0..m)
            .map(|i| {
                let tail = self.h * (fr * gr * self.kernel_at(i, m - 1) + fl * gl * self.kernel_at(i, 0));
                if big_h[i] > 0.0 {
                    tail / big_h[i]
                } else {
                    0.0
                }
            })
            .fold(0.0, f64::max)
    }
}

/// One-shot `I f` on `f`'s grid.
pub fn radial_operator(f: &RadialFn, exps: &ExponentSet) -> Result<RadialOutput> {
    RadialOperator::for_grid(f, exps)?.apply(f)
}
