//! Exponent bookkeeping for the reversed inequality.
//!
//! For a dimension `n` and an order `alpha > n`, the integrability exponent
//! `p` of the input determines everything else: the output exponent `q`
//! through `1/q = 1/p - alpha/n`, the dual exponent `t` through
//! `1/p + 1/t + lambda/n = 2` with `lambda = n - alpha`, and the powers
//! `theta = 1/(p-1)`, `kappa = q - 1` of the Euler-Lagrange system.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result, RhlsError};

const RELATION_TOL: f64 = 1e-12;

/// The complete family of exponents attached to `(n, alpha, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentSet {
    pub n: usize,
    pub alpha: f64,
    pub lambda: f64,
    pub p: f64,
    pub t: f64,
    pub q: f64,
    pub theta: f64,
    pub kappa: f64,
}

fn check_order(n: usize, alpha: f64) -> Result<()> {
    if n == 0 {
        return domain("n", 0.0, "an integer dimension >= 1");
    }
    if !alpha.is_finite() || alpha <= n as f64 {
        return domain("alpha", alpha, "a finite real with alpha > n");
    }
    Ok(())
}

impl ExponentSet {
    /// Exponents of the conformally invariant case `p = t = 2n/(n+alpha)`.
    pub fn critical(n: usize, alpha: f64) -> Result<Self> {
        check_order(n, alpha)?;
        let nf = n as f64;
        let p = 2.0 * nf / (nf + alpha);
        let q = 2.0 * nf / (nf - alpha);
        let theta = (nf + alpha) / (nf - alpha);
        let set = ExponentSet {
            n,
            alpha,
            lambda: nf - alpha,
            p,
            t: p,
            q,
            theta,
            kappa: theta,
        };
        set.validate()?;
        Ok(set)
    }

    /// Exponents for an arbitrary `p` in `(n/alpha, 1)`.
    pub fn general(n: usize, alpha: f64, p: f64) -> Result<Self> {
        check_order(n, alpha)?;
        let nf = n as f64;
        if !(p > nf / alpha && p < 1.0) {
            return domain("p", p, "n/alpha < p < 1");
        }
        let lambda = nf - alpha;
        let q = 1.0 / (1.0 / p - alpha / nf);
        let t = 1.0 / (2.0 - 1.0 / p - lambda / nf);
        let set = ExponentSet {
            n,
            alpha,
            lambda,
            p,
            t,
            q,
            theta: 1.0 / (p - 1.0),
            kappa: q - 1.0,
        };
        set.validate()?;
        Ok(set)
    }

    /// Re-derives every dependent exponent and checks the sign constraints.
    pub fn validate(&self) -> Result<()> {
        let nf = self.n as f64;
        let bad = |what: String| Err(RhlsError::InconsistentExponents(what));
        if self.n == 0 || self.alpha <= nf {
            return bad(format!("need alpha > n >= 1, got n={}, alpha={}", self.n, self.alpha));
        }
        if (self.lambda - (nf - self.alpha)).abs() > RELATION_TOL {
            return bad(format!("lambda = {} but n - alpha = {}", self.lambda, nf - self.alpha));
        }
        let conj = 1.0 / self.p + 1.0 / self.t + self.lambda / nf - 2.0;
        if conj.abs() > RELATION_TOL {
            return bad(format!("1/p + 1/t + lambda/n - 2 = {conj:e}"));
        }
        let sob = 1.0 / self.q - (1.0 / self.p - self.alpha / nf);
        if sob.abs() > RELATION_TOL {
            return bad(format!("1/q - 1/p + alpha/n = {sob:e}"));
        }
        if (self.theta - 1.0 / (self.p - 1.0)).abs() > RELATION_TOL * self.theta.abs().max(1.0) {
            return bad(format!("theta = {} but 1/(p-1) = {}", self.theta, 1.0 / (self.p - 1.0)));
        }
        if (self.kappa - (self.q - 1.0)).abs() > RELATION_TOL * self.kappa.abs().max(1.0) {
            return bad(format!("kappa = {} but q - 1 = {}", self.kappa, self.q - 1.0));
        }
        let signs_ok = self.lambda < 0.0
            && self.q < 0.0
            && self.theta < 0.0
            && self.kappa < 0.0
            && self.p > 0.0
            && self.p < 1.0
            && self.t > 0.0
            && self.t < 1.0;
        if !signs_ok {
            return bad(format!("sign constraints violated: {self:?}"));
        }
        Ok(())
    }

    /// True at the conformal exponents `p = t = 2n/(n+alpha)`.
    pub fn is_critical(&self) -> bool {
        let nf = self.n as f64;
        (self.p - 2.0 * nf / (nf + self.alpha)).abs() < 1e-12
    }

    /// `alpha - n`, the (positive) power of the distance in the kernel.
    pub fn kernel_power(&self) -> f64 {
        self.alpha - self.n as f64
    }

    pub fn critical_required(&self) -> Result<()> {
        if self.is_critical() {
            Ok(())
        } else {
            Err(RhlsError::InconsistentExponents(format!(
                "operation needs the conformal exponents, got p = {}",
                self.p
            )))
        }
    }

    pub(crate) fn check_dimension(&self, n: usize, what: &str) -> Result<()> {
        if self.n == n {
            Ok(())
        } else {
            Err(RhlsError::DimensionMismatch(format!(
                "{what} lives in dimension {n} but exponents are for n = {}",
                self.n
            )))
        }
    }
}
