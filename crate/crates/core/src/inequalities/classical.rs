//! Reversed Hoelder, converse Young and reversed Minkowski checks.

use crate::error::{domain, Result, RhlsError};
use crate::functions::SampledFn1D;
use crate::norms::lp_quasi_norm;
use crate::report::{Provenance, VerificationReport};

/// Tolerance for checks whose two sides are exact sums.
pub const EXACT_TOL: f64 = 1e-12;
/// Tolerance for checks that compare a continuous theorem with a
/// discretized model.
pub const DISCRETE_TOL: f64 = 1e-3;

/// `int f g >= ||f||_p ||g||_{p'}` for `0 < p < 1`, `p' = p/(p-1) < 0`.
pub fn reversed_holder_check(f: &[f64], g: &[f64], weights: &[f64], p: f64) -> Result<VerificationReport> {
    if !(p > 0.0 && p < 1.0) {
        return domain("p", p, "0 < p < 1");
    }
    if f.len() != g.len() {
        return Err(RhlsError::DimensionMismatch(format!(
            "{} vs {} samples",
            f.len(),
            g.len()
        )));
    }
    let pp = p / (p - 1.0);
    let lhs: f64 = f.iter().zip(g).zip(weights).map(|((a, b), w)| a * b * w).sum();
    let nf = lp_quasi_norm(f, weights, p)?;
    let ng = lp_quasi_norm(g, weights, pp)?;
    Ok(VerificationReport::new("reversed_holder", Provenance::InequalityBound)
        .input("p", p)
        .input("p_conjugate", pp)
        .computed("norm_f", nf)
        .computed("norm_g", ng)
        .degenerate(ng == 0.0)
        .at_least(lhs, nf * ng, EXACT_TOL))
}

/// Nodal values of the periodic convolution of two step functions with
/// common cell width `step`: `(g*h)(k step) = step sum_i g_{k-i-1} h_i`.
/// Between nodes the convolution is linear.
pub fn periodic_convolution_nodes(g: &[f64], h: &[f64], step: f64) -> Vec<f64> {
    let m = g.len();
    (0..m)
        .map(|k| {
            let s: f64 = (0..m).map(|i| g[(k + 2 * m - i - 1) % m] * h[i]).sum();
            step * s
        })
        .collect()
}

/// `int_0^step (a + (b - a) t/step)^r dt` for `a, b > 0`.
fn linear_power_cell(a: f64, b: f64, step: f64, r: f64) -> f64 {
    let x = (b - a) / a;
    if x.abs() < 1e-4 {
        // Series in x keeps full precision when the endpoints nearly agree.
        return step
            * a.powf(r)
            * (1.0 + r * x / 2.0 + r * (r - 1.0) * x * x / 6.0 + r * (r - 1.0) * (r - 2.0) * x.powi(3) / 24.0);
    }
    if (r + 1.0).abs() < 1e-14 {
        return step * (b.ln() - a.ln()) / (b - a);
    }
    step * (b.powf(r + 1.0) - a.powf(r + 1.0)) / ((r + 1.0) * (b - a))
}

/// `int (periodic piecewise-linear)^r` given nodal values.
pub fn periodic_linear_power(nodes: &[f64], step: f64, r: f64) -> f64 {
    let m = nodes.len();
    (0..m)
        .map(|k| linear_power_cell(nodes[k], nodes[(k + 1) % m], step, r))
        .sum()
}

fn circle_step(g: &SampledFn1D, h: &SampledFn1D) -> Result<f64> {
    let (Some(sg), Some(sh)) = (g.uniform_step(), h.uniform_step()) else {
        return Err(RhlsError::InvalidGrid("periodic checks need uniform cells".into()));
    };
    if g.len() != h.len() || (sg - sh).abs() > 1e-12 * sg {
        return Err(RhlsError::InvalidGrid(
            "both step functions must share one partition".into(),
        ));
    }
    Ok(sg)
}

/// `||g * h||_r >= ||g||_q ||h||_p` on a circle, for `0 < p < 1`,
/// `q, r < 0` and `1/p + 1/q = 1 + 1/r`.
///
/// The convolution of two step functions is computed exactly (it is
/// piecewise linear) and its `r`-th power is integrated exactly cell by
/// cell.
pub fn converse_young_check(g: &SampledFn1D, h: &SampledFn1D, p: f64, q: f64, r: f64) -> Result<VerificationReport> {
    if !(p > 0.0 && p < 1.0) {
        return domain("p", p, "0 < p < 1");
    }
    if !(q < 0.0) {
        return domain("q", q, "q < 0");
    }
    if !(r < 0.0) {
        return domain("r", r, "r < 0");
    }
    let rel = 1.0 / p + 1.0 / q - 1.0 - 1.0 / r;
    if rel.abs() > 1e-12 {
        return Err(RhlsError::InconsistentExponents(format!(
            "1/p + 1/q - 1 - 1/r = {rel:e}"
        )));
    }
    let step = circle_step(g, h)?;
    let nq = g.quasi_norm(q)?;
    let np = h.quasi_norm(p)?;
    let conv = periodic_convolution_nodes(&g.values, &h.values, step);
    let degenerate = nq == 0.0 || np == 0.0 || conv.iter().any(|v| *v <= 0.0);
    let lhs = if conv.iter().any(|v| *v <= 0.0) {
        0.0
    } else {
        periodic_linear_power(&conv, step, r).powf(1.0 / r)
    };
    Ok(VerificationReport::new("converse_young", Provenance::InequalityBound)
        .input("p", p)
        .input("q", q)
        .input("r", r)
        .computed("norm_g_q", nq)
        .computed("norm_h_p", np)
        .degenerate(degenerate)
        .at_least(lhs, nq * np, DISCRETE_TOL))
}

/// `[int_Y (int_X F dmu)^q dnu]^{1/q} >= int_X (int_Y F^q dnu)^{1/q} dmu`
/// for `q < 0`; `f[x][y]` is indexed by `X` first.
pub fn reversed_minkowski_check(f: &[Vec<f64>], mu: &[f64], nu: &[f64], q: f64) -> Result<VerificationReport> {
    if !(q < 0.0) {
        return domain("q", q, "q < 0");
    }
    if f.len() != mu.len() || f.iter().any(|row| row.len() != nu.len()) {
        return Err(RhlsError::DimensionMismatch(
            "matrix shape does not match the weights".into(),
        ));
    }
    let inner_x: Vec<f64> = (0..nu.len())
        .map(|y| f.iter().zip(mu).map(|(row, m)| row[y] * m).sum())
        .collect();
    let lhs = lp_quasi_norm(&inner_x, nu, q)?;
    let mut rhs = 0.0;
    let mut degenerate = false;
    for (row, m) in f.iter().zip(mu) {
        let v = lp_quasi_norm(row, nu, q)?;
        degenerate |= v == 0.0;
        rhs += m * v;
    }
    Ok(
        VerificationReport::new("reversed_minkowski", Provenance::InequalityBound)
            .input("q", q)
            .degenerate(degenerate)
            .at_least(lhs, rhs, EXACT_TOL),
    )
}
