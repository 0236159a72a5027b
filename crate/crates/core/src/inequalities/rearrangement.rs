//! Decreasing and increasing rearrangements, and the reversed
//! rearrangement inequality for convolutions on a circle.
//!
//! On a circle of `N` equal cells the symmetric rearrangement of a step
//! function is itself a step function on the `2N` half cells: the largest
//! value fills the two half cells next to the center, the next one the
//! following pair, and so on. Both sides of the check are therefore
//! evaluated exactly on the half-cell model.

use crate::error::{Result, RhlsError};
use crate::functions::SampledFn1D;
use crate::inequalities::classical::{periodic_convolution_nodes, periodic_linear_power, DISCRETE_TOL};
use crate::report::{Provenance, VerificationReport};

fn sorted_desc(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

fn check_equal_weights(values: &[f64], weights: &[f64]) -> Result<()> {
    if values.len() != weights.len() {
        return Err(RhlsError::DimensionMismatch(format!(
            "{} values, {} weights",
            values.len(),
            weights.len()
        )));
    }
    if let Some(w0) = weights.first() {
        if weights.iter().any(|w| (w - w0).abs() > 1e-12 * w0.abs()) {
            return Err(RhlsError::InvalidGrid("rearrangement needs equal weights".into()));
        }
    }
    if values.iter().any(|v| !(*v >= 0.0)) {
        return crate::error::domain("values", f64::NAN, "nonnegative samples");
    }
    Ok(())
}

fn check_positive(values: &[f64]) -> Result<()> {
    if values.iter().any(|v| !(*v > 0.0)) {
        return Err(RhlsError::Degenerate(
            "increasing rearrangement needs strictly positive values".into(),
        ));
    }
    Ok(())
}

/// Values sorted nonincreasing; weights must be equal.
pub fn decreasing_rearrangement(values: &[f64], weights: &[f64]) -> Result<Vec<f64>> {
    check_equal_weights(values, weights)?;
    Ok(sorted_desc(values))
}

/// `((v^{-1})^*)^{-1}`: reciprocal, decreasing rearrangement, reciprocal.
pub fn increasing_rearrangement(values: &[f64], weights: &[f64]) -> Result<Vec<f64>> {
    check_equal_weights(values, weights)?;
    check_positive(values)?;
    let recip: Vec<f64> = values.iter().map(|v| 1.0 / v).collect();
    Ok(sorted_desc(&recip).into_iter().map(|v| 1.0 / v).collect())
}

/// Each cell split into two equal halves.
pub fn refine_halves(values: &[f64]) -> Vec<f64> {
    values.iter().flat_map(|v| [*v, *v]).collect()
}

/// Symmetric decreasing rearrangement about `0` on the circle, returned on
/// the `2N` half cells `[j s/2, (j+1) s/2)`.
pub fn symmetric_decreasing_circle(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let sorted = sorted_desc(values);
    let mut out = vec![0.0; 2 * n];
    for (j, v) in sorted.into_iter().enumerate() {
        out[j] = v;
        out[2 * n - 1 - j] = v;
    }
    out
}

/// Symmetric increasing rearrangement `1/((1/v)^*)` on the half cells.
pub fn symmetric_increasing_circle(values: &[f64]) -> Result<Vec<f64>> {
    check_positive(values)?;
    let recip: Vec<f64> = values.iter().map(|v| 1.0 / v).collect();
    Ok(symmetric_decreasing_circle(&recip)
        .into_iter()
        .map(|v| 1.0 / v)
        .collect())
}

fn conv_norm(u: &[f64], v: &[f64], step: f64, q: f64) -> f64 {
    let c = periodic_convolution_nodes(u, v, step);
    if c.iter().any(|x| *x <= 0.0) {
        return 0.0;
    }
    periodic_linear_power(&c, step, q).powf(1.0 / q)
}

/// `||u * v||_q >= ||u^* * v_*||_q` for `q < 0` on a circle.
pub fn riesz_reversed_check(u: &SampledFn1D, v: &SampledFn1D, q: f64) -> Result<VerificationReport> {
    if !(q < 0.0) {
        return crate::error::domain("q", q, "q < 0");
    }
    let (Some(su), Some(sv)) = (u.uniform_step(), v.uniform_step()) else {
        return Err(RhlsError::InvalidGrid("periodic checks need uniform cells".into()));
    };
    if u.len() != v.len() || (su - sv).abs() > 1e-12 * su {
        return Err(RhlsError::InvalidGrid(
            "both step functions must share one partition".into(),
        ));
    }
    let half = 0.5 * su;
    let lhs = conv_norm(&refine_halves(&u.values), &refine_halves(&v.values), half, q);
    let us = symmetric_decreasing_circle(&u.values);
    let vs = symmetric_increasing_circle(&v.values)?;
    let rhs = conv_norm(&us, &vs, half, q);
    Ok(VerificationReport::new("riesz_reversed", Provenance::InequalityBound)
        .input("q", q)
        .degenerate(lhs == 0.0 || rhs == 0.0)
        .at_least(lhs, rhs, DISCRETE_TOL))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::distribution_lt;

    #[test]
    fn examples() {
        let w = [1.0; 3];
        assert_eq!(
            decreasing_rearrangement(&[3.0, 1.0, 2.0], &w).unwrap(),
            vec![3.0, 2.0, 1.0]
        );
        let inc = increasing_rearrangement(&[3.0, 1.0, 2.0], &w).unwrap();
        for (a, b) in inc.iter().zip([1.0, 2.0, 3.0]) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(increasing_rearrangement(&[1.0, 0.0], &w[..2]).is_err());
        assert_eq!(decreasing_rearrangement(&[0.0, 1.0], &w[..2]).unwrap(), vec![1.0, 0.0]);
        assert!(decreasing_rearrangement(&[0.0, 1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn equimeasurable() {
        let v = [0.3, 2.0, 1.1, 0.7, 2.0, 0.1];
        let w = [1.0; 6];
        let d = decreasing_rearrangement(&v, &w).unwrap();
        let s = symmetric_decreasing_circle(&v);
        for tau in [0.05, 0.3, 0.5, 1.0, 1.5, 2.0, 3.0] {
            assert_eq!(distribution_lt(&v, &w, tau), distribution_lt(&d, &w, tau));
            assert_eq!(distribution_lt(&v, &w, tau), distribution_lt(&s, &[0.5; 12], tau));
        }
    }

    #[test]
    fn already_arranged_pair_gives_equality() {
        // Symmetric about 0 on cells: cell k mirrors cell N-1-k.
        let u = SampledFn1D::uniform(0.0, 1.0, vec![4.0, 2.0, 1.0, 1.0, 2.0, 4.0]).unwrap();
        let v = SampledFn1D::uniform(0.0, 1.0, vec![0.5, 1.0, 3.0, 3.0, 1.0, 0.5]).unwrap();
        let r = riesz_reversed_check(&u, &v, -2.0).unwrap();
        assert!(r.pass);
        assert!((r.computed["lhs"] - r.reference["rhs"]).abs() < 1e-13 * r.computed["lhs"]);
    }
}
