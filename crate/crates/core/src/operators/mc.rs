//! Monte Carlo estimate of `I f(x)` for arbitrary `f` on `R^n`.
//!
//! Samples are drawn uniformly on `S^n` and pulled down stereographically,
//! which gives the density `(2/(1+|y|^2))^n / |S^n|` on `R^n`. That density
//! is proportional to the `p`-th power of the extremal profile, so the
//! importance weights stay bounded for extremal-like inputs.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result, RhlsError};
use crate::special::sphere_area;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub value: f64,
    pub stderr: f64,
}

/// Draws `count` points of `R^n` with the pulled-back uniform density.
pub fn sample_points(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let g: Vec<f64> = (0..=n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        let last = g[n] / norm;
        // The south pole has probability zero; skip it if it ever shows up.
        if norm == 0.0 || 1.0 + last <= 0.0 {
            continue;
        }
        out.push(g[..n].iter().map(|v| v / norm / (1.0 + last)).collect());
    }
    out
}

/// Unbiased estimates of `I f` at each evaluation point, from one shared
/// sample of size `samples`. Deterministic given `seed`.
pub fn mc_operator<F: Fn(&[f64]) -> f64>(
    f: F,
    n: usize,
    alpha: f64,
    points: &[Vec<f64>],
    samples: usize,
    seed: u64,
) -> Result<Vec<McEstimate>> {
    if n == 0 {
        return domain("n", 0.0, "dimension >= 1");
    }
    if !(alpha > n as f64) {
        return domain("alpha", alpha, "alpha > n");
    }
    if samples < 2 {
        return domain("samples", samples as f64, "at least two samples");
    }
    if let Some(p) = points.iter().find(|p| p.len() != n) {
        return Err(RhlsError::DimensionMismatch(format!(
            "evaluation point of length {} in dimension {n}",
            p.len()
        )));
    }
    let s = alpha - n as f64;
    let area = sphere_area(n);
    let ys = sample_points(n, samples, seed);
    // f(y) / density(y), shared by every evaluation point.
    let ratio: Vec<f64> = ys
        .iter()
        .map(|y| {
            let fy = f(y);
            if fy == 0.0 {
                return 0.0;
            }
            let r2: f64 = y.iter().map(|v| v * v).sum();
            fy * area * (0.5 * (1.0 + r2)).powi(n as i32)
        })
        .collect();
    let mut out = Vec::with_capacity(points.len());
    for x in points {
        let mut mean = 0.0;
        let mut m2 = 0.0;
        for (k, (y, r)) in ys.iter().zip(&ratio).enumerate() {
            let d2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
            let v = if *r == 0.0 { 0.0 } else { r * d2.powf(0.5 * s) };
            // Welford update
            let delta = v - mean;
            mean += delta / (k + 1) as f64;
            m2 += delta * (v - mean);
        }
        let var = m2 / (samples - 1) as f64;
        out.push(McEstimate {
            value: mean,
            stderr: (var / samples as f64).sqrt(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_function_gives_zero() {
        let est = mc_operator(|_| 0.0, 1, 2.0, &[vec![0.3]], 100, 1).unwrap();
        assert_eq!(est[0].value, 0.0);
        assert_eq!(est[0].stderr, 0.0);
    }

    #[test]
    fn deterministic_given_seed() {
        let f = |y: &[f64]| (1.0 + y[0] * y[0]).powf(-1.5);
        let a = mc_operator(f, 1, 2.0, &[vec![0.0]], 1000, 9).unwrap();
        let b = mc_operator(f, 1, 2.0, &[vec![0.0]], 1000, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn samples_have_the_pulled_back_density() {
        // P(|y| < 1) = |upper hemisphere| / |S^1| = 1/2
        let ys = sample_points(1, 20_000, 3);
        let inside = ys.iter().filter(|y| y[0].abs() < 1.0).count() as f64 / 20_000.0;
        assert!((inside - 0.5).abs() < 0.02);
    }
}
