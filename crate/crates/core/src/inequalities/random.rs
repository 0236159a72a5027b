//! Seeded random test inputs: log-normal perturbations of constants,
//! clipped below so that negative-exponent norms stay finite.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{domain, Result};
use crate::functions::{SampledFn1D, ZonalFn};

/// Smallest value any generated sample can take.
pub const CLIP_FLOOR: f64 = 1e-6;

/// `len` samples of `max(exp(sigma Z), 1e-6)`.
pub fn lognormal_values(len: usize, sigma: f64, seed: u64) -> Result<Vec<f64>> {
    let (true, Ok(normal)) = (sigma >= 0.0, Normal::new(0.0, sigma)) else {
        return domain("sigma", sigma, "a finite nonnegative spread");
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..len)
        .map(|_| normal.sample(&mut rng).exp().max(CLIP_FLOOR))
        .collect())
}

/// Random positive values on the grid of `grid`.
pub fn random_zonal(grid: &ZonalFn, sigma: f64, seed: u64) -> Result<ZonalFn> {
    grid.with_values(lognormal_values(grid.len(), sigma, seed)?)
}

/// Random positive step function on `m` equal cells of `[a, b]`.
pub fn random_step(a: f64, b: f64, m: usize, sigma: f64, seed: u64) -> Result<SampledFn1D> {
    SampledFn1D::uniform(a, b, lognormal_values(m, sigma, seed)?)
}

/// Random positive `rows x cols` matrix.
pub fn random_matrix(rows: usize, cols: usize, sigma: f64, seed: u64) -> Result<Vec<Vec<f64>>> {
    let flat = lognormal_values(rows * cols, sigma, seed)?;
    Ok(flat.chunks(cols.max(1)).take(rows).map(|c| c.to_vec()).collect())
}
