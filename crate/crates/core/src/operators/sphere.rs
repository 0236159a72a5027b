//! The potential `I F(xi) = int_{S^n} |xi - eta|^{alpha-n} F(eta) d eta`
//! restricted to zonal functions.
//!
//! For zonal `F` the kernel is averaged over the azimuth `phi` between the
//! two points:
//!
//! `|xi - eta|^2 = 4 sin^2((theta - theta')/2) + 4 sin(theta) sin(theta') sin^2(phi/2)`.
//!
//! The averaged kernel `kbar` is continuous but has a kink at coincidence,
//! which limits plain Nystrom sums to low order. The matrix therefore uses
//! singularity subtraction,
//!
//! `(I F)_j = sum_{k != j} w_k kbar_jk (F_k - F_j) + R F_j`,
//!
//! where `R = int |xi - eta|^{alpha-n} d eta` is computed once by an
//! independent adaptive quadrature at a base point. The diagonal entry is
//! `R - sum_{k != j} w_k kbar_jk`; it is small and may carry either sign.
//! The raw Nystrom row-sum defect is kept as a diagnostic.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Result, RhlsError};
use crate::exponents::ExponentSet;
use crate::functions::ZonalFn;
use crate::quadrature::adaptive;
use crate::special::{ln_gamma_unchecked, sphere_area};

/// Azimuthal mean of `(2 - 2 cos gamma)^{beta}` between polar angles `a`, `b`.
pub fn azimuthal_mean(n: usize, alpha: f64, a: f64, b: f64) -> f64 {
    let beta = 0.5 * (alpha - n as f64);
    let sa = (0.5 * (a - b)).sin();
    let base = 4.0 * sa * sa;
    let cross = 4.0 * a.sin() * b.sin();
    if n == 1 {
        // Two azimuths: the point itself and its mirror image.
        let sb = (0.5 * (a + b)).sin();
        return 0.5 * (base.powf(beta) + (4.0 * sb * sb).powf(beta));
    }
    let nm2 = (n - 2) as i32;
    let integrand = |phi: f64| {
        let s = (0.5 * phi).sin();
        (base + cross * s * s).powf(beta) * phi.sin().powi(nm2)
    };
    // int_0^pi sin^{n-2} phi d phi
    let hn = 0.5 * (n as f64 - 1.0);
    let norm = (0.5 * PI.ln() + ln_gamma_unchecked(hn) - ln_gamma_unchecked(hn + 0.5)).exp();
    adaptive(integrand, 0.0, PI, 1e-13, 0.0).value / norm
}

/// `int_{S^n} |xi - eta|^{alpha-n} d eta` by quadrature at the north pole:
/// `|S^{n-1}| int_0^pi (2 sin(psi/2))^{alpha-n} sin^{n-1} psi d psi`.
pub fn kernel_row_integral(n: usize, alpha: f64) -> f64 {
    let s = alpha - n as f64;
    let nm1 = (n - 1) as i32;
    let r = adaptive(
        |psi: f64| (2.0 * (0.5 * psi).sin()).powf(s) * psi.sin().powi(nm1),
        0.0,
        PI,
        1e-15,
        0.0,
    );
    sphere_area(n - 1) * r.value
}

/// Dense zonal kernel matrix, weights folded in: `(I F)_j = sum_k K_jk F_k`.
#[derive(Debug, Clone)]
pub struct ZonalKernelMatrix {
    pub n: usize,
    pub alpha: f64,
    pub angles: Vec<f64>,
    pub weights: Vec<f64>,
    /// Row-major `m x m`.
    pub entries: Vec<f64>,
    /// Quadrature value of the row integral that every row reproduces.
    pub row_integral: f64,
    /// `max_j |sum_{k != j} w_k kbar_jk - R| / R` before subtraction.
    pub nystrom_defect: f64,
}

impl ZonalKernelMatrix {
    /// Assembles the matrix on the grid of `grid` (its values are ignored).
    pub fn new(grid: &ZonalFn, exps: &ExponentSet) -> Result<Self> {
        exps.check_dimension(grid.n, "zonal grid")?;
        let (n, alpha) = (exps.n, exps.alpha);
        let m = grid.len();
        let th = &grid.angles;
        let w = &grid.weights;
        // Symmetric unweighted kernel, upper triangle per row.
        let upper: Vec<Vec<f64>> = (0..m)
            .into_par_iter()
            .map(|j| (j + 1..m).map(|k| azimuthal_mean(n, alpha, th[j], th[k])).collect())
            .collect();
        let sym = |j: usize, k: usize| -> f64 {
            if j < k {
                upper[j][k - j - 1]
            } else {
                upper[k][j - k - 1]
            }
        };
        let r = kernel_row_integral(n, alpha);
        let mut entries = vec![0.0; m * m];
        let mut defect: f64 = 0.0;
        for j in 0..m {
            let row = &mut entries[j * m..(j + 1) * m];
            let mut off = 0.0;
            for k in 0..m {
                if k != j {
                    row[k] = w[k] * sym(j, k);
                    off += row[k];
                }
            }
            row[j] = r - off;
            defect = defect.max((off - r).abs() / r);
        }
        Ok(ZonalKernelMatrix {
            n,
            alpha,
            angles: th.clone(),
            weights: w.clone(),
            entries,
            row_integral: r,
            nystrom_defect: defect,
        })
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn entry(&self, j: usize, k: usize) -> f64 {
        self.entries[j * self.len() + k]
    }

    pub fn row_sum(&self, j: usize) -> f64 {
        let m = self.len();
        self.entries[j * m..(j + 1) * m].iter().sum()
    }

    fn check_grid(&self, f: &ZonalFn) -> Result<()> {
        if f.n != self.n || f.angles != self.angles || f.weights != self.weights {
            return Err(RhlsError::DimensionMismatch(
                "zonal function is not on the operator's grid".into(),
            ));
        }
        Ok(())
    }

    /// Raw matrix-vector product; rows run in parallel, each in a fixed order.
    pub fn apply_values(&self, values: &[f64]) -> Vec<f64> {
        let m = self.len();
        self.entries
            .par_chunks(m)
            .map(|row| row.iter().zip(values).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `I F` as a zonal function. A sample supported on a single node can
    /// pick up a tiny negative value from the diagonal; such values are
    /// clipped to zero.
    pub fn apply(&self, f: &ZonalFn) -> Result<ZonalFn> {
        self.check_grid(f)?;
        let out: Vec<f64> = self
            .apply_values(&f.values)
            .into_iter()
            .map(|v: f64| v.max(0.0))
            .collect();
        f.with_values(out)
    }

    /// `sum_j w_j G_j (K F)_j`.
    pub fn bilinear(&self, f: &ZonalFn, g: &ZonalFn) -> Result<f64> {
        self.check_grid(f)?;
        self.check_grid(g)?;
        let kf = self.apply_values(&f.values);
        Ok(kf
            .iter()
            .zip(&g.values)
            .zip(&self.weights)
            .map(|((a, b), w)| a * b * w)
            .sum())
    }
}

/// One-shot `I F`; assembles the matrix on `F`'s grid.
pub fn sphere_operator(f: &ZonalFn, exps: &ExponentSet) -> Result<ZonalFn> {
    ZonalKernelMatrix::new(f, exps)?.apply(f)
}
