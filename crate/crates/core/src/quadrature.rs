//! Quadrature rules: Gauss-Legendre, Gauss-Jacobi, the zonal sphere rule,
//! and a globally adaptive Gauss-Kronrod integrator.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result, RhlsError};
use crate::special::{ln_gamma_unchecked, sphere_area};

/// Where a rule's nodes live.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RuleDomain {
    /// `[-1, 1]` with weight `(1-x)^a (1+x)^b` (`a = b = 0` is Lebesgue).
    Jacobi { a: f64, b: f64 },
    /// Polar angle on `S^n`; weights include the surface element.
    SphereAngle { n: usize },
}

/// Nodes and positive weights.
///
/// Exactness by constructor: `gauss_legendre(m)` and `gauss_jacobi(m, a, b)`
/// integrate polynomials of degree `2m - 1` against their weight;
/// `sphere_rule(n, m)` integrates zonal functions that are polynomials of
/// degree `2m - 1` in `cos(theta)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub domain: RuleDomain,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=m {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let mf = m as f64;
    let dp = mf * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss-Legendre rule with `m` nodes on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(m: usize) -> Result<QuadratureRule> {
    if m == 0 {
        return domain("m", 0.0, "at least one node");
    }
    if m == 1 {
        return Ok(QuadratureRule {
            nodes: vec![0.0],
            weights: vec![2.0],
            domain: RuleDomain::Jacobi { a: 0.0, b: 0.0 },
        });
    }
    let mf = m as f64;
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        // Tricomi initial guess, then Newton.
        let mut x = (PI * (i as f64 + 0.75) / (mf + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(m, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(m, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        domain: RuleDomain::Jacobi { a: 0.0, b: 0.0 },
    })
}

/// Gauss-Chebyshev rule (weight `(1-x^2)^{-1/2}`), nodes ascending.
pub fn gauss_chebyshev(m: usize) -> Result<QuadratureRule> {
    if m == 0 {
        return domain("m", 0.0, "at least one node");
    }
    let mf = m as f64;
    let nodes = (0..m)
        .rev()
        .map(|k| (PI * (2.0 * k as f64 + 1.0) / (2.0 * mf)).cos())
        .collect();
    Ok(QuadratureRule {
        nodes,
        weights: vec![PI / mf; m],
        domain: RuleDomain::Jacobi { a: -0.5, b: -0.5 },
    })
}

/// Gauss-Jacobi rule for the weight `(1-x)^a (1+x)^b` via Golub-Welsch.
pub fn gauss_jacobi(m: usize, a: f64, b: f64) -> Result<QuadratureRule> {
    if m == 0 {
        return domain("m", 0.0, "at least one node");
    }
    if a <= -1.0 {
        return domain("a", a, "a > -1");
    }
    if b <= -1.0 {
        return domain("b", b, "b > -1");
    }
    if a == 0.0 && b == 0.0 {
        return gauss_legendre(m);
    }
    if a == -0.5 && b == -0.5 {
        return gauss_chebyshev(m);
    }
    let ab = a + b;
    let mut jac = DMatrix::<f64>::zeros(m, m);
    for k in 0..m {
        let kf = k as f64;
        let diag = if k == 0 {
            (b - a) / (ab + 2.0)
        } else {
            (b * b - a * a) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
        };
        jac[(k, k)] = diag;
        if k + 1 < m {
            let j = kf + 1.0;
            let num = 4.0 * j * (j + a) * (j + b) * (j + ab);
            let den = (2.0 * j + ab).powi(2) * (2.0 * j + ab + 1.0) * (2.0 * j + ab - 1.0);
            let off = (num / den).sqrt();
            jac[(k, k + 1)] = off;
            jac[(k + 1, k)] = off;
        }
    }
    let mu0 = ((ab + 1.0) * std::f64::consts::LN_2 + ln_gamma_unchecked(a + 1.0) + ln_gamma_unchecked(b + 1.0)
        - ln_gamma_unchecked(ab + 2.0))
    .exp();
    let eig = SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = (0..m)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(QuadratureRule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
        domain: RuleDomain::Jacobi { a, b },
    })
}

/// Rule in the polar angle of `S^n` for zonal integrands.
///
/// Nodes are Gauss-Gegenbauer points in `cos(theta)` for the weight
/// `(1 - t^2)^{(n-2)/2}` (Chebyshev for `n = 1`, Legendre for `n = 2`),
/// returned as ascending angles in `(0, pi)`. Weights carry the factor
/// `|S^{n-1}|` so that they sum to `|S^n|`.
pub fn sphere_rule(n: usize, m: usize) -> Result<QuadratureRule> {
    if n == 0 {
        return domain("n", 0.0, "sphere dimension >= 1");
    }
    let a = (n as f64 - 2.0) / 2.0;
    let base = gauss_jacobi(m, a, a)?;
    let scale = sphere_area(n - 1);
    let mut pairs: Vec<(f64, f64)> = base
        .nodes
        .iter()
        .zip(&base.weights)
        .map(|(&t, &w)| (t.clamp(-1.0, 1.0).acos(), w * scale))
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(QuadratureRule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
        domain: RuleDomain::SphereAngle { n },
    })
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

/// Globally adaptive G7-K15 integration of `f` over `[a, b]`.
///
/// Stops once the summed error estimate is below
/// `max(abs_tol, rel_tol * |value|)`. Integrable endpoint singularities
/// are handled by repeated bisection; the integrand is never evaluated at
/// `a` or `b`.
pub fn adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> Integral {
    const MAX_SEGMENTS: usize = 4000;
    if a == b {
        return Integral {
            value: 0.0,
            error: 0.0,
            converged: true,
        };
    }
    let (v, e) = kronrod15(&f, a, b);
    let mut segs = vec![(a, b, v, e)];
    let mut total = v;
    let mut err = e;
    while err > abs_tol.max(rel_tol * total.abs()) {
        if segs.len() >= MAX_SEGMENTS {
            return Integral {
                value: total,
                error: err,
                converged: false,
            };
        }
        let (idx, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty");
        let (lo, hi, sv, se) = segs.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // Cannot split further in floating point.
            segs.push((lo, hi, sv, 0.0));
            err -= se;
            continue;
        }
        let (v1, e1) = kronrod15(&f, lo, mid);
        let (v2, e2) = kronrod15(&f, mid, hi);
        total += v1 + v2 - sv;
        err += e1 + e2 - se;
        segs.push((lo, mid, v1, e1));
        segs.push((mid, hi, v2, e2));
    }
    // Re-sum in a fixed order so the result does not depend on the
    // accumulation history.
    segs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let value = segs.iter().map(|s| s.2).sum();
    let error = segs.iter().map(|s| s.3).sum();
    Integral {
        value,
        error,
        converged: true,
    }
}

/// Adaptive integration over `[a, inf)` through `x = a + s/(1-s)`.
pub fn adaptive_to_infinity<F: Fn(f64) -> f64>(f: F, a: f64, rel_tol: f64, abs_tol: f64) -> Integral {
    adaptive(
        |s| {
            let d = 1.0 - s;
            f(a + s / d) / (d * d)
        },
        0.0,
        1.0,
        rel_tol,
        abs_tol,
    )
}

/// Convenience wrapper that turns a non-converged integral into an error.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    let r = adaptive(f, a, b, rel_tol, 0.0);
    if r.converged {
        Ok(r.value)
    } else {
        Err(RhlsError::NoConvergence(format!(
            "adaptive quadrature on [{a}, {b}] stalled at error {:e}",
            r.error
        )))
    }
}
