//! Fixed-point search for the minimizer of the HLS quotient and the
//! concentrating-family demonstration.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result, RhlsError};
use crate::exponents::ExponentSet;
use crate::extremal::families::{extremal_rn, ExtremalParamsRn};
use crate::functions::{RadialFn, ZonalFn};
use crate::inequalities::hls_quotient_with;
use crate::norms::lp_quasi_norm;
use crate::operators::{RadialOperator, ZonalKernelMatrix};
use crate::report::{Provenance, VerificationReport};
use crate::special::sharp_constant;

pub const DEFAULT_DAMPING: f64 = 0.5;

#[derive(Debug, Clone)]
pub struct MinimizeResult {
    /// Final iterate, normalized to `||F||_p = 1`.
    pub f: ZonalFn,
    /// `Q` of the normalized start followed by `Q` after each iteration.
    pub trace: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
    pub sharp_constant: f64,
}

fn normalized(values: &[f64], weights: &[f64], p: f64) -> Result<Vec<f64>> {
    let norm = lp_quasi_norm(values, weights, p)?;
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(RhlsError::Degenerate(format!("cannot normalize, ||F||_p = {norm}")));
    }
    Ok(values.iter().map(|v| v / norm).collect())
}

/// The Euler-Lagrange map `F -> (I[(I F)^{q-1}])^{1/(p-1)}`, normalized.
pub fn el_map(op: &ZonalKernelMatrix, f: &ZonalFn, exps: &ExponentSet) -> Result<ZonalFn> {
    let g = op.apply(f)?;
    let h = op.apply(&g.map(|x| x.powf(exps.q - 1.0))?)?;
    let t = h.map(|x| x.powf(1.0 / (exps.p - 1.0)))?;
    let v = normalized(&t.values, &t.weights, exps.p)?;
    f.with_values(v)
}

/// Damped iteration `F <- (1-d) F + d T(F)`, renormalized each step.
///
/// Both powers `q-1` and `1/(p-1)` are negative, so positive iterates stay
/// positive. The iteration stops once successive quotients differ by less
/// than `tol`; the minimizers form a noncompact family, so only the
/// quotient (not the iterate) is expected to settle.
pub fn fixed_point_minimize(
    f0: &ZonalFn,
    exps: &ExponentSet,
    damping: f64,
    tol: f64,
    maxit: usize,
) -> Result<MinimizeResult> {
    exps.critical_required()?;
    exps.check_dimension(f0.n, "zonal function")?;
    if !(damping > 0.0 && damping <= 1.0) {
        return domain("damping", damping, "0 < damping <= 1");
    }
    if !(tol > 0.0) {
        return domain("tol", tol, "tol > 0");
    }
    if f0.values.iter().any(|v| !(*v > 0.0)) {
        return Err(RhlsError::Degenerate("the starting function must be positive".into()));
    }
    let op = ZonalKernelMatrix::new(f0, exps)?;
    let mut f = f0.with_values(normalized(&f0.values, &f0.weights, exps.p)?)?;
    let mut trace = vec![hls_quotient_with(&op, &f, exps)?.quotient];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < maxit {
        let t = el_map(&op, &f, exps)?;
        let mixed: Vec<f64> = f
            .values
            .iter()
            .zip(&t.values)
            .map(|(a, b)| (1.0 - damping) * a + damping * b)
            .collect();
        f = f.with_values(normalized(&mixed, &f.weights, exps.p)?)?;
        iterations += 1;
        let q = hls_quotient_with(&op, &f, exps)?.quotient;
        let prev = *trace.last().unwrap_or(&q);
        trace.push(q);
        if (q - prev).abs() < tol {
            converged = true;
            break;
        }
    }
    Ok(MinimizeResult {
        f,
        trace,
        converged,
        iterations,
        sharp_constant: sharp_constant(exps.n, exps.alpha)?.value,
    })
}

/// Half-width of the log grid used by the demo.
pub const CONCENTRATION_HALF_WIDTH: f64 = 24.0;
pub const CONCENTRATION_STEPS: usize = 1024;

/// One row of the concentration table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationRow {
    pub eps: f64,
    pub norm_p: f64,
    pub quotient: f64,
    /// `f_eps(e_1)`.
    pub f_at_e1: f64,
    /// `I f_eps(e_1)`.
    pub potential_at_e1: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConcentrationResult {
    pub rows: Vec<ConcentrationRow>,
    pub sharp_constant: f64,
    pub reports: Vec<VerificationReport>,
}

/// Builds `f_eps(x) = (eps/(eps^2 + |x|^2))^{(n+alpha)/2}` for each `eps`
/// and tabulates the norm, the quotient on `R^n`, and the values at the
/// unit point. The grid spans `|ln r| <= 24` with step `24/1024`, where
/// truncation is far below the reported tolerances.
pub fn concentration_demo(eps: &[f64], exps: &ExponentSet) -> Result<ConcentrationResult> {
    exps.critical_required()?;
    if let Some(e) = eps.iter().find(|e| !(**e > 0.0 && **e <= 1.0)) {
        return domain("eps", *e, "0 < eps <= 1");
    }
    let grid = RadialFn::sample(exps.n, CONCENTRATION_HALF_WIDTH, CONCENTRATION_STEPS, |_| 0.0)?;
    let op = RadialOperator::for_grid(&grid, exps)?;
    let center = grid
        .node_of(0.0)
        .ok_or_else(|| RhlsError::InvalidGrid("u = 0 is not a node".into()))?;
    let ns = sharp_constant(exps.n, exps.alpha)?.value;
    let w = grid.weights();
    let mut rows = Vec::with_capacity(eps.len());
    for &e in eps {
        let f = extremal_rn(&ExtremalParamsRn::concentrating(e, exps)?, &grid, exps)?;
        let out = op.apply(&f)?;
        let norm_p = lp_quasi_norm(&f.values, &w, exps.p)?;
        let norm_q = lp_quasi_norm(&out.f.values, &w, exps.q)?;
        rows.push(ConcentrationRow {
            eps: e,
            norm_p,
            quotient: norm_q / norm_p,
            f_at_e1: f.values[center],
            potential_at_e1: out.f.values[center],
        });
    }
    let mut reports = Vec::new();
    if let Some(first) = rows.first() {
        let spread = rows
            .iter()
            .map(|r| (r.norm_p - first.norm_p).abs() / first.norm_p)
            .fold(0.0, f64::max);
        reports.push(
            VerificationReport::new("concentration_norm", Provenance::ClosedForm)
                .computed("max_relative_spread", spread)
                .judge(0.0, spread, 1e-6),
        );
    }
    for r in &rows {
        reports.push(
            VerificationReport::new("concentration_quotient", Provenance::ClosedForm)
                .input("eps", r.eps)
                .compare(r.quotient, ns, 1e-4),
        );
    }
    // Strict growth of the potential at e_1 as eps decreases.
    let mut order: Vec<&ConcentrationRow> = rows.iter().collect();
    order.sort_by(|a, b| b.eps.total_cmp(&a.eps));
    let worst = order
        .windows(2)
        .map(|w| w[1].potential_at_e1 / w[0].potential_at_e1)
        .fold(f64::INFINITY, f64::min);
    if order.len() > 1 {
        let mut rep = VerificationReport::new("concentration_growth", Provenance::ClosedForm)
            .computed("min_growth_ratio", worst)
            .judge(0.0, 0.0, 0.0);
        rep.pass = worst > 1.0;
        reports.push(rep);
    }
    Ok(ConcentrationResult {
        rows,
        sharp_constant: ns,
        reports,
    })
}
