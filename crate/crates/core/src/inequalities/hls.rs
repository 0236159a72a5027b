//! The HLS quotient on the sphere and the bilinear form.

use serde::{Deserialize, Serialize};

use crate::error::{Result, RhlsError};
use crate::exponents::ExponentSet;
use crate::functions::ZonalFn;
use crate::norms::lp_quasi_norm;
use crate::operators::ZonalKernelMatrix;
use crate::report::{Provenance, VerificationReport};
use crate::special::sharp_constant;

/// Relative quadrature tolerance for the sphere checks. Smooth inputs on
/// the default grid are resolved far below this.
pub const QUADRATURE_TOL: f64 = 1e-6;

/// `Q(F) = ||I F||_q / ||F||_p` against the sharp constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuotientResult {
    pub quotient: f64,
    pub sharp_constant: f64,
    /// `Q - N*`.
    pub margin: f64,
    /// `(Q - N*) / N*`.
    pub relative_margin: f64,
    pub norm_input: f64,
    pub norm_output: f64,
}

impl QuotientResult {
    /// `Q >= N* (1 - tol)`.
    pub fn holds(&self, tol: f64) -> bool {
        self.relative_margin >= -tol
    }
}

fn check_input(f: &ZonalFn) -> Result<()> {
    if f.values.iter().any(|v| !(*v >= 0.0)) {
        return crate::error::domain("F", f64::NAN, "nonnegative samples");
    }
    if f.values.iter().all(|v| *v == 0.0) {
        return Err(RhlsError::Degenerate("F vanishes identically".into()));
    }
    Ok(())
}

/// `Q(F)` with a prebuilt kernel matrix on `F`'s grid.
pub fn hls_quotient_with(op: &ZonalKernelMatrix, f: &ZonalFn, exps: &ExponentSet) -> Result<QuotientResult> {
    exps.critical_required()?;
    exps.check_dimension(f.n, "zonal function")?;
    check_input(f)?;
    let out = op.apply(f)?;
    let norm_input = lp_quasi_norm(&f.values, &f.weights, exps.p)?;
    let norm_output = lp_quasi_norm(&out.values, &out.weights, exps.q)?;
    let ns = sharp_constant(exps.n, exps.alpha)?.value;
    let quotient = norm_output / norm_input;
    Ok(QuotientResult {
        quotient,
        sharp_constant: ns,
        margin: quotient - ns,
        relative_margin: (quotient - ns) / ns,
        norm_input,
        norm_output,
    })
}

/// `Q(F)`; assembles the kernel matrix on `F`'s grid.
pub fn hls_quotient(f: &ZonalFn, exps: &ExponentSet) -> Result<QuotientResult> {
    let op = ZonalKernelMatrix::new(f, exps)?;
    hls_quotient_with(&op, f, exps)
}

/// The quotient check as a report: `Q >= N*` within [`QUADRATURE_TOL`].
pub fn hls_report(q: &QuotientResult, exps: &ExponentSet) -> VerificationReport {
    VerificationReport::new("hls_quotient", Provenance::InequalityBound)
        .input("n", exps.n as f64)
        .input("alpha", exps.alpha)
        .computed("relative_margin", q.relative_margin)
        .at_least(q.quotient, q.sharp_constant, QUADRATURE_TOL)
}

/// `<I F, G> >= N* ||F||_p ||G||_p`, with the adjoint pairing
/// `<F, I G>` reported as a symmetry residual.
pub fn bilinear_form_with(
    op: &ZonalKernelMatrix,
    f: &ZonalFn,
    g: &ZonalFn,
    exps: &ExponentSet,
) -> Result<VerificationReport> {
    exps.critical_required()?;
    check_input(f)?;
    check_input(g)?;
    let lhs = op.bilinear(f, g)?;
    let adjoint = op.bilinear(g, f)?;
    let nf = lp_quasi_norm(&f.values, &f.weights, exps.p)?;
    let ng = lp_quasi_norm(&g.values, &g.weights, exps.p)?;
    let ns = sharp_constant(exps.n, exps.alpha)?.value;
    Ok(VerificationReport::new("bilinear_form", Provenance::InequalityBound)
        .input("n", exps.n as f64)
        .input("alpha", exps.alpha)
        .computed("adjoint", adjoint)
        .computed("adjoint_residual", (lhs - adjoint).abs() / lhs.abs())
        .computed("norm_f", nf)
        .computed("norm_g", ng)
        .at_least(lhs, ns * nf * ng, QUADRATURE_TOL))
}

pub fn bilinear_form(f: &ZonalFn, g: &ZonalFn, exps: &ExponentSet) -> Result<VerificationReport> {
    let op = ZonalKernelMatrix::new(f, exps)?;
    bilinear_form_with(&op, f, g, exps)
}
