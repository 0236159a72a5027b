use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Where a reference value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// A closed-form expression.
    ClosedForm,
    /// A second, independent numerical route.
    IndependentRoute,
    /// The right-hand side of an inequality; the error is the violation.
    InequalityBound,
    /// A value produced by a numerical oracle and frozen.
    Oracle,
}

/// Named scalar results of one check.
///
/// `pass` is derived: it is true exactly when `error <= tolerance`, where
/// `error` is the relative error (or relative violation for inequalities).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub inputs: BTreeMap<String, f64>,
    pub computed: BTreeMap<String, f64>,
    pub reference: BTreeMap<String, f64>,
    pub provenance: Provenance,
    pub abs_error: f64,
    pub rel_error: f64,
    pub tolerance: f64,
    pub degenerate: bool,
    pub pass: bool,
}

impl VerificationReport {
    pub fn new(name: impl Into<String>, provenance: Provenance) -> Self {
        VerificationReport {
            name: name.into(),
            inputs: BTreeMap::new(),
            computed: BTreeMap::new(),
            reference: BTreeMap::new(),
            provenance,
            abs_error: 0.0,
            rel_error: 0.0,
            tolerance: 0.0,
            degenerate: false,
            pass: true,
        }
    }

    pub fn input(mut self, key: &str, value: f64) -> Self {
        self.inputs.insert(key.to_string(), value);
        self
    }

    pub fn computed(mut self, key: &str, value: f64) -> Self {
        self.computed.insert(key.to_string(), value);
        self
    }

    pub fn reference(mut self, key: &str, value: f64) -> Self {
        self.reference.insert(key.to_string(), value);
        self
    }

    pub fn degenerate(mut self, flag: bool) -> Self {
        self.degenerate = flag;
        self
    }

    /// Sets the errors and decides `pass`. NaN errors never pass.
    pub fn judge(mut self, abs_error: f64, rel_error: f64, tolerance: f64) -> Self {
        self.abs_error = abs_error;
        self.rel_error = rel_error;
        self.tolerance = tolerance;
        self.pass = rel_error <= tolerance;
        self
    }

    /// Equality check of `computed` against `reference`.
    pub fn compare(self, computed: f64, reference: f64, tolerance: f64) -> Self {
        let abs = (computed - reference).abs();
        let rel = if reference == 0.0 { abs } else { abs / reference.abs() };
        self.computed("value", computed)
            .reference("value", reference)
            .judge(abs, rel, tolerance)
    }

    /// Inequality check `lhs >= rhs`; the error is the relative shortfall.
    pub fn at_least(self, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let scale = lhs.abs().max(rhs.abs()).max(f64::MIN_POSITIVE);
        let abs = (rhs - lhs).max(0.0);
        let rel = if lhs.is_nan() || rhs.is_nan() {
            f64::NAN
        } else {
            abs / scale
        };
        self.computed("lhs", lhs)
            .reference("rhs", rhs)
            .judge(abs, rel, tolerance)
    }
}

/// True when every report passes.
pub fn all_pass(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| r.pass)
}
