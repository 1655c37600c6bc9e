//! Pass/fail reports with witnesses.

use crate::multilinear::LambdaExpr;

/// A violated identity at a basis tuple, with the nonzero residual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub label: String,
    pub tuple: Vec<usize>,
    pub residual: LambdaExpr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub name: String,
    pub failures: Vec<Witness>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>) -> Self {
        CheckReport { name: name.into(), failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn first_failure(&self) -> Option<&Witness> {
        self.failures.first()
    }

    /// Record `residual` as a failure when it is nonzero.
    pub fn record(&mut self, label: &str, tuple: &[usize], residual: LambdaExpr) {
        if !residual.is_zero() {
            self.failures.push(Witness { label: label.to_string(), tuple: tuple.to_vec(), residual });
        }
    }

    /// Build a report from per-tuple residuals computed (possibly in parallel)
    /// over `tuples`, keeping deterministic order.
    pub fn from_residuals(name: impl Into<String>, items: Vec<(String, Vec<usize>, LambdaExpr)>) -> Self {
        let mut r = CheckReport::new(name);
        for (label, tuple, residual) in items {
            r.record(&label, &tuple, residual);
        }
        r
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.failures.extend(other.failures);
    }
}
