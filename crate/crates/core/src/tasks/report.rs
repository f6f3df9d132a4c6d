use std::collections::BTreeMap;

use crate::discrimination::CERTIFICATE_TOL;
use crate::mc::McEstimate;

/// Outcome of one task run.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskReport {
    pub task: String,
    pub params: BTreeMap<String, f64>,
    /// Closed-form value, when one is known.
    pub analytic: Option<f64>,
    pub numeric: f64,
    pub monte_carlo: Option<McEstimate>,
    pub certificate_residual: Option<f64>,
    /// False when an iterative solver hit its iteration cap.
    pub converged: bool,
    /// Further named values (per-block quantities, reference values).
    pub extras: BTreeMap<String, f64>,
}

impl TaskReport {
    pub fn new(task: &str, numeric: f64) -> Self {
        Self {
            task: task.to_string(),
            params: BTreeMap::new(),
            analytic: None,
            numeric,
            monte_carlo: None,
            certificate_residual: None,
            converged: true,
            extras: BTreeMap::new(),
        }
    }

    pub fn param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn extra(mut self, key: &str, value: f64) -> Self {
        self.extras.insert(key.to_string(), value);
        self
    }

    /// `|analytic − numeric|` when a closed form is available.
    pub fn mismatch(&self) -> Option<f64> {
        self.analytic.map(|a| (a - self.numeric).abs())
    }

    /// Whether an attached optimality certificate is below the threshold.
    /// Reports without a certificate count as certified.
    pub fn certified(&self) -> bool {
        self.converged && self.certificate_residual.is_none_or(|r| r <= CERTIFICATE_TOL)
    }

    /// All numbers in the report as a flat map: `numeric`, `analytic`,
    /// `mismatch`, `mc_mean`, `mc_std_error`, `certificate_residual` and the
    /// extras, skipping absent values.
    pub fn values(&self) -> BTreeMap<String, f64> {
        let mut out = self.extras.clone();
        out.insert("numeric".into(), self.numeric);
        if let Some(a) = self.analytic {
            out.insert("analytic".into(), a);
        }
        if let Some(m) = self.mismatch() {
            out.insert("mismatch".into(), m);
        }
        if let Some(mc) = &self.monte_carlo {
            out.insert("mc_mean".into(), mc.mean);
            out.insert("mc_std_error".into(), mc.std_error);
            out.insert("mc_samples".into(), mc.samples as f64);
        }
        if let Some(r) = self.certificate_residual {
            out.insert("certificate_residual".into(), r);
        }
        out
    }
}
