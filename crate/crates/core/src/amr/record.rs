use std::io::Write;

use serde::{Deserialize, Serialize};

/// One row of a convergence study.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    /// Mesh size of uniform studies, grading parameter of graded ones.
    pub h: Option<f64>,
    pub n: usize,
    pub n_boundary: usize,
    pub eta: Option<f64>,
    pub eta_classical: Option<f64>,
    pub e1: Option<f64>,
    pub e2: Option<f64>,
    /// `4 E₂` for Nitsche and Barbosa–Hughes.
    pub e: Option<f64>,
    pub energy_err: Option<f64>,
    pub seconds: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRecord {
    pub label: String,
    pub steps: Vec<StepRecord>,
    /// Set when a solve or refinement aborted the study; `steps` holds what
    /// was completed before.
    pub failure: Option<String>,
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v:e}")).unwrap_or_default()
}

impl ConvergenceRecord {
    pub fn new(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            ..Self::default()
        }
    }

    pub fn last(&self) -> Option<&StepRecord> {
        self.steps.last()
    }

    /// CSV with columns `step,N,N_boundary,eta,eta_classical,E1,E2,E,energy_err,seconds`.
    pub fn write_csv(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(
            w,
            "step,N,N_boundary,eta,eta_classical,E1,E2,E,energy_err,seconds"
        )?;
        for s in &self.steps {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{},{:.3}",
                s.step,
                s.n,
                s.n_boundary,
                opt(s.eta),
                opt(s.eta_classical),
                opt(s.e1),
                opt(s.e2),
                opt(s.e),
                opt(s.energy_err),
                s.seconds
            )?;
        }
        Ok(())
    }

    /// Least-squares slope of `log value` against `log N` over the rows
    /// where `value` is present.
    pub fn slope(&self, value: impl Fn(&StepRecord) -> Option<f64>) -> Option<f64> {
        let (n, v): (Vec<f64>, Vec<f64>) = self
            .steps
            .iter()
            .filter_map(|s| value(s).map(|v| (s.n as f64, v)))
            .unzip();
        regression_slope(&n, &v)
    }

    /// `N` strictly increasing and every value finite and non-negative.
    pub fn check_invariants(&self) -> Result<(), String> {
        for w in self.steps.windows(2) {
            if w[1].n <= w[0].n {
                return Err(format!("N not increasing at step {}", w[1].step));
            }
        }
        for s in &self.steps {
            let values = [s.eta, s.eta_classical, s.e1, s.e2, s.e, s.energy_err];
            if values.iter().flatten().any(|v| !v.is_finite() || *v < 0.0) {
                return Err(format!("invalid value at step {}", s.step));
            }
        }
        Ok(())
    }
}

/// Slope of the least-squares line through `(log x, log y)`; `None` with
/// fewer than two usable points.
pub fn regression_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0)
        .map(|(a, b)| (a.ln(), b.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// `log₂(E_{i-1}/E_i)` for consecutive levels of a halving sequence.
pub fn observed_rates(values: &[Option<f64>]) -> Vec<Option<f64>> {
    std::iter::once(None)
        .chain(values.windows(2).map(|w| match (w[0], w[1]) {
            (Some(a), Some(b)) if a > 0.0 && b > 0.0 => Some((a / b).log2()),
            _ => None,
        }))
        .take(values.len())
        .collect()
}
