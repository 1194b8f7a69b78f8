//! Fit reports: JSON with full precision and plain-text tables.

use std::fmt::Write as _;

use fdglm::{ConditionReport, Family, FitResult, Link, WaldInterval};
use indexmap::IndexMap;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct ModelInfo {
    pub family: Family,
    pub link: Link,
    pub response: String,
    pub data: String,
    pub n_obs: usize,
    pub rows_dropped: usize,
    pub level: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Convergence {
    pub converged: bool,
    pub iterations: usize,
    pub final_grad_norm: f64,
    pub grad_tol_used: f64,
    pub log_likelihood: f64,
}

/// Everything `fit` reports. The six data keys are always present; `intervals`
/// is null when the fit did not converge.
#[derive(Debug, Clone, Serialize)]
pub struct FitReport {
    pub model: ModelInfo,
    pub coefficients: IndexMap<String, f64>,
    pub covariance: Vec<Vec<f64>>,
    pub std_errors: IndexMap<String, f64>,
    pub intervals: Option<IndexMap<String, WaldInterval>>,
    pub diagnostics: ConditionReport,
    pub convergence: Convergence,
}

impl FitReport {
    pub fn new(
        model: ModelInfo,
        names: &[String],
        fit: &FitResult,
        intervals: Option<Vec<WaldInterval>>,
        diagnostics: ConditionReport,
    ) -> Self {
        let named = |v: &[f64]| names.iter().cloned().zip(v.iter().copied()).collect::<IndexMap<_, _>>();
        let cov = &fit.covariance;
        Self {
            model,
            coefficients: named(fit.theta_hat.as_slice()),
            covariance: (0..cov.nrows()).map(|i| cov.row(i).iter().copied().collect()).collect(),
            std_errors: named(fit.std_errors().as_slice()),
            intervals: intervals.map(|iv| names.iter().cloned().zip(iv).collect()),
            diagnostics,
            convergence: Convergence {
                converged: fit.converged,
                iterations: fit.iterations,
                final_grad_norm: fit.final_grad_norm,
                grad_tol_used: fit.grad_tol_used,
                log_likelihood: *fit.loglik_trace.last().expect("trace holds the starting value"),
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable") + "\n"
    }

    /// Scientific notation with `precision` significant digits.
    pub fn to_table(&self, precision: usize) -> String {
        let f = |x: f64| sci(x, precision);
        let m = &self.model;
        let mut out = String::new();
        let _ = writeln!(out, "{} regression, {} link", family_title(m.family), m.link.name());
        let _ = writeln!(out, "data: {}  response: {}", m.data, m.response);
        let _ = writeln!(out, "observations: {}  dropped rows: {}", m.n_obs, m.rows_dropped);
        let c = &self.convergence;
        if c.converged {
            let _ = writeln!(out, "converged after {} iterations", c.iterations);
        } else {
            let _ = writeln!(out, "NOT CONVERGED after {} iterations", c.iterations);
        }
        let _ = writeln!(
            out,
            "max |score|: {} (tolerance {})  log-likelihood: {}",
            f(c.final_grad_norm),
            f(c.grad_tol_used),
            f(c.log_likelihood)
        );
        out.push('\n');

        let width = self.coefficients.keys().map(|k| k.len()).max().unwrap_or(0).max(4);
        let col = precision + 7;
        let pct = format!("{}%", trim_number(m.level * 100.0));
        let _ = writeln!(
            out,
            "{:<width$}  {:>col$}  {:>col$}  {:>col$}  {:>col$}",
            "term",
            "estimate",
            "std_error",
            format!("lower {pct}"),
            format!("upper {pct}"),
        );
        for (j, (name, est)) in self.coefficients.iter().enumerate() {
            let se = self.std_errors[j];
            let (lo, hi) = match &self.intervals {
                Some(iv) => (f(iv[j].lower), f(iv[j].upper)),
                None => ("NA".into(), "NA".into()),
            };
            let _ = writeln!(out, "{name:<width$}  {:>col$}  {:>col$}  {lo:>col$}  {hi:>col$}", f(*est), f(se));
        }
        out.push_str("\ncovariance\n");
        for (name, row) in self.coefficients.keys().zip(&self.covariance) {
            let cells: Vec<String> = row.iter().map(|&v| format!("{:>col$}", f(v))).collect();
            let _ = writeln!(out, "{name:<width$}  {}", cells.join("  "));
        }
        out.push_str("\ndiagnostics\n");
        out.push_str(&self.diagnostics.to_key_value());
        out
    }
}

fn family_title(family: Family) -> &'static str {
    match family {
        Family::Poisson => "Poisson",
        Family::Bernoulli => "Bernoulli",
        Family::GaussianUnitVar => "Gaussian (unit variance)",
    }
}

fn trim_number(x: f64) -> String {
    let s = format!("{x:.6}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// `x` in scientific notation with `digits` significant digits; `NA` for NaN.
pub fn sci(x: f64, digits: usize) -> String {
    if x.is_nan() {
        "NA".into()
    } else {
        format!("{:.*e}", digits.saturating_sub(1), x)
    }
}
