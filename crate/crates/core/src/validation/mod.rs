//! Named cross-checks between the engine, the eigenbasis oracle, and the
//! closed forms for the cat models.

mod checks;
pub mod synthetic;

use std::fmt;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};

pub use checks::{
    asymptotes, basis_enlargement, closed_form_halpha, closed_form_hcc, displacement_closed_form,
    figure_shapes, finite_difference, gauge_invariance, metric_contraction, oracle_equivalence,
    sld_closed_forms, weak_commutativity,
};

/// Every check, in execution order.
pub const CHECKS: &[&str] = &[
    "closed-form-hcc",
    "closed-form-halpha",
    "weak-commutativity",
    "displacement-closed-form",
    "sld-closed-forms",
    "oracle-equivalence",
    "asymptotes",
    "figure-shapes",
    "gauge-invariance",
    "basis-enlargement",
    "metric-contraction",
    "finite-difference",
];

/// Wall-clock budget for a complete run.
pub const TOTAL_BUDGET: Duration = Duration::from_secs(60);

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationConfig {
    /// Replaces every numerical-precision tolerance. Tolerances on physical
    /// approximations (asymptotes, figure shapes) and runtime budgets are
    /// unaffected.
    pub tol: Option<f64>,
    pub only: Option<String>,
    pub seed: u64,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        Self {
            tol: None,
            only: None,
            seed: 0x5eed,
        }
    }
}

impl ValidationConfig {
    pub(crate) fn precision(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

/// One measured quantity inside a check.
#[derive(Debug, Clone, PartialEq)]
pub struct Part {
    pub label: String,
    pub error: f64,
    pub tolerance: f64,
    /// Where the worst error occurred.
    pub at: String,
}

impl Part {
    pub fn new(label: impl Into<String>, tolerance: f64) -> Self {
        Self {
            label: label.into(),
            error: 0.0,
            tolerance,
            at: String::new(),
        }
    }

    /// Records `error` if it is the worst so far. NaN is sticky.
    pub fn observe(&mut self, error: f64, at: impl FnOnce() -> String) {
        if self.error.is_nan() {
            return;
        }
        if error.is_nan() || error > self.error || self.at.is_empty() {
            self.error = error;
            self.at = at();
        }
    }

    pub fn passed(&self) -> bool {
        self.error <= self.tolerance
    }

    fn severity(&self) -> f64 {
        if self.error.is_nan() {
            f64::INFINITY
        } else if self.tolerance > 0.0 {
            self.error / self.tolerance
        } else if self.error > 0.0 {
            f64::INFINITY
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    /// Error and tolerance of the part closest to (or furthest past) its
    /// limit.
    pub max_error: f64,
    pub tolerance: f64,
    pub elapsed: Duration,
    pub parts: Vec<Part>,
    pub detail: String,
}

impl CheckReport {
    fn from_parts(name: &str, parts: Vec<Part>, elapsed: Duration) -> Self {
        let worst = parts
            .iter()
            .max_by(|a, b| a.severity().total_cmp(&b.severity()));
        let (max_error, tolerance) = worst.map_or((0.0, 0.0), |p| (p.error, p.tolerance));
        let detail = parts
            .iter()
            .map(|p| {
                format!(
                    "{}: {:.3e} (tol {:.1e}) at {}",
                    p.label, p.error, p.tolerance, p.at
                )
            })
            .collect::<Vec<_>>()
            .join("; ");
        Self {
            name: name.into(),
            passed: !parts.is_empty() && parts.iter().all(Part::passed),
            max_error,
            tolerance,
            elapsed,
            parts,
            detail,
        }
    }

    fn failed(name: &str, err: &Error, elapsed: Duration) -> Self {
        Self {
            name: name.into(),
            passed: false,
            max_error: f64::NAN,
            tolerance: f64::NAN,
            elapsed,
            parts: vec![],
            detail: format!("aborted: {err}"),
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:<26} max_error={:.3e} tol={:.1e} time={:.3}s",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.max_error,
            self.tolerance,
            self.elapsed.as_secs_f64()
        )
    }
}

pub fn run_check(name: &str, cfg: &ValidationConfig) -> Result<CheckReport> {
    let check: fn(&ValidationConfig) -> Result<Vec<Part>> = match name {
        "closed-form-hcc" => closed_form_hcc,
        "closed-form-halpha" => closed_form_halpha,
        "weak-commutativity" => weak_commutativity,
        "displacement-closed-form" => displacement_closed_form,
        "sld-closed-forms" => sld_closed_forms,
        "oracle-equivalence" => oracle_equivalence,
        "asymptotes" => asymptotes,
        "figure-shapes" => figure_shapes,
        "gauge-invariance" => gauge_invariance,
        "basis-enlargement" => basis_enlargement,
        "metric-contraction" => metric_contraction,
        "finite-difference" => finite_difference,
        other => {
            return Err(Error::InvalidConfig(format!(
                "unknown check `{other}`; known: {}",
                CHECKS.join(", ")
            )))
        }
    };
    let start = Instant::now();
    let outcome = check(cfg);
    let elapsed = start.elapsed();
    Ok(match outcome {
        Ok(parts) => CheckReport::from_parts(name, parts, elapsed),
        Err(err) => CheckReport::failed(name, &err, elapsed),
    })
}

/// Runs the selected check, or all of them.
pub fn run(cfg: &ValidationConfig) -> Result<Vec<CheckReport>> {
    match &cfg.only {
        Some(name) => Ok(vec![run_check(name, cfg)?]),
        None => CHECKS.iter().map(|name| run_check(name, cfg)).collect(),
    }
}
