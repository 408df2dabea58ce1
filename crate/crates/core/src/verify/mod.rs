//! Verification records and the suites behind the `edl` command line.
//!
//! Every check becomes a [`VerificationRecord`]. Records are computed in
//! parallel and then sorted by `(command, inputs)`, so a report depends only
//! on the requested suite and the [`RunConfig`], apart from `runtime_ms`.

mod suites;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::Tolerance;
use crate::sampling::SamplingPlan;

pub use suites::{
    catalog_tasks, classical_tasks, ct_command_tasks, ct_formulas, ct_multiplicity, ct_orbits, ct_tasks,
    enumeration_task, relation_task, restricted_tasks, roots_tasks, row_tasks, run_tasks, split_tasks, suite_tasks,
    Suite, Task,
};

/// Version of the serialized report layout.
pub const REPORT_SCHEMA: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("unknown output format `{0}` (expected text, json or csv)")]
    Format(String),
    #[error("unknown suite `{0}`")]
    Suite(String),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = VerifyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "text" => Ok(Self::Text),
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            other => Err(VerifyError::Format(other.to_string())),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Text => "text",
            Self::Json => "json",
            Self::Csv => "csv",
        })
    }
}

/// Knobs shared by every verification run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub shards: usize,
    pub samples: usize,
    /// Gauss–Legendre nodes per piece and dimension.
    pub quad_nodes: usize,
    pub rel_tol: f64,
    pub sigma_tol: f64,
    pub output_format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            shards: 4,
            samples: 1_000_000,
            quad_nodes: 64,
            rel_tol: 1e-6,
            sigma_tol: 3.0,
            output_format: OutputFormat::Text,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), VerifyError> {
        if self.shards == 0 || self.samples == 0 || self.quad_nodes == 0 {
            return Err(VerifyError::Config("shards, samples and quad_nodes must be positive".into()));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(VerifyError::Config(format!("rel_tol must lie in (0, 1), got {}", self.rel_tol)));
        }
        if !(self.sigma_tol > 0.0 && self.sigma_tol.is_finite()) {
            return Err(VerifyError::Config(format!("sigma_tol must be positive, got {}", self.sigma_tol)));
        }
        Ok(())
    }

    pub fn plan(&self) -> SamplingPlan {
        SamplingPlan::new(self.samples, self.seed, self.shards)
    }

    pub fn tolerance(&self) -> Tolerance {
        Tolerance { rel: self.rel_tol, sigma: self.sigma_tol, ..Tolerance::default() }
    }
}

/// One line of a verification report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationRecord {
    pub command: String,
    pub inputs: String,
    /// Exact values print exactly; floating values in shortest round-trip form.
    pub expected: String,
    pub computed: String,
    pub abs_err: f64,
    pub rel_err: f64,
    /// Deviation in standard errors, for Monte Carlo estimates.
    pub sigma: Option<f64>,
    /// Acceptance rule that decided `pass`.
    pub tolerance: String,
    pub pass: bool,
    pub seed: Option<u64>,
    pub runtime_ms: u64,
    pub detail: String,
}

impl VerificationRecord {
    pub(crate) fn exact(command: &str, inputs: String, expected: String, computed: String, pass: bool) -> Self {
        let parse = |s: &str| s.parse::<f64>().ok();
        let (abs_err, rel_err) = match (parse(&expected), parse(&computed)) {
            (Some(e), Some(c)) => errors(e, c),
            _ => (if pass { 0.0 } else { f64::NAN }, if pass { 0.0 } else { f64::NAN }),
        };
        Self {
            command: command.to_string(),
            inputs,
            expected,
            computed,
            abs_err,
            rel_err,
            sigma: None,
            tolerance: "exact".into(),
            pass,
            seed: None,
            runtime_ms: 0,
            detail: String::new(),
        }
    }

    /// A deterministic comparison at relative tolerance `rel`.
    pub(crate) fn numeric(command: &str, inputs: String, expected: f64, computed: f64, rel: f64) -> Self {
        let (abs_err, rel_err) = errors(expected, computed);
        Self {
            command: command.to_string(),
            inputs,
            expected: expected.to_string(),
            computed: computed.to_string(),
            abs_err,
            rel_err,
            sigma: None,
            tolerance: format!("rel <= {rel:e}"),
            pass: rel_err <= rel && computed.is_finite(),
            seed: None,
            runtime_ms: 0,
            detail: String::new(),
        }
    }

    /// A Monte Carlo comparison: passes within `tol.sigma` standard errors
    /// or within `tol.stochastic_rel` relative error.
    pub(crate) fn stochastic(
        command: &str,
        inputs: String,
        expected: f64,
        computed: f64,
        std_error: f64,
        tol: Tolerance,
        seed: u64,
    ) -> Self {
        let (abs_err, rel_err) = errors(expected, computed);
        let sigma = (std_error > 0.0).then(|| abs_err / std_error);
        let pass = computed.is_finite() && (abs_err <= tol.sigma * std_error || rel_err <= tol.stochastic_rel);
        Self {
            command: command.to_string(),
            inputs,
            expected: expected.to_string(),
            computed: computed.to_string(),
            abs_err,
            rel_err,
            sigma,
            tolerance: stochastic_rule(tol),
            pass,
            seed: Some(seed),
            runtime_ms: 0,
            detail: format!("std_error = {std_error}"),
        }
    }

    /// A check that could not be evaluated. Always fails.
    pub(crate) fn failed(command: &str, inputs: String, reason: String) -> Self {
        Self {
            command: command.to_string(),
            inputs,
            expected: String::new(),
            computed: String::new(),
            abs_err: f64::NAN,
            rel_err: f64::NAN,
            sigma: None,
            tolerance: String::new(),
            pass: false,
            seed: None,
            runtime_ms: 0,
            detail: format!("error: {reason}"),
        }
    }

    pub(crate) fn with_detail(mut self, detail: impl Into<String>) -> Self {
        let detail = detail.into();
        if self.detail.is_empty() {
            self.detail = detail;
        } else if !detail.is_empty() {
            self.detail = format!("{}; {detail}", self.detail);
        }
        self
    }
}

pub(crate) fn stochastic_rule(tol: Tolerance) -> String {
    format!("{} sigma or rel <= {:e}", tol.sigma, tol.stochastic_rel)
}

fn errors(expected: f64, computed: f64) -> (f64, f64) {
    let abs = (computed - expected).abs();
    let rel = if expected == 0.0 { abs } else { abs / expected.abs() };
    (abs, rel)
}

/// Runs `f` and stamps the elapsed wall time on the record it returns.
pub(crate) fn timed(f: impl FnOnce() -> VerificationRecord) -> VerificationRecord {
    let start = Instant::now();
    let mut rec = f();
    rec.runtime_ms = start.elapsed().as_millis() as u64;
    rec
}

/// A complete run: configuration, sorted records and the overall verdict.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub config: RunConfig,
    pub records: Vec<VerificationRecord>,
    pub all_pass: bool,
}

impl VerificationReport {
    pub fn new(config: RunConfig, mut records: Vec<VerificationRecord>) -> Self {
        records.sort_by(|a, b| a.command.cmp(&b.command).then_with(|| a.inputs.cmp(&b.inputs)));
        let all_pass = !records.is_empty() && records.iter().all(|r| r.pass);
        Self { schema: REPORT_SCHEMA, config, records, all_pass }
    }

    /// Zeroes `runtime_ms` so that two reports can be compared byte for byte.
    pub fn without_timing(mut self) -> Self {
        for r in &mut self.records {
            r.runtime_ms = 0;
        }
        self
    }
}

/// Runs `tasks` and assembles the sorted report.
pub fn run_report(config: RunConfig, tasks: Vec<Task>) -> VerificationReport {
    VerificationReport::new(config, run_tasks(tasks))
}

/// Runs a named suite.
pub fn run_suite(suite: Suite, config: RunConfig) -> VerificationReport {
    run_report(config, suite_tasks(suite, &config))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        let c = RunConfig::default();
        c.validate().unwrap();
        assert_eq!(c.seed, 42);
        assert_eq!(c.tolerance().sigma, 3.0);
    }

    #[test]
    fn rejects_out_of_range_tolerance() {
        let c = RunConfig { rel_tol: 1.5, ..RunConfig::default() };
        assert!(c.validate().is_err());
        let c = RunConfig { shards: 0, ..RunConfig::default() };
        assert!(c.validate().is_err());
    }

    #[test]
    fn stochastic_rule_takes_looser_bound() {
        let tol = Tolerance::default();
        // 5 standard errors off but within 2%
        let r = VerificationRecord::stochastic("t", String::new(), 1.0, 1.01, 0.002, tol, 1);
        assert!(r.pass);
        let r = VerificationRecord::stochastic("t", String::new(), 1.0, 1.05, 0.002, tol, 1);
        assert!(!r.pass);
        assert!((r.sigma.unwrap() - 25.0).abs() < 1e-9);
    }

    #[test]
    fn report_sorts_records() {
        let a = VerificationRecord::exact("roots", "B2".into(), "8".into(), "8".into(), true);
        let b = VerificationRecord::exact("ct", "A2".into(), "90".into(), "90".into(), true);
        let rep = VerificationReport::new(RunConfig::default(), vec![a, b]);
        assert_eq!(rep.records[0].command, "ct");
        assert!(rep.all_pass);
    }

    #[test]
    fn format_parses() {
        assert_eq!("JSON".parse::<OutputFormat>().unwrap(), OutputFormat::Json);
        assert!("xml".parse::<OutputFormat>().is_err());
    }
}
