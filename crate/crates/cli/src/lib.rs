//! Batch front end: configuration, suite runner and reports for `mopkit`.

pub mod config;
pub mod report;
pub mod runner;

use std::path::Path;

use mopkit_core::{Error, MopSystem, Perturbation, PerturbTarget, Scalar};
use thiserror::Error;

pub use config::{Backend, FamilyName, Format, RunConfig, Suite};
pub use report::{ComputeReport, Record, Status, SuiteReport, VerifyReport};

pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numeric failure: {0}")]
    Numeric(Error),
    #[error("cannot write report: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Output(_) => EXIT_CONFIG,
            CliError::Numeric(_) => EXIT_NUMERIC,
        }
    }
}

/// A requested coefficient corruption (`--perturb a 1e-3`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerturbRequest {
    pub target: PerturbTarget,
    pub relative: String,
}

impl PerturbRequest {
    pub fn parse(target: &str, relative: &str) -> Result<Self, CliError> {
        let target = match target {
            "a" => PerturbTarget::A,
            "b" => PerturbTarget::B,
            other => return Err(CliError::Config(format!("perturbation target must be `a` or `b`, not `{other}`"))),
        };
        Ok(PerturbRequest { target, relative: relative.to_string() })
    }

    fn describe(&self) -> String {
        let t = match self.target {
            PerturbTarget::A => "a",
            PerturbTarget::B => "b",
        };
        format!("{t} relative {}", self.relative)
    }

    fn apply<S: Scalar>(&self, sys: MopSystem<S>) -> Result<MopSystem<S>, CliError> {
        let relative = S::parse_decimal(sys.ctx(), &self.relative)
            .map_err(|e| CliError::Config(format!("perturbation size: {e}")))?;
        sys.with_perturbation(Perturbation { target: self.target, relative }).map_err(|e| CliError::Config(e.to_string()))
    }
}

fn header(config: &RunConfig, command: &str, perturb: Option<&PerturbRequest>) -> report::Header {
    report::Header {
        command: command.into(),
        family: config.family.to_string(),
        backend: config.backend_name(),
        parameters: config.parameters.clone(),
        max_total_degree: config.max_total_degree,
        perturbation: perturb.map(PerturbRequest::describe),
    }
}

/// Runs `suites` (or the configured ones) and assembles the report.
pub fn verify(config: &RunConfig, suites: Option<&[Suite]>, perturb: Option<&PerturbRequest>) -> Result<VerifyReport, CliError> {
    let suites = suites.unwrap_or(&config.suites);
    config.check_suites(suites)?;
    let pool = runner::thread_pool()?;
    let max = config.max_total_degree;
    let results = match config.build()? {
        Backend::Exact(sys) => {
            let sys = match perturb {
                Some(p) => p.apply(sys)?,
                None => sys,
            };
            runner::run_suites(&sys, suites, max, &pool)
        }
        Backend::Float(sys) => {
            let sys = match perturb {
                Some(p) => p.apply(sys)?,
                None => sys,
            };
            runner::run_suites(&sys, suites, max, &pool)
        }
    };
    Ok(VerifyReport::new(header(config, "verify", perturb), results))
}

/// Tables of polynomials, coefficients, matrices and equations for every index.
pub fn compute(config: &RunConfig) -> Result<ComputeReport, CliError> {
    let pool = runner::thread_pool()?;
    let max = config.max_total_degree;
    let (tables, numeric) = match config.build()? {
        Backend::Exact(sys) => runner::run_tables(&sys, max, &pool),
        Backend::Float(sys) => runner::run_tables(&sys, max, &pool),
    };
    Ok(ComputeReport::new(header(config, "compute", None), tables, numeric))
}

/// Serialized report text in `format`.
pub fn render<T: serde::Serialize>(report: &T, csv: impl FnOnce() -> Result<String, csv::Error>, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => serde_json::to_string_pretty(report).map(|s| s + "\n").map_err(|e| CliError::Output(e.to_string())),
        Format::Csv => csv().map_err(|e| CliError::Output(e.to_string())),
    }
}

/// Writes to `path`, or stdout when `None`.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Output(format!("{}: {e}", p.display()))),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Output(e.to_string()))
        }
    }
}

/// Format for `path`: explicit choice first, then a `.csv` extension, else JSON.
pub fn format_for(config: &RunConfig, path: Option<&Path>) -> Format {
    if config.format == Format::Csv {
        return Format::Csv;
    }
    match path.and_then(Path::extension) {
        Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
        _ => config.format,
    }
}
