//! Run configuration: a TOML document naming a family, its parameters, the
//! index range and the suites to run.
//!
//! ```toml
//! family = "laguerre2"
//! max_total_degree = 6
//! suites = ["recurrence", "compat"]   # optional, default: every applicable suite
//!
//! [parameters]
//! alpha = "1"
//! c1 = "1"
//! c2 = "2"
//!
//! [output]
//! path = "report.json"
//! format = "json"                     # or "csv"
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use clap::ValueEnum;
use mopkit_core::{BigFloat, Error, MopSystem, Precision, Rational, Scalar, WeightSystem};
use serde::Deserialize;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
pub enum FamilyName {
    #[serde(rename = "hermite")]
    Hermite,
    #[serde(rename = "laguerre2")]
    Laguerre2,
    #[serde(rename = "laguerre1")]
    Laguerre1,
    #[serde(rename = "cubic")]
    Cubic,
    /// One weight `exp(-x^2 + c x)`.
    #[serde(rename = "classical_r1")]
    ClassicalR1,
}

impl fmt::Display for FamilyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyName::Hermite => "hermite",
            FamilyName::Laguerre2 => "laguerre2",
            FamilyName::Laguerre1 => "laguerre1",
            FamilyName::Cubic => "cubic",
            FamilyName::ClassicalR1 => "classical_r1",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    /// Nearest-neighbor recurrence, type II and type I.
    Recurrence,
    /// Difference equations between neighboring coefficients and commutation of transfer matrices.
    Pde,
    /// Christoffel-Darboux identity along two lattice paths.
    Cd,
    /// Type II ladder equations.
    Ladder2,
    /// Type I ladder equations.
    Ladder1,
    /// Compatibility of ladder and transfer matrices.
    Compat,
    /// Derived differential equations and their annihilation checks.
    Ode,
    /// Classical compatibility conditions (single weight only).
    S1s2,
}

impl Suite {
    pub const ALL: [Suite; 8] =
        [Suite::Recurrence, Suite::Pde, Suite::Cd, Suite::Ladder2, Suite::Ladder1, Suite::Compat, Suite::Ode, Suite::S1s2];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Recurrence => "recurrence",
            Suite::Pde => "pde",
            Suite::Cd => "cd",
            Suite::Ladder2 => "ladder2",
            Suite::Ladder1 => "ladder1",
            Suite::Compat => "compat",
            Suite::Ode => "ode",
            Suite::S1s2 => "s1s2",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    path: Option<PathBuf>,
    format: Option<Format>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    family: FamilyName,
    max_total_degree: u32,
    precision_digits: Option<u32>,
    suites: Option<Vec<Suite>>,
    #[serde(default)]
    parameters: BTreeMap<String, toml::Value>,
    output: Option<RawOutput>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub family: FamilyName,
    /// Parameter name to its text as given.
    pub parameters: BTreeMap<String, String>,
    pub max_total_degree: u32,
    pub precision_digits: Option<u32>,
    pub suites: Vec<Suite>,
    pub output_path: Option<PathBuf>,
    pub format: Format,
}

/// A configured system in its backend.
#[derive(Debug)]
pub enum Backend {
    Exact(MopSystem<Rational>),
    Float(MopSystem<BigFloat>),
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// `prefix1, prefix2, ...` as present in `params`, requiring no gaps.
fn numbered(params: &BTreeMap<String, String>, prefix: &str) -> Result<Vec<String>, CliError> {
    let mut out = Vec::new();
    while let Some(v) = params.get(&format!("{prefix}{}", out.len() + 1)) {
        out.push(v.clone());
    }
    if out.is_empty() {
        return Err(invalid(format!("parameter `{prefix}1` is required")));
    }
    Ok(out)
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| invalid(e.to_string()))?;
        let mut parameters = BTreeMap::new();
        for (name, value) in raw.parameters {
            let text = match value {
                toml::Value::String(s) => s,
                toml::Value::Integer(i) => i.to_string(),
                other => {
                    return Err(invalid(format!(
                        "parameter `{name}` must be a string such as \"3/4\" or an integer, not {}",
                        other.type_str()
                    )))
                }
            };
            parameters.insert(name, text);
        }
        let applicable = applicable_suites(raw.family);
        let suites = match raw.suites {
            None => applicable.clone(),
            Some(list) => {
                if list.is_empty() {
                    return Err(invalid("`suites` must not be empty"));
                }
                let mut list = list;
                list.sort();
                list.dedup();
                list
            }
        };
        let config = RunConfig {
            family: raw.family,
            parameters,
            max_total_degree: raw.max_total_degree,
            precision_digits: raw.precision_digits,
            suites,
            output_path: raw.output.as_ref().and_then(|o| o.path.clone()),
            format: raw.output.and_then(|o| o.format).unwrap_or(Format::Json),
        };
        config.check_suites(&config.suites)?;
        config.check_parameters()?;
        Ok(config)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn check_suites(&self, suites: &[Suite]) -> Result<(), CliError> {
        let applicable = applicable_suites(self.family);
        match suites.iter().find(|s| !applicable.contains(s)) {
            Some(s) => Err(invalid(format!("suite `{}` does not apply to family {}", s.name(), self.family))),
            None => Ok(()),
        }
    }

    fn expected_names(&self) -> Result<Vec<String>, CliError> {
        let p = &self.parameters;
        let mut expected: Vec<String> = match self.family {
            FamilyName::Laguerre1 => (1..=numbered(p, "alpha")?.len()).map(|j| format!("alpha{j}")).collect(),
            FamilyName::ClassicalR1 => vec!["c".into()],
            _ => (1..=numbered(p, "c")?.len()).map(|j| format!("c{j}")).collect(),
        };
        if self.family == FamilyName::Laguerre2 {
            expected.push("alpha".into());
        }
        Ok(expected)
    }

    fn check_parameters(&self) -> Result<(), CliError> {
        let expected = self.expected_names()?;
        for name in &expected {
            if !self.parameters.contains_key(name) {
                return Err(invalid(format!("parameter `{name}` is required for family {}", self.family)));
            }
        }
        if let Some(extra) = self.parameters.keys().find(|k| !expected.contains(k)) {
            return Err(invalid(format!("unknown parameter `{extra}` for family {}", self.family)));
        }
        match (self.family, self.precision_digits) {
            (FamilyName::Cubic, None) => return Err(invalid("family cubic requires `precision_digits`")),
            (FamilyName::Cubic, Some(_)) => {}
            (_, Some(_)) => {
                return Err(invalid(format!(
                    "`precision_digits` applies only to family cubic; {} is computed exactly",
                    self.family
                )))
            }
            _ => {}
        }
        // parameter constraints of the weight systems (cubic moments are built later)
        if self.family == FamilyName::Cubic {
            let prec = Precision::digits(self.precision_digits.expect("checked"));
            let cs = self.values::<BigFloat>(prec, "c")?;
            if self.precision_digits < Some(30) {
                return Err(invalid("family cubic needs precision_digits >= 30"));
            }
            for i in 0..cs.len() {
                if let Some(j) = cs[i + 1..].iter().position(|c| c == &cs[i]) {
                    return Err(invalid(format!("c{} and c{} must differ", i + 1, i + j + 2)));
                }
            }
            return Ok(());
        }
        self.exact_weights().map(|_| ())
    }

    fn value<S: Scalar>(&self, ctx: S::Ctx, name: &str) -> Result<S, CliError> {
        S::parse(ctx, &self.parameters[name]).map_err(|e| invalid(format!("parameter `{name}`: {e}")))
    }

    fn values<S: Scalar>(&self, ctx: S::Ctx, prefix: &str) -> Result<Vec<S>, CliError> {
        numbered(&self.parameters, prefix)?.iter().enumerate().map(|(j, _)| self.value(ctx, &format!("{prefix}{}", j + 1))).collect()
    }

    fn exact_weights(&self) -> Result<WeightSystem<Rational>, CliError> {
        let ctx = mopkit_core::Exact;
        let built = match self.family {
            FamilyName::Hermite => WeightSystem::hermite(self.values(ctx, "c")?),
            FamilyName::Laguerre2 => WeightSystem::laguerre_second(self.value(ctx, "alpha")?, self.values(ctx, "c")?),
            FamilyName::Laguerre1 => WeightSystem::laguerre_first(self.values(ctx, "alpha")?),
            FamilyName::ClassicalR1 => WeightSystem::hermite(vec![self.value(ctx, "c")?]),
            FamilyName::Cubic => unreachable!("cubic runs in floating point"),
        };
        built.map_err(|e| invalid(e.to_string()))
    }

    /// Builds the weight system. Cubic moment seeding may fail numerically.
    pub fn build(&self) -> Result<Backend, CliError> {
        if self.family != FamilyName::Cubic {
            return Ok(Backend::Exact(MopSystem::new(self.exact_weights()?)));
        }
        let prec = Precision::digits(self.precision_digits.expect("validated"));
        let ws = WeightSystem::cubic(self.values(prec, "c")?).map_err(|e| match e {
            Error::InvalidParameter(msg) => invalid(msg),
            e => CliError::Numeric(e),
        })?;
        Ok(Backend::Float(MopSystem::new(ws)))
    }

    pub fn backend_name(&self) -> String {
        match self.precision_digits {
            Some(d) if self.family == FamilyName::Cubic => format!("bigfloat({d} digits)"),
            _ => "exact".into(),
        }
    }
}

pub fn applicable_suites(family: FamilyName) -> Vec<Suite> {
    Suite::ALL.into_iter().filter(|&s| s != Suite::S1s2 || family == FamilyName::ClassicalR1).collect()
}
