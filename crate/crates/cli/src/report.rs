//! Report documents and their JSON / CSV serializations.

use std::collections::BTreeMap;

use mopkit_core::{LaurentMatrix, LaurentPoly, OdeCoeffs, Poly, Scalar};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    /// Passed with observations (skipped ratio relation, degenerate elimination).
    Flag,
    Fail,
    /// The numbers could not be produced (not normal, precision exhausted).
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub index: String,
    pub status: Status,
    pub residual: Option<f64>,
    pub flags: Vec<String>,
    pub message: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub records: Vec<Record>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub flag: usize,
    pub fail: usize,
    pub error: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Header {
    pub command: String,
    pub family: String,
    pub backend: String,
    pub parameters: BTreeMap<String, String>,
    pub max_total_degree: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perturbation: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    #[serde(flatten)]
    pub header: Header,
    pub suites: Vec<SuiteReport>,
    pub summary: Summary,
    pub exit_code: i32,
}

impl VerifyReport {
    pub fn new(header: Header, suites: Vec<SuiteReport>) -> Self {
        let mut summary = Summary::default();
        for r in suites.iter().flat_map(|s| &s.records) {
            match r.status {
                Status::Pass => summary.pass += 1,
                Status::Flag => summary.flag += 1,
                Status::Fail => summary.fail += 1,
                Status::Error => summary.error += 1,
            }
        }
        let exit_code = if summary.error > 0 {
            crate::EXIT_NUMERIC
        } else if summary.fail > 0 {
            crate::EXIT_VERIFY
        } else {
            0
        };
        VerifyReport { header, suites, summary, exit_code }
    }

    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["suite", "index", "status", "residual", "flags", "message"])?;
        for s in &self.suites {
            for r in &s.records {
                let status = serde_json::to_value(r.status).expect("status serializes");
                w.write_record([
                    s.name.as_str(),
                    &r.index,
                    status.as_str().unwrap_or_default(),
                    &r.residual.map(|v| format!("{v:e}")).unwrap_or_default(),
                    &r.flags.join("; "),
                    r.message.as_deref().unwrap_or_default(),
                ])?;
            }
        }
        Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv is utf-8"))
    }
}

/// A Laurent polynomial `sum_k coeffs[k] x^(min_degree + k)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LaurentEntry {
    pub min_degree: i64,
    pub coeffs: Vec<String>,
}

impl LaurentEntry {
    pub fn new<S: Scalar>(p: &LaurentPoly<S>) -> Self {
        LaurentEntry { min_degree: p.min_degree().unwrap_or(0), coeffs: p.coeffs().iter().map(Scalar::canonical).collect() }
    }
}

pub fn poly_strings<S: Scalar>(p: &Poly<S>) -> Vec<String> {
    p.coeffs().iter().map(Scalar::canonical).collect()
}

pub fn matrix_entries<S: Scalar>(m: &LaurentMatrix<S>) -> Vec<Vec<LaurentEntry>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| LaurentEntry::new(m.get(i, j))).collect()).collect()
}

/// Coefficients of `y^(k)`, `k = 0..=order`, each ascending in powers of x.
pub fn ode_strings<S: Scalar>(ode: &OdeCoeffs<S>) -> Vec<Vec<String>> {
    ode.coeffs.iter().map(poly_strings).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransferEntry {
    pub direction: usize,
    pub matrix: Vec<Vec<LaurentEntry>>,
}

/// Everything computed at one index; absent pieces are explained in `notes`.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct IndexTable {
    pub index: String,
    /// Ascending coefficients of `P_n`.
    pub type2: Option<Vec<String>>,
    /// Ascending coefficients of each `A_{n,j}`.
    pub type1: Option<Vec<Vec<String>>>,
    pub a: Option<Vec<String>>,
    pub b: Option<Vec<String>>,
    pub ladder_matrix: Option<Vec<Vec<LaurentEntry>>>,
    /// `W(n + e_l)` for each direction `l` (1-based).
    pub transfer_matrices: Option<Vec<TransferEntry>>,
    pub ode_type2: Option<Vec<Vec<String>>>,
    pub ode_type1: Option<Vec<Vec<String>>>,
    pub notes: Vec<String>,
    pub errors: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComputeReport {
    #[serde(flatten)]
    pub header: Header,
    pub indices: Vec<IndexTable>,
    pub exit_code: i32,
}

impl ComputeReport {
    pub fn new(header: Header, indices: Vec<IndexTable>, numeric_failure: bool) -> Self {
        ComputeReport { header, indices, exit_code: if numeric_failure { crate::EXIT_NUMERIC } else { 0 } }
    }

    /// Coefficient table: one row per index and direction.
    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["index", "direction", "a", "b"])?;
        for t in &self.indices {
            let (Some(a), Some(b)) = (&t.a, &t.b) else { continue };
            for (j, (aj, bj)) in a.iter().zip(b).enumerate() {
                w.write_record([t.index.as_str(), &(j + 1).to_string(), aj, bj])?;
            }
        }
        Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv is utf-8"))
    }
}
