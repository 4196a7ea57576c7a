//! Runs suites and tables over every index, in parallel, with deterministic output order.

use mopkit_core::diffeq::{verify_annihilation, verify_annihilation_weighted};
use mopkit_core::{Error, LatticePath, MopSystem, MultiIndex, Result, Scalar, Verification};
use rayon::prelude::*;

use crate::config::Suite;
use crate::report::{
    matrix_entries, ode_strings, poly_strings, IndexTable, Record, Status, SuiteReport, TransferEntry,
};
use crate::CliError;

/// Thread pool capped by `MOPKIT_THREADS` when set.
pub fn thread_pool() -> std::result::Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("MOPKIT_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Config(format!("MOPKIT_THREADS must be a positive integer, not `{v}`")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| CliError::Config(format!("cannot start worker threads: {e}")))
}

fn indices<S: Scalar>(sys: &MopSystem<S>, max_total: u32) -> Vec<MultiIndex> {
    MultiIndex::all_up_to(sys.r(), max_total)
}

/// Folds several checks at one index into one record.
fn record(index: &MultiIndex, outcomes: Vec<Result<Verification>>) -> Record {
    let mut rec = Record { index: index.to_string(), status: Status::Pass, residual: Some(0.0), flags: Vec::new(), message: None };
    let mut messages = Vec::new();
    for outcome in outcomes {
        match outcome {
            Ok(v) => {
                rec.residual = rec.residual.map(|r| r.max(v.max_residual));
                rec.flags.extend(v.flags.into_iter().map(|f| format!("{}: {f}", v.check)));
            }
            Err(Error::DegenerateElimination { index }) => {
                rec.flags.push(Error::DegenerateElimination { index }.to_string());
            }
            Err(e) => {
                let status = if e.is_numeric_failure() { Status::Error } else { Status::Fail };
                if let Error::IdentityViolation { residual, .. } = &e {
                    rec.residual = rec.residual.map(|r| r.max(*residual));
                } else {
                    rec.residual = None;
                }
                rec.status = rec.status.max_with(status);
                messages.push(e.to_string());
            }
        }
    }
    if rec.status == Status::Pass && !rec.flags.is_empty() {
        rec.status = Status::Flag;
    }
    if !messages.is_empty() {
        rec.message = Some(messages.join("; "));
    }
    rec
}

impl Status {
    fn rank(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::Flag => 1,
            Status::Fail => 2,
            Status::Error => 3,
        }
    }

    fn max_with(self, other: Status) -> Status {
        if other.rank() > self.rank() { other } else { self }
    }
}

fn ode_checks<S: Scalar>(sys: &MopSystem<S>, n: &MultiIndex) -> Vec<Result<Verification>> {
    let mut out = Vec::new();
    let location = n.to_string();
    out.push(sys.derive_ode_type2(n).and_then(|ode| verify_annihilation(&ode, &sys.type2(n)?.p, &location)));
    match sys.derive_ode_type1(n) {
        Ok(ode) => {
            let t = match sys.type1(n) {
                Ok(t) => t,
                Err(e) => return vec![Err(e)],
            };
            for l in 0..sys.r() {
                let vp = sys.weights().potential(l).derivative();
                out.push(verify_annihilation_weighted(&ode, &t.a[l], &vp, &format!("{location} component {}", l + 1)));
            }
        }
        Err(e) => out.push(Err(e)),
    }
    out
}

fn suite_checks<S: Scalar>(sys: &MopSystem<S>, suite: Suite, n: &MultiIndex) -> Vec<Result<Verification>> {
    match suite {
        Suite::Recurrence => vec![sys.verify_nn_recurrence(n)],
        Suite::Pde => vec![sys.verify_pde(n), sys.verify_w_commutation(n)],
        Suite::Cd => {
            let (a, b) = (LatticePath::first_coordinate_first(n), LatticePath::last_coordinate_first(n));
            vec![sys.verify_cd(n, &a, &b)]
        }
        Suite::Ladder2 => vec![sys.verify_ladder_type2(n)],
        Suite::Ladder1 => vec![sys.verify_ladder_type1(n)],
        Suite::Compat => vec![sys.verify_compatibility(n)],
        Suite::Ode => ode_checks(sys, n),
        Suite::S1s2 => vec![sys.verify_classical_s1_s2(n.get(0))],
    }
}

pub fn run_suites<S: Scalar>(
    sys: &MopSystem<S>,
    suites: &[Suite],
    max_total: u32,
    pool: &rayon::ThreadPool,
) -> Vec<SuiteReport> {
    let all = indices(sys, max_total);
    suites
        .iter()
        .map(|&suite| {
            let records = pool.install(|| all.par_iter().map(|n| record(n, suite_checks(sys, suite, n))).collect());
            SuiteReport { name: suite.name().to_string(), records }
        })
        .collect()
}

fn table<S: Scalar>(sys: &MopSystem<S>, n: &MultiIndex) -> (IndexTable, bool) {
    let mut t = IndexTable { index: n.to_string(), ..IndexTable::default() };
    let mut numeric = false;
    let mut note = |t: &mut IndexTable, what: &str, e: Error| {
        if let Error::DegenerateElimination { .. } = e {
            t.notes.push(format!("{what}: {e}"));
        } else {
            numeric |= e.is_numeric_failure();
            t.errors.push(format!("{what}: {e}"));
        }
    };
    match sys.type2(n) {
        Ok(p) => t.type2 = Some(poly_strings(&p.p)),
        Err(e) => note(&mut t, "type II", e),
    }
    match sys.type1(n) {
        Ok(a) => t.type1 = Some(a.a.iter().map(poly_strings).collect()),
        Err(e) => note(&mut t, "type I", e),
    }
    match sys.nn_coeffs(n) {
        Ok(c) => {
            t.a = Some(c.a.iter().map(Scalar::canonical).collect());
            t.b = Some(c.b.iter().map(Scalar::canonical).collect());
        }
        Err(e) => note(&mut t, "recurrence coefficients", e),
    }
    match sys.ladder_matrix(n) {
        Ok(m) => t.ladder_matrix = Some(matrix_entries(&m.matrix)),
        Err(e) => note(&mut t, "ladder matrix", e),
    }
    match (0..sys.r())
        .map(|l| sys.transfer_matrix(n, l).map(|w| TransferEntry { direction: l + 1, matrix: matrix_entries(&w.matrix) }))
        .collect::<Result<Vec<_>>>()
    {
        Ok(ws) => t.transfer_matrices = Some(ws),
        Err(e) => note(&mut t, "transfer matrix", e),
    }
    match sys.derive_ode_type2(n) {
        Ok(o) => t.ode_type2 = Some(ode_strings(&o)),
        Err(e) => note(&mut t, "type II equation", e),
    }
    match sys.derive_ode_type1(n) {
        Ok(o) => t.ode_type1 = Some(ode_strings(&o)),
        Err(e) => note(&mut t, "type I equation", e),
    }
    (t, numeric)
}

/// Tables for every index; the flag reports whether any numeric failure occurred.
pub fn run_tables<S: Scalar>(sys: &MopSystem<S>, max_total: u32, pool: &rayon::ThreadPool) -> (Vec<IndexTable>, bool) {
    let all = indices(sys, max_total);
    let rows: Vec<(IndexTable, bool)> = pool.install(|| all.par_iter().map(|n| table(sys, n)).collect());
    let numeric = rows.iter().any(|(_, f)| *f);
    (rows.into_iter().map(|(t, _)| t).collect(), numeric)
}
