//! The four verification suite implementations and their dispatcher.

pub mod berg;
pub mod dyadic;
pub mod mu_convergence;
pub mod trace_identity;

use std::time::Instant;

use crate::config::{ExperimentConfig, Suite};
use crate::report::{Artifact, CaseRecord, Report};

pub struct SuiteRun {
    pub report: Report,
    pub artifacts: Vec<Artifact>,
}

/// Executes the configured suite and assembles the report. Exit-status
/// handling is the caller's job ([`Report::all_passed`]).
pub fn run_suite(cfg: &ExperimentConfig) -> anyhow::Result<SuiteRun> {
    cfg.validate()?;
    let start = Instant::now();
    let (records, artifacts): (Vec<CaseRecord>, Vec<Artifact>) = match cfg.suite {
        Suite::Dyadic => dyadic::run(cfg)?,
        Suite::Berg => berg::run(cfg)?,
        Suite::TraceIdentity => trace_identity::run(cfg)?,
        Suite::MuConvergence => mu_convergence::run(cfg)?,
    };
    let report = Report::assemble(cfg, records, start.elapsed().as_millis() as u64);
    Ok(SuiteRun { report, artifacts })
}

/// Shortest round-trip decimal for CSV cells.
pub(crate) fn fmt(v: f64) -> String {
    format!("{v}")
}
