//! Report assembly and emission: one JSON report per run plus suite-specific
//! CSV tables. Records are sorted on (seed, case id) and every record
//! carries the seed that reproduces it. With the fixed-clock flag set the
//! report is byte-identical across runs (timestamps zeroed, runtimes
//! omitted).

use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::config::ExperimentConfig;

#[derive(Debug, Clone, Serialize)]
pub struct CaseRecord {
    pub seed: u64,
    pub case_id: String,
    pub passed: bool,
    /// Headline deviation of the record (suite-specific meaning, documented
    /// in `details`).
    pub deviation: f64,
    pub tolerance: f64,
    pub details: Value,
}

impl CaseRecord {
    pub fn new(seed: u64, case_id: impl Into<String>, deviation: f64, tolerance: f64) -> Self {
        CaseRecord {
            seed,
            case_id: case_id.into(),
            passed: deviation <= tolerance,
            deviation,
            tolerance,
            details: Value::Object(Map::new()),
        }
    }

    pub fn with_details(mut self, details: Value) -> Self {
        self.details = details;
        self
    }

    /// Marks failure regardless of the headline numbers (for structural
    /// checks folded into a record).
    pub fn fail(mut self, reason: &str) -> Self {
        self.passed = false;
        if let Value::Object(m) = &mut self.details {
            m.insert("failure".into(), Value::String(reason.into()));
        }
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub max_deviation: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub suite: String,
    pub generated_at_epoch_s: u64,
    pub config: ExperimentConfig,
    pub records: Vec<CaseRecord>,
    pub summary: Summary,
}

impl Report {
    pub fn assemble(
        config: &ExperimentConfig,
        mut records: Vec<CaseRecord>,
        runtime_ms: u64,
    ) -> Report {
        records.sort_by(|a, b| (a.seed, &a.case_id).cmp(&(b.seed, &b.case_id)));
        let passed = records.iter().filter(|r| r.passed).count();
        let max_deviation = records.iter().map(|r| r.deviation).fold(0.0, f64::max);
        let generated_at_epoch_s = if config.fixed_clock {
            0
        } else {
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0)
        };
        Report {
            schema_version: 1,
            suite: config.suite.name().to_string(),
            generated_at_epoch_s,
            config: config.clone(),
            summary: Summary {
                total: records.len(),
                passed,
                failed: records.len() - passed,
                max_deviation,
                runtime_ms: if config.fixed_clock {
                    None
                } else {
                    Some(runtime_ms)
                },
            },
            records,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn first_failure(&self) -> Option<&CaseRecord> {
        self.records.iter().find(|r| !r.passed)
    }

    pub fn to_json(&self) -> anyhow::Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn write_json(&self, path: &Path) -> anyhow::Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }
}

/// A named CSV artifact produced by a suite.
#[derive(Debug, Clone)]
pub struct Artifact {
    pub filename: &'static str,
    pub content: String,
}

/// Builds a details object from (key, value) pairs; serde_json maps are
/// sorted, so emission is deterministic.
pub fn details(pairs: &[(&str, Value)]) -> Value {
    let mut m = Map::new();
    for (k, v) in pairs {
        m.insert((*k).into(), v.clone());
    }
    Value::Object(m)
}

pub fn num(v: f64) -> Value {
    serde_json::json!(v)
}
