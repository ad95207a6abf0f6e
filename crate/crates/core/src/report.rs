//! Verification records and the versioned JSON report.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::symexpr::ZeroStatus;
use crate::tensorcalc::Assessment;

pub const REPORT_VERSION: u32 = 1;

/// Outcome of one check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Zero,
    ProbablyZero,
    NonZero,
    Refused,
    Error,
}

impl Status {
    /// Zero or ProbablyZero.
    pub fn passes(self) -> bool {
        matches!(self, Status::Zero | Status::ProbablyZero)
    }
}

impl From<ZeroStatus> for Status {
    /// Sampled evidence of a nonzero value is reported as NonZero.
    fn from(z: ZeroStatus) -> Status {
        match z {
            ZeroStatus::Zero => Status::Zero,
            ZeroStatus::ProbablyZero => Status::ProbablyZero,
            ZeroStatus::NonZero | ZeroStatus::ProbablyNonZero => Status::NonZero,
        }
    }
}

/// What a check is supposed to report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Expectation {
    /// Zero or ProbablyZero.
    Pass,
    /// NonZero (a negative control).
    Fail,
    /// Refused (a precondition is meant to reject the input).
    Refuse,
    /// Recorded for information; never affects the outcome.
    Info,
}

impl Expectation {
    pub fn met_by(self, s: Status) -> bool {
        match self {
            Expectation::Pass => s.passes(),
            Expectation::Fail => s == Status::NonZero,
            Expectation::Refuse => s == Status::Refused,
            Expectation::Info => true,
        }
    }
}

/// One named result produced by an analysis routine, before it is placed
/// in a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub name: String,
    pub anchor: String,
    pub status: Status,
    pub residual: String,
}

impl Finding {
    pub fn from_assessment(name: impl Into<String>, anchor: impl Into<String>, a: &Assessment) -> Finding {
        Finding { name: name.into(), anchor: anchor.into(), status: a.status.into(), residual: a.summary() }
    }

    pub fn refused(name: impl Into<String>, anchor: impl Into<String>, reason: impl Into<String>) -> Finding {
        Finding { name: name.into(), anchor: anchor.into(), status: Status::Refused, residual: reason.into() }
    }

    pub fn error(name: impl Into<String>, anchor: impl Into<String>, message: impl Into<String>) -> Finding {
        Finding { name: name.into(), anchor: anchor.into(), status: Status::Error, residual: message.into() }
    }

    pub fn info(name: impl Into<String>, anchor: impl Into<String>, status: Status, text: impl Into<String>) -> Finding {
        Finding { name: name.into(), anchor: anchor.into(), status, residual: text.into() }
    }

    pub fn passes(&self) -> bool {
        self.status.passes()
    }
}

/// A check as it appears in a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    pub expected: Expectation,
    pub residual: String,
}

impl CheckRecord {
    pub fn from_finding(prefix: &str, f: Finding, expected: Expectation) -> CheckRecord {
        let id = if prefix.is_empty() { f.name } else { format!("{prefix}.{}", f.name) };
        CheckRecord { id, anchor: f.anchor, status: f.status, expected, residual: f.residual }
    }

    pub fn met(&self) -> bool {
        self.expected.met_by(self.status)
    }
}

/// Counts over the check list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub met: usize,
    pub unmet: Vec<String>,
}

/// Everything that varies between otherwise identical runs lives here, so
/// determinism comparisons drop this one field.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timestamp {
    pub generated_unix_s: u64,
    pub total_wall_ms: f64,
    pub wall_ms: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub report_version: u32,
    pub tool_version: String,
    pub command: String,
    pub input_hash: String,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
    pub timestamp: Timestamp,
}

impl VerificationReport {
    pub fn new(command: &str, input_hash: String, seed: u64) -> VerificationReport {
        VerificationReport {
            report_version: REPORT_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            input_hash,
            seed,
            checks: Vec::new(),
            summary: Summary { total: 0, met: 0, unmet: Vec::new() },
            timestamp: Timestamp::default(),
        }
    }

    pub fn push(&mut self, record: CheckRecord, wall_ms: f64) {
        self.timestamp.wall_ms.insert(record.id.clone(), wall_ms);
        self.checks.push(record);
        self.refresh_summary();
    }

    fn refresh_summary(&mut self) {
        let unmet: Vec<String> = self.checks.iter().filter(|c| !c.met()).map(|c| c.id.clone()).collect();
        self.summary = Summary { total: self.checks.len(), met: self.checks.len() - unmet.len(), unmet };
    }

    /// True when every check reported what it was expected to report.
    pub fn success(&self) -> bool {
        self.summary.unmet.is_empty()
    }

    pub fn stamp(&mut self, total_wall_ms: f64) {
        self.timestamp.total_wall_ms = total_wall_ms;
        self.timestamp.generated_unix_s =
            std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// JSON with the timestamp field removed, for determinism comparisons.
    pub fn comparison_surface(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Some(o) = v.as_object_mut() {
            o.remove("timestamp");
        }
        serde_json::to_string(&v).expect("value serializes")
    }

    /// Human-readable listing, one line per check.
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let mark = if c.met() { "ok  " } else { "FAIL" };
            s.push_str(&format!("{mark} {:<13} {:<7} {}  [{}]\n", format!("{:?}", c.status), format!("{:?}", c.expected).to_lowercase(), c.id, c.anchor));
            if !c.residual.is_empty() && (!c.met() || c.status != Status::Zero) {
                s.push_str(&format!("       {}\n", c.residual));
            }
        }
        s.push_str(&format!("{} of {} checks met their expectation\n", self.summary.met, self.summary.total));
        s
    }
}

/// Hex SHA-256 of some bytes.
pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
