use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::RunConfig;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub check: String,
    /// sha256 of the canonical JSON of the generated inputs.
    pub inputs: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub ring: String,
    pub generated_at: u64,
    pub checks: Vec<CheckRecord>,
    pub passed: usize,
    pub failed: usize,
}

impl Report {
    /// Sorts the checks by name so the report does not depend on scheduling.
    pub fn new(config: &RunConfig, mut checks: Vec<CheckRecord>) -> Report {
        checks.sort_by(|a, b| a.check.cmp(&b.check));
        let passed = checks.iter().filter(|c| c.pass).count();
        let generated_at = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Report {
            suite: config.suite.clone(),
            seed: config.seed,
            ring: config.ring.label(),
            generated_at,
            failed: checks.len() - passed,
            passed,
            checks,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    /// The report as JSON without the timestamp, for determinism comparisons.
    pub fn stable_json(&self) -> Value {
        let mut v = self.to_json();
        v.as_object_mut().expect("object").remove("generated_at");
        v
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

pub fn digest_bytes(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn digest(v: &Value) -> String {
    digest_bytes(v.to_string().as_bytes())
}

/// Witness for an error from the core library, with its degree when it has one.
pub fn error_witness(e: &dercat_core::Error) -> Value {
    use dercat_core::Error::*;
    let degree = match e {
        NotAComplex { degree }
        | NotAChainMap { degree }
        | Hypothesis { degree, .. }
        | NotCommutative { degree, .. }
        | SnViolation { degree, .. }
        | NotSplitMono { degree, .. } => Some(*degree),
        _ => None,
    };
    match degree {
        Some(d) => json!({ "error": e.to_string(), "degree": d }),
        None => json!({ "error": e.to_string() }),
    }
}
