//! Machine-readable verification reports.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub const FORMAT: &str = "fibrelab/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    ResourceExceeded,
    InvalidInput,
}

impl Status {
    /// Process exit code for this status.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::InvalidInput => 2,
            Status::ResourceExceeded => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::ResourceExceeded => "resource_exceeded",
            Status::InvalidInput => "invalid_input",
        }
    }
}

/// Outcome of a check together with the data that justifies it.
///
/// `fail` and `invalid_input` reports always carry a non-empty witness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub format: String,
    pub check_name: String,
    pub status: Status,
    #[serde(default)]
    pub witness: Value,
    #[serde(default)]
    pub stats: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn is_empty(v: &Value) -> bool {
    match v {
        Value::Null => true,
        Value::Object(m) => m.is_empty(),
        Value::Array(a) => a.is_empty(),
        Value::String(s) => s.is_empty(),
        _ => false,
    }
}

impl VerificationReport {
    fn new(check: &str, status: Status, witness: Value) -> Self {
        let witness = if status != Status::Pass && is_empty(&witness) {
            json!({ "reason": "unspecified" })
        } else {
            witness
        };
        VerificationReport {
            format: FORMAT.to_string(),
            check_name: check.to_string(),
            status,
            witness,
            stats: BTreeMap::new(),
            seed: None,
        }
    }

    pub fn pass(check: &str) -> Self {
        Self::new(check, Status::Pass, Value::Null)
    }

    pub fn pass_with(check: &str, witness: Value) -> Self {
        Self::new(check, Status::Pass, witness)
    }

    pub fn fail(check: &str, witness: Value) -> Self {
        Self::new(check, Status::Fail, witness)
    }

    pub fn resource_exceeded(check: &str, witness: Value) -> Self {
        Self::new(check, Status::ResourceExceeded, witness)
    }

    pub fn invalid_input(check: &str, witness: Value) -> Self {
        Self::new(check, Status::InvalidInput, witness)
    }

    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn with_stat(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.stats.insert(key.to_string(), value.into());
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// Drops every stat whose key mentions elapsed time.
    pub fn without_timing(mut self) -> Self {
        self.stats.retain(|k, _| !k.starts_with("elapsed"));
        self
    }

    /// Combines sub-reports: passes iff all of them pass; the first non-pass
    /// status wins otherwise.
    pub fn all(check: &str, parts: Vec<VerificationReport>) -> Self {
        let status = parts
            .iter()
            .map(|r| r.status)
            .find(|s| *s != Status::Pass)
            .unwrap_or(Status::Pass);
        let summary: Vec<Value> = parts
            .iter()
            .map(|r| {
                if r.is_pass() {
                    json!({ "check": r.check_name, "status": "pass" })
                } else {
                    json!({ "check": r.check_name, "status": r.status.as_str(), "witness": r.witness })
                }
            })
            .collect();
        let mut out = Self::new(check, status, json!({ "parts": summary }));
        out.stats.insert("parts".into(), json!(parts.len()));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
