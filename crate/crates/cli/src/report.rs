//! JSON reports: `{schema_version, command, inputs_digest, results}`.

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub inputs_digest: String,
    pub results: Value,
}

/// SHA-256 of the canonical JSON encoding of `inputs` (object keys sorted).
pub fn inputs_digest(inputs: &Value) -> String {
    let bytes = serde_json::to_vec(inputs).expect("JSON values always serialize");
    format!("{:x}", Sha256::digest(bytes))
}

/// SHA-256 of raw file contents, for recording file inputs.
pub fn content_digest(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

impl Report {
    pub fn new(command: &str, inputs: &Value, results: Value) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            inputs_digest: inputs_digest(inputs),
            results,
        }
    }

    pub fn to_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn digest_ignores_key_order() {
        let a = json!({"a": 1, "b": [1.5, 2.0]});
        let b: Value = serde_json::from_str(r#"{"b": [1.5, 2.0], "a": 1}"#).unwrap();
        assert_eq!(inputs_digest(&a), inputs_digest(&b));
        assert_ne!(inputs_digest(&a), inputs_digest(&json!({"a": 2, "b": [1.5, 2.0]})));
    }

    #[test]
    fn report_layout() {
        let r = Report::new("alpha", &json!({"species": "Cs133"}), json!({"alpha": 7.3e-3}));
        let v: Value = serde_json::from_str(&r.to_pretty()).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["command"], "alpha");
        assert_eq!(v["inputs_digest"].as_str().unwrap().len(), 64);
    }
}
