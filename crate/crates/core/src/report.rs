//! Report documents emitted by the command line tool.

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::format::canonical_json;

/// `{"command", "input_digest", "parameters", "results", "provenance",
/// "verdict"}`; `provenance` holds `seed`, `grid` and `bounds`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportFile {
    pub command: String,
    pub input_digest: String,
    pub parameters: Value,
    pub results: Value,
    pub seed: Option<u64>,
    pub grid: Option<Value>,
    pub bounds: Option<Value>,
    pub verdict: String,
}

/// Hex SHA-256 of a byte string.
pub fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

impl ReportFile {
    pub fn to_value(&self) -> Value {
        json!({
            "command": self.command,
            "input_digest": self.input_digest,
            "parameters": self.parameters,
            "results": self.results,
            "provenance": {
                "seed": self.seed,
                "grid": self.grid,
                "bounds": self.bounds,
            },
            "verdict": self.verdict,
        })
    }

    pub fn to_json(&self) -> String {
        canonical_json(&self.to_value())
    }

    /// One `path = value` line per leaf, in the same order and with the
    /// same number formatting as the JSON form.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        flatten("", &self.to_value(), &mut out);
        out
    }
}

fn flatten(path: &str, v: &Value, out: &mut String) {
    let child = |key: &str| {
        if path.is_empty() {
            key.to_string()
        } else {
            format!("{path}.{key}")
        }
    };
    match v {
        Value::Object(map) if !map.is_empty() => {
            for (k, x) in map {
                flatten(&child(k), x, out);
            }
        }
        Value::Array(xs) if !xs.is_empty() => {
            for (i, x) in xs.iter().enumerate() {
                flatten(&format!("{path}[{i}]"), x, out);
            }
        }
        leaf => {
            out.push_str(path);
            out.push_str(" = ");
            out.push_str(&leaf.to_string());
            out.push('\n');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_lines_follow_json_leaves() {
        let r = ReportFile {
            command: "x".into(),
            input_digest: digest(b""),
            parameters: json!({"b": 0.1, "a": [1, 2]}),
            results: json!({}),
            seed: Some(3),
            grid: None,
            bounds: None,
            verdict: "pass".into(),
        };
        let text = r.to_text();
        assert!(text.contains("parameters.a[1] = 2\n"));
        assert!(text.contains("parameters.b = 0.1\n"));
        assert!(text.contains("provenance.seed = 3\n"));
        assert!(r.input_digest.starts_with("e3b0c442"));
    }
}
