//! Report envelope and output formats.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::Format;

pub const TOOL: &str = "rocn";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Provenance of a report's input.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct InputInfo {
    pub path: Option<String>,
    pub sha256: String,
}

impl InputInfo {
    pub fn from_file(path: &str, bytes: &[u8]) -> Self {
        InputInfo { path: Some(path.to_string()), sha256: hex_digest(bytes) }
    }

    /// For commands without an input file: digest of the canonical arguments.
    pub fn from_arguments(args: &str) -> Self {
        InputInfo { path: None, sha256: hex_digest(args.as_bytes()) }
    }
}

pub fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Rounds every non-integer number to 15 significant digits; `-0` becomes `0`.
pub fn round_numbers(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            let rounded: f64 = format!("{x:.14e}").parse().unwrap_or(x);
            let rounded = if rounded == 0.0 { 0.0 } else { rounded };
            serde_json::Number::from_f64(rounded).map(Value::Number).unwrap_or(Value::Null)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_numbers).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, round_numbers(v))).collect()),
        other => other,
    }
}

pub fn envelope(command: &str, input: &InputInfo, report: Value) -> Value {
    json!({
        "tool": TOOL,
        "version": VERSION,
        "command": command,
        "input": input,
        "report": round_numbers(report),
    })
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some(String::new()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

/// Flattens nested objects into dotted paths. Arrays of scalars are joined
/// with spaces; nested arrays are indexed.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                flatten(&key(k), child, out);
            }
        }
        Value::Array(items) => {
            let scalars: Option<Vec<String>> = items.iter().map(scalar).collect();
            match scalars {
                Some(parts) => out.push((prefix.to_string(), parts.join(" "))),
                None => {
                    for (i, child) in items.iter().enumerate() {
                        flatten(&key(&i.to_string()), child, out);
                    }
                }
            }
        }
        leaf => out.push((prefix.to_string(), scalar(leaf).unwrap_or_default())),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn render(doc: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(doc).expect("serializable report");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut rows = Vec::new();
            flatten("", doc, &mut rows);
            let mut s = String::from("field,value\n");
            for (k, v) in rows {
                let _ = writeln!(s, "{},{}", csv_field(&k), csv_field(&v));
            }
            s
        }
        Format::Text => {
            let mut rows = Vec::new();
            flatten("", doc, &mut rows);
            let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            let mut s = String::new();
            for (k, v) in rows {
                let _ = writeln!(s, "{k:<width$}  {v}");
            }
            s
        }
    }
}

/// Merges extra top-level fields into a serialized report object.
pub fn with_fields(report: impl Serialize, extra: Map<String, Value>) -> Value {
    let mut v = serde_json::to_value(report).expect("serializable report");
    if let Value::Object(map) = &mut v {
        map.extend(extra);
    }
    v
}
