//! Machine-readable command output.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

/// Output of one command.
///
/// Keys are emitted in sorted order, exact counts as decimal strings, and
/// probabilities rounded to the requested significant digits, so that a
/// report parses and re-serializes byte for byte.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub notes: BTreeMap<String, Value>,
    pub parameters: BTreeMap<String, Value>,
    pub results: Value,
    pub schema_version: u32,
    /// CSV header for tabular results.
    #[serde(skip)]
    pub columns: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            notes: BTreeMap::new(),
            parameters: BTreeMap::new(),
            results: Value::Array(Vec::new()),
            schema_version: SCHEMA_VERSION,
            columns: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn note(&mut self, key: &str, value: impl Into<Value>) {
        self.notes.insert(key.to_string(), value.into());
    }

    /// Tabular results with a fixed column order.
    pub fn table(&mut self, columns: &[&str], rows: Vec<Vec<Value>>) {
        self.columns = columns.iter().map(|c| c.to_string()).collect();
        self.results = Value::Array(
            rows.into_iter()
                .map(|row| {
                    let obj: Map<String, Value> = self.columns.iter().cloned().zip(row).collect();
                    Value::Object(obj)
                })
                .collect(),
        );
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        match &self.results {
            Value::Array(rows) => {
                let columns: Vec<String> = if self.columns.is_empty() {
                    match rows.first() {
                        Some(Value::Object(o)) => o.keys().cloned().collect(),
                        _ => Vec::new(),
                    }
                } else {
                    self.columns.clone()
                };
                w.write_record(&columns)?;
                for row in rows {
                    w.write_record(columns.iter().map(|c| cell(row.get(c))))?;
                }
            }
            Value::Object(map) => {
                w.write_record(["key", "value"])?;
                for (k, v) in map {
                    w.write_record([k.clone(), cell(Some(v))])?;
                }
            }
            other => {
                w.write_record(["value"])?;
                w.write_record([cell(Some(other))])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

fn cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(v) => v.to_string(),
    }
}

/// Round to `digits` significant digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits.clamp(1, 17) - 1, x)
        .parse()
        .unwrap_or(x)
}

/// Round to `digits` decimal places.
pub fn round_dp(x: f64, digits: usize) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format!("{:.*}", digits.min(17), x).parse().unwrap_or(x)
}

/// Error object printed for internal failures.
pub fn error_json(kind: &str, message: &str) -> String {
    let v = serde_json::json!({
        "error": { "kind": kind, "message": message },
        "schema_version": SCHEMA_VERSION,
    });
    serde_json::to_string_pretty(&v).expect("errors serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(round_sig(std::f64::consts::PI / 3.0, 7), 1.047198);
        assert_eq!(round_sig(0.000017764289, 3), 0.0000178);
        assert_eq!(round_sig(-0.0887664, 4), -0.08877);
        assert_eq!(round_dp(std::f64::consts::PI / 3.0, 6), 1.047198);
        assert_eq!(round_dp(0.47061622923, 5), 0.47062);
    }

    #[test]
    fn csv_layout() {
        let mut r = Report::new("x");
        r.table(
            &["l", "count"],
            vec![vec![0.into(), "12".into()], vec![1.into(), "3".into()]],
        );
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "l,count\n0,12\n1,3\n");
    }
}
